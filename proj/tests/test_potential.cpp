#include <doctest.h>

#include "subcover/math/quadrature.hpp"
#include "subcover/potential.hpp"

#include <cmath>
#include <stdexcept>

using namespace subcover;

TEST_CASE("Laplace identity oracle behind the stable potential formula") {
    // with U(x) = x^a/Gamma(1+a), int e^{-l x} dU(x) must equal 1/Phi(l);
    // checked by quadrature before the formula is used as a test oracle
    for (double alpha : {0.3, 0.5, 0.7}) {
        auto du = [&](double x) {
            return alpha * std::pow(x, alpha - 1.0) / std::tgamma(1.0 + alpha);
        };
        for (double lam : {1.0, 5.0}) {
            const double lhs = math::integrate_tail_exp_transform(du, lam, 1e-10);
            CHECK(lhs == doctest::Approx(std::pow(lam, -alpha)).epsilon(1e-7));
        }
    }
}

TEST_CASE("potential_mc: drift-only is exact with zero error") {
    const auto spec = SubordinatorSpec::make_drift_only(1.0);
    RngStream rng(1, 1);
    const PotentialEstimate e = potential_mc(spec, 0.1, 100, Engine::events_engine(), rng);
    CHECK(e.value == 0.1);
    CHECK(e.stderr_ == 0.0);
    CHECK(e.method == PotentialMethod::monte_carlo);
    CHECK_THROWS_AS(potential_mc(spec, 0.1, 1, Engine::events_engine(), rng),
                    std::invalid_argument);
}

TEST_CASE("potential_mc: compound Poisson closed form") {
    const auto spec = SubordinatorSpec::make_compound_poisson_fixed(1.0, 1.0, 1.0);
    RngStream rng(3, 1);
    const PotentialEstimate e = potential_mc(spec, 0.5, 20000, Engine::events_engine(), rng);
    CHECK(std::fabs(e.value - (1.0 - std::exp(-0.5))) < 3.0 * e.stderr_);
}

TEST_CASE("potential_mc: stable against the Laplace-identity value") {
    const auto spec = SubordinatorSpec::make_stable(0.5);
    RngStream rng(5, 1);
    const PotentialEstimate e = potential_mc(spec, 0.01, 20000, Engine::events_engine(), rng);
    CHECK(std::fabs(e.value - 0.1 / std::tgamma(1.5)) < 3.0 * e.stderr_);
}

TEST_CASE("q-potential: drift-only closed form through both pipelines") {
    const auto spec = SubordinatorSpec::make_drift_only(1.0);
    RngStream rng(7, 1);
    const auto [a, b] = potential_q_two_ways(spec, 0.1, 1.0, 200, rng);
    const double want = 1.0 - std::exp(-0.1); // (1 - e^{-q T})/q with T = 0.1
    // estimator B is exact here (deterministic passage), A carries grid bias
    CHECK(b.value == doctest::Approx(want).epsilon(1e-12));
    CHECK(b.stderr_ == 0.0);
    CHECK(std::fabs(a.value - want) < 3e-3);
    CHECK(a.method == PotentialMethod::q_identity);
    CHECK_THROWS_AS(potential_q_two_ways(spec, 0.1, 0.0, 100, rng), std::invalid_argument);
}

TEST_CASE("q-potential: the two independent pipelines agree for gamma") {
    const auto spec = SubordinatorSpec::make_gamma(1.0, 1.0);
    RngStream rng(11, 1);
    const auto [a, b] = potential_q_two_ways(spec, 0.1, 1.0, 10000, rng);
    const double combined = std::sqrt(a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_);
    CHECK(std::fabs(a.value - b.value) < 3.0 * combined);
}

TEST_CASE("U_q is below U(delta)") {
    const auto spec = SubordinatorSpec::make_gamma(1.0, 1.0);
    RngStream rng(13, 1);
    const auto [a, b] = potential_q_two_ways(spec, 0.1, 1.0, 4000, rng);
    RngStream rng2(13, 2);
    const PotentialEstimate u = potential_mc(spec, 0.1, 4000, Engine::events_engine(), rng2);
    CHECK(b.value <= u.value + 3.0 * (b.stderr_ + u.stderr_));
    CHECK(a.value <= u.value + 3.0 * (a.stderr_ + u.stderr_) + 1e-3);
}

TEST_CASE("series: compound Poisson sums to the closed form") {
    const auto spec = SubordinatorSpec::make_compound_poisson_fixed(1.0, 1.0, 1.0);
    const auto ests = potential_series(spec, {0.5, 0.2});
    CHECK(ests[0].value == doctest::Approx(1.0 - std::exp(-0.5)).epsilon(1e-6));
    CHECK(ests[1].value == doctest::Approx(1.0 - std::exp(-0.2)).epsilon(1e-6));
    CHECK_FALSE(ests[0].flagged);
    CHECK(ests[0].method == PotentialMethod::series);
}

TEST_CASE("series: drift-only keeps only the n = 0 term") {
    const auto spec = SubordinatorSpec::make_drift_only(2.0);
    const auto ests = potential_series(spec, {0.1});
    CHECK(ests[0].value == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(ests[0].stderr_ == 0.0);
}

TEST_CASE("series requires positive drift") {
    CHECK_THROWS_AS(potential_series(SubordinatorSpec::make_stable(0.5), {0.1}),
                    std::invalid_argument);
}

TEST_CASE("series agrees with Monte Carlo for stable plus drift") {
    const auto spec = SubordinatorSpec::make_stable(0.5, 1.0);
    const auto est = potential_series(spec, {0.01})[0];
    RngStream rng(17, 1);
    const PotentialEstimate mc = potential_mc(spec, 0.01, 20000, Engine::events_engine(), rng);
    CHECK(std::fabs(est.value - mc.value) < 3.0 * mc.stderr_ + est.stderr_ + 1e-6);
}

TEST_CASE("asymptotic potential values") {
    const PotentialEstimate s = potential_asymptotic(SubordinatorSpec::make_stable(0.5), 0.01);
    CHECK(s.value == doctest::Approx(0.1 / std::tgamma(1.5)).epsilon(1e-12));
    CHECK(s.note.find("exact") != std::string::npos);

    const PotentialEstimate g = potential_asymptotic(SubordinatorSpec::make_gamma(1, 1), 1e-4);
    CHECK(g.value == doctest::Approx(1.0 / std::log1p(1e4)).epsilon(1e-12));
    CHECK(g.value == doctest::Approx(0.108574).epsilon(1e-4));
    CHECK(g.note.find("slow") != std::string::npos);

    const PotentialEstimate d = potential_asymptotic(SubordinatorSpec::make_drift_only(1.0), 0.1);
    CHECK(d.value == doctest::Approx(0.1).epsilon(1e-12));

    LevyTail t;
    t.eval = [](double x) { return std::pow(x, -0.5); };
    CHECK_THROWS_AS(
        potential_asymptotic(SubordinatorSpec::make_truncated_general(t, 1e-3, 1.0), 0.1),
        std::invalid_argument);
}

TEST_CASE("evaluators are nondecreasing in delta") {
    const std::vector<double> xs{1e-4, 1e-3, 1e-2, 1e-1};
    const auto spec = SubordinatorSpec::make_compound_poisson_fixed(1.0, 1.0, 1.0);
    const auto se = potential_series(spec, xs);
    for (std::size_t i = 1; i < se.size(); ++i)
        CHECK(se[i].value >= se[i - 1].value);
    double prev = 0.0;
    for (double x : xs) {
        const double v = potential_asymptotic(SubordinatorSpec::make_stable(0.5), x).value;
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("best_potential picks the most accurate route") {
    CHECK(best_potential(SubordinatorSpec::make_drift_only(1.0), 0.1, 100, 1, 0).method ==
          PotentialMethod::asymptotic);
    CHECK(best_potential(SubordinatorSpec::make_stable(0.5), 0.1, 100, 1, 0).method ==
          PotentialMethod::asymptotic);
    CHECK(best_potential(SubordinatorSpec::make_compound_poisson_fixed(1, 1, 1), 0.1, 100, 1, 0)
              .method == PotentialMethod::series);
    CHECK(best_potential(SubordinatorSpec::make_gamma(1, 1), 0.1, 1000, 1, 0).method ==
          PotentialMethod::monte_carlo);
}

TEST_CASE("geometric delta grid: drift-only closed form") {
    const DeltaGrid g = solve_delta_grid(SubordinatorSpec::make_drift_only(1.0), 0.5, 3,
                                         PotentialMethod::asymptotic);
    REQUIRE(g.deltas.size() == 3);
    CHECK(g.deltas[0] == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(g.deltas[1] == doctest::Approx(0.25).epsilon(1e-3));
    CHECK(g.deltas[2] == doctest::Approx(0.125).epsilon(1e-3));
}

TEST_CASE("geometric delta grid: stable closed form and postcondition") {
    const auto spec = SubordinatorSpec::make_stable(0.5);
    const DeltaGrid g = solve_delta_grid(spec, 0.5, 4, PotentialMethod::asymptotic);
    REQUIRE(g.deltas.size() == 4);
    // delta_j = (Gamma(1.5) r^j)^2
    CHECK(g.deltas[0] == doctest::Approx(0.19635094217912678).epsilon(2e-3));
    for (int j = 1; j <= 4; ++j) {
        const double u = potential_asymptotic(spec, g.deltas[j - 1]).value;
        CHECK(u == doctest::Approx(std::pow(0.5, j)).epsilon(1e-3));
        if (j >= 2)
            CHECK(g.deltas[j - 1] < g.deltas[j - 2]);
    }
    CHECK_THROWS_AS(solve_delta_grid(spec, 1.5, 3, PotentialMethod::asymptotic),
                    std::invalid_argument);
}

TEST_CASE("two-sided bound constants bracket the exact stable potential") {
    // U Phi(1/delta) = 1/Gamma(1+alpha) for the pure stable family
    for (double alpha : {0.3, 0.5, 0.7}) {
        const double product = 1.0 / std::tgamma(1.0 + alpha);
        CHECK(product >= (1.0 - 2.0 / M_E) / (1.0 - 1.0 / M_E));
        CHECK(product <= M_E);
    }
}

TEST_CASE("series flags configurations it cannot certify") {
    // rate/drift ratio so extreme that the alternating terms are still
    // growing when the term budget runs out
    const auto spec = SubordinatorSpec::make_compound_poisson_fixed(200.0, 2.0, 0.01);
    const auto ests = potential_series(spec, {1.0}, 1.0 / 64.0);
    CHECK(ests[0].flagged);
    CHECK(ests[0].note.find("not certified") != std::string::npos);
}

TEST_CASE("delta grid truncates below the evaluator's reliable range") {
    const DeltaGrid g = solve_delta_grid(SubordinatorSpec::make_drift_only(1.0), 0.5, 60,
                                         PotentialMethod::asymptotic);
    CHECK(g.truncated);
    CHECK(g.deltas.size() < 60);
    CHECK(!g.note.empty());
}
