#include <doctest.h>

#include "subcover/covering.hpp"
#include "subcover/math/stats.hpp"

#include <cmath>
#include <stdexcept>

using namespace subcover;

namespace {

SamplePath drift_path(double d, double horizon) {
    SamplePath p;
    p.kind = SamplePath::Kind::events;
    p.horizon = horizon;
    p.drift = d;
    return p;
}

} // namespace

TEST_CASE("drift-only covering: renewal count") {
    const SamplePath p = drift_path(1.0, 1.0);
    const CoveringCount c = count_covering_path(p, 1.0, 0.1);
    CHECK(c.renewal_count == 10);
    CHECK(c.method == "path-events");
    REQUIRE(c.renewal_times.size() == 10);
    CHECK(c.renewal_times.front() == doctest::Approx(0.1));
}

TEST_CASE("drift-only covering: literal count with binary-exact levels") {
    // delta = 0.125 is exact in binary, so the T_N = t tie is hit exactly
    const SamplePath p = drift_path(1.0, 1.0);
    const CoveringCount tie = count_covering_path(p, 1.0, 0.125);
    CHECK(tie.renewal_count == 8);
    CHECK(tie.literal_count == 8); // T_8 = t exactly: no partial interval

    const CoveringCount part = count_covering_path(p, 0.9, 0.125);
    CHECK(part.renewal_count == 7);
    CHECK(part.literal_count == 8); // T_7 = 0.875 < 0.9: partial interval
}

TEST_CASE("single jump, no drift: one renewal then flat") {
    SamplePath p = drift_path(0.0, 1.0);
    p.times = {0.5};
    p.jumps = {5.0};
    const CoveringCount c = count_covering_path(p, 1.0, 0.1);
    CHECK(c.renewal_count == 1);
    CHECK(c.literal_count == 2);
    CHECK(c.renewal_times[0] == 0.5);
}

TEST_CASE("t beyond the path horizon is rejected") {
    const SamplePath p = drift_path(1.0, 1.0);
    CHECK_THROWS_AS(count_covering_path(p, 2.0, 0.1), std::invalid_argument);
}

TEST_CASE("coarsening a skeleton can only lose renewals") {
    // same trajectory at steps h and 2h: grid detection on the coarser grid
    // is later, so N_2h <= N_h pathwise
    const auto spec = SubordinatorSpec::make_stable(0.5);
    for (int rep = 0; rep < 300; ++rep) {
        RngStream rng(91, static_cast<uint64_t>(rep));
        const SamplePath fine = simulate_skeleton(spec, 1.0, 0.005, rng);
        SamplePath coarse;
        coarse.kind = SamplePath::Kind::skeleton;
        coarse.horizon = fine.horizon;
        coarse.step = 2.0 * fine.step;
        for (std::size_t i = 0; i < fine.values.size(); i += 2)
            coarse.values.push_back(fine.values[i]);
        const CoveringCount cf = count_covering_path(fine, 1.0, 0.05);
        const CoveringCount cc = count_covering_path(coarse, 1.0, 0.05);
        REQUIRE(cc.renewal_count <= cf.renewal_count);
    }
}

TEST_CASE("renewal-based count: drift-only is deterministic") {
    const auto spec = SubordinatorSpec::make_drift_only(1.0);
    RngStream rng(97, 0);
    const CoveringCount c =
        count_covering_renewal(spec, 1.0, 0.1, Engine::events_engine(), rng);
    CHECK(c.renewal_count == 10);
    CHECK(c.method == "renewal");
}

TEST_CASE("path and renewal pipelines agree in distribution (chi-square)") {
    // both engines are exact for compound Poisson with drift
    const auto spec = SubordinatorSpec::make_compound_poisson_fixed(1.0, 1.0, 1.0);
    const int n = 10000;
    std::vector<long long> via_path(n), via_renewal(n);
    for (int i = 0; i < n; ++i) {
        RngStream rng(101, static_cast<uint64_t>(i));
        const SamplePath p = simulate_events(spec, 1.0, 0.0, false, rng);
        via_path[i] = count_covering_path(p, 1.0, 0.5).renewal_count;
    }
    for (int i = 0; i < n; ++i) {
        RngStream rng(103, static_cast<uint64_t>(i));
        via_renewal[i] =
            count_covering_renewal(spec, 1.0, 0.5, Engine::events_engine(), rng).renewal_count;
    }
    const math::Chi2Result r = math::chi2_two_sample(via_path, via_renewal);
    CHECK(r.p_value > 0.01);
}

TEST_CASE("renewal mean follows the elementary renewal theorem (stable)") {
    const auto spec = SubordinatorSpec::make_stable(0.5);
    const int n = 1000;
    std::vector<double> ns(n);
    for (int i = 0; i < n; ++i) {
        RngStream rng(107, static_cast<uint64_t>(i));
        ns[i] = static_cast<double>(
            count_covering_renewal(spec, 1.0, 1e-4, Engine::events_engine(), rng).renewal_count);
    }
    const math::MeanVar mv = math::mean_var(ns);
    const double want = std::tgamma(1.5) / 0.01; // t / U(delta)
    CHECK(std::fabs(mv.mean - want) / want < 0.05);
}

TEST_CASE("renewal identity holds along returned renewal times") {
    const auto spec = SubordinatorSpec::make_compound_poisson_exp(3.0, 0.2, 0.5);
    for (int rep = 0; rep < 100; ++rep) {
        RngStream rng(109, static_cast<uint64_t>(rep));
        const SamplePath p = simulate_events(spec, 1.0, 0.0, false, rng);
        const double delta = 0.3;
        const CoveringCount c = count_covering_path(p, 1.0, delta);
        double prev = 0.0;
        double base = 0.0;
        for (double tk : c.renewal_times) {
            REQUIRE(tk > prev);
            const double val = p.value_at(tk);
            // increment over the renewal interval reaches delta (jump
            // crossings exceed it strictly; drift crossings touch it)
            REQUIRE(val - base >= delta * (1.0 - 1e-12));
            // no event strictly inside the interval may exceed the level
            for (std::size_t j = 0; j < p.times.size(); ++j) {
                const double s = p.times[j];
                if (s > prev && s < tk)
                    REQUIRE(p.value_at(s) - base <= delta * (1.0 + 1e-12));
            }
            base = val;
            prev = tk;
        }
    }
}

TEST_CASE("covering counts are monotone in t and delta") {
    const auto spec = SubordinatorSpec::make_compound_poisson_exp(5.0, 0.3, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        RngStream rng(113, static_cast<uint64_t>(rep));
        const SamplePath p = simulate_events(spec, 1.0, 0.0, false, rng);
        long long prev_t = -1;
        for (double t : {0.3, 0.6, 1.0}) {
            const long long n = count_covering_path(p, t, 0.1).renewal_count;
            REQUIRE(n >= prev_t);
            prev_t = n;
        }
        long long prev_d = std::numeric_limits<long long>::max();
        for (double delta : {0.05, 0.1, 0.3}) {
            const long long n = count_covering_path(p, 1.0, delta).renewal_count;
            REQUIRE(n <= prev_d);
            prev_d = n;
        }
    }
}

TEST_CASE("splitting defect: drift-only hand-enumerated examples") {
    const SamplePath p = drift_path(1.0, 1.0);
    CHECK(splitting_defect(p, 0.97, {0.09}, 0.1) == 0);  // pieces 1 + 9 = global 10
    CHECK(splitting_defect(p, 0.97, {0.55}, 0.1) == -1); // pieces 6 + 5 = 11
    CHECK(splitting_defect(p, 0.97, {}, 0.1) == 0);      // no split, no defect
    CHECK_THROWS_AS(splitting_defect(p, 0.97, {1.5}, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(splitting_defect(p, 0.97, {0.5, 0.4}, 0.1), std::invalid_argument);
}

TEST_CASE("splitting defect bound -j < A <= 0 over random paths") {
    const auto spec = SubordinatorSpec::make_compound_poisson_fixed(1.0, 1.0, 1.0);
    for (int rep = 0; rep < 1000; ++rep) {
        RngStream rng(127, static_cast<uint64_t>(rep));
        const SamplePath p = simulate_events(spec, 1.0, 0.0, false, rng);
        for (int j : {2, 4, 8}) {
            std::vector<double> splits;
            for (int i = 1; i < j; ++i)
                splits.push_back(static_cast<double>(i) / j);
            for (double delta : {0.3, 0.7}) {
                const long long a = splitting_defect(p, 1.0, splits, delta);
                REQUIRE(a <= 0);
                REQUIRE(a > -j);
            }
        }
    }
}

TEST_CASE("splitting defect bound holds for truncated stable event paths") {
    const auto spec = SubordinatorSpec::make_stable(0.5);
    for (int rep = 0; rep < 200; ++rep) {
        RngStream rng(131, static_cast<uint64_t>(rep));
        const SamplePath p = simulate_events(spec, 1.0, 1e-4, true, rng);
        for (int j : {2, 4}) {
            std::vector<double> splits;
            for (int i = 1; i < j; ++i)
                splits.push_back(static_cast<double>(i) / j);
            const long long a = splitting_defect(p, 1.0, splits, 0.05);
            REQUIRE(a <= 0);
            REQUIRE(a > -j);
        }
    }
}
