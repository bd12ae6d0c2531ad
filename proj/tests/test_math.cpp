#include <doctest.h>

#include "subcover/math/quadrature.hpp"
#include "subcover/math/special.hpp"
#include "subcover/math/stats.hpp"

#include <cmath>
#include <stdexcept>

using namespace subcover;

TEST_CASE("exponential integral against reference values") {
    // Abramowitz & Stegun table values
    CHECK(math::expint_e1(0.1) == doctest::Approx(1.8229239584193906).epsilon(1e-10));
    CHECK(math::expint_e1(0.5) == doctest::Approx(0.55977359477616083).epsilon(1e-10));
    CHECK(math::expint_e1(1.0) == doctest::Approx(0.21938393439552029).epsilon(1e-10));
    CHECK(math::expint_e1(5.0) == doctest::Approx(1.1482955912753257e-3).epsilon(1e-10));
    CHECK(math::expint_e1(10.0) == doctest::Approx(4.156968929685325e-6).epsilon(1e-10));
    CHECK_THROWS_AS(math::expint_e1(0.0), std::domain_error);
}

TEST_CASE("exponential integral against direct quadrature") {
    for (double x : {0.3, 0.9, 1.1, 2.0, 7.0}) {
        const double direct = math::integrate_adaptive(
            [](double t) { return std::exp(-t) / t; }, x, x + 60.0, 1e-13);
        CHECK(math::expint_e1(x) == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("regularized incomplete gamma special cases") {
    // Q(1/2, x) = erfc(sqrt(x)), Q(1, x) = e^-x, Q(2, x) = (1+x) e^-x
    for (double x : {0.1, 1.0, 5.0}) {
        CHECK(math::gamma_q(0.5, x) == doctest::Approx(std::erfc(std::sqrt(x))).epsilon(1e-12));
        CHECK(math::gamma_q(1.0, x) == doctest::Approx(std::exp(-x)).epsilon(1e-12));
        CHECK(math::gamma_q(2.0, x) == doctest::Approx((1.0 + x) * std::exp(-x)).epsilon(1e-12));
    }
    CHECK(math::chi2_sf(0.0, 3) == doctest::Approx(1.0));
    CHECK(math::chi2_sf(11.345, 3) == doctest::Approx(0.01).epsilon(1e-3)); // 1% critical value
}

TEST_CASE("adaptive quadrature basics") {
    CHECK(math::integrate_adaptive([](double x) { return x * x; }, 0, 1, 1e-12) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    // integrable singularity on a log scale: int_0^u x^{-1/2} dx = 2 sqrt(u)
    CHECK(math::integrate_tail_from_zero([](double x) { return 1.0 / std::sqrt(x); }, 0.81) ==
          doctest::Approx(1.8).epsilon(1e-8));
    // exp transform: int e^{-l x} x^{-1/2} dx = sqrt(pi/l)
    CHECK(math::integrate_tail_exp_transform([](double x) { return 1.0 / std::sqrt(x); }, 2.0) ==
          doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-8));
    // smooth tail: int e^{-l x} e^{-x} dx = 1/(1+l)
    CHECK(math::integrate_tail_exp_transform([](double x) { return std::exp(-x); }, 3.0) ==
          doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("bisect finds monotone roots") {
    const double r = math::bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14);
    CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK_THROWS_AS(math::bisect([](double x) { return x + 10.0; }, 0.0, 1.0, 1e-12),
                    std::invalid_argument);
}

TEST_CASE("mean, variance and OLS helpers") {
    const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
    const math::MeanVar mv = math::mean_var(xs);
    CHECK(mv.mean == doctest::Approx(2.5));
    CHECK(mv.var == doctest::Approx(5.0 / 3.0));
    CHECK(mv.stderr_mean == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));

    const std::vector<double> x{1, 2, 3, 4, 5}, y{3, 5, 7, 9, 11};
    CHECK(math::ols_slope(x, y) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("KS statistic and critical values") {
    // identical samples have statistic 0
    std::vector<double> a{0.1, 0.2, 0.3, 0.7};
    CHECK(math::ks_two_sample(a, a) == doctest::Approx(0.0));
    // uniform sample against its own CDF must stay below the 1% critical value
    std::vector<double> u;
    for (int i = 0; i < 1000; ++i)
        u.push_back((i + 0.5) / 1000.0);
    const double d = math::ks_vs_cdf(u, [](double x) { return x; });
    CHECK(d < math::ks_critical_one_sample(0.01, 1000));
    CHECK(math::ks_critical_one_sample(0.01, 10000) == doctest::Approx(0.016276).epsilon(1e-3));
}

TEST_CASE("two-sample chi-square accepts equal distributions") {
    std::vector<long long> a, b;
    for (int i = 0; i < 500; ++i) {
        a.push_back(i % 7);
        b.push_back((i + 3) % 7);
    }
    const math::Chi2Result r = math::chi2_two_sample(a, b);
    CHECK(r.p_value > 0.01);
}
