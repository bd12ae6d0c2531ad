#include <doctest.h>

#include "subcover/rng.hpp"

#include <cmath>
#include <set>

using namespace subcover;

TEST_CASE("identical (seed, index) replays identical sequences") {
    RngStream a(42, 7), b(42, 7);
    for (int i = 0; i < 1000; ++i)
        REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct stream indices decorrelate") {
    RngStream a(42, 7), b(42, 8), c(43, 7);
    int same_ab = 0, same_ac = 0;
    for (int i = 0; i < 1000; ++i) {
        const uint64_t x = a.next_u64();
        if (x == b.next_u64()) ++same_ab;
        if (x == c.next_u64()) ++same_ac;
    }
    CHECK(same_ab == 0);
    CHECK(same_ac == 0);
}

TEST_CASE("uniform01 stays strictly inside (0,1) with the right moments") {
    RngStream rng(1, 0);
    const int n = 200000;
    double s = 0.0, s2 = 0.0, lo = 1.0, hi = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        s += u;
        s2 += u * u;
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    // 5 sigma bands
    CHECK(std::fabs(mean - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::fabs(var - 1.0 / 12.0) < 5.0 * 0.0745 / std::sqrt(1.0 * n));
}

TEST_CASE("normal and exponential moments") {
    RngStream rng(5, 3);
    const int n = 200000;
    double sn = 0.0, sn2 = 0.0, se = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sn += z;
        sn2 += z * z;
        se += rng.exponential(2.0);
    }
    CHECK(std::fabs(sn / n) < 5.0 / std::sqrt(1.0 * n));
    CHECK(std::fabs(sn2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
    CHECK(std::fabs(se / n - 0.5) < 5.0 * 0.5 / std::sqrt(1.0 * n));
}
