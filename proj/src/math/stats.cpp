#include "subcover/math/stats.hpp"
#include "subcover/math/special.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subcover::math {

MeanVar mean_var(const std::vector<double>& xs) {
    MeanVar mv;
    mv.n = static_cast<long long>(xs.size());
    if (mv.n == 0)
        return mv;
    bool all_equal = true;
    for (double x : xs)
        if (x != xs.front()) {
            all_equal = false;
            break;
        }
    if (all_equal) { // degenerate sample: no summation rounding
        mv.mean = xs.front();
        return mv;
    }
    double s = 0.0;
    for (double x : xs) s += x;
    mv.mean = s / mv.n;
    if (mv.n < 2)
        return mv;
    double s2 = 0.0, s4 = 0.0;
    for (double x : xs) {
        const double d = x - mv.mean;
        s2 += d * d;
        s4 += d * d * d * d;
    }
    mv.var = s2 / (mv.n - 1);
    mv.m4 = s4 / mv.n;
    mv.stderr_mean = std::sqrt(mv.var / mv.n);
    return mv;
}

double variance_stderr(const MeanVar& mv) {
    if (mv.n < 2)
        return 0.0;
    const double n = static_cast<double>(mv.n);
    const double v = (mv.m4 - mv.var * mv.var * (n - 3.0) / (n - 1.0)) / n;
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(i / na - j / nb));
    }
    return d;
}

double ks_vs_cdf(std::vector<double> a, const std::function<double(double)>& cdf) {
    if (a.empty())
        throw std::invalid_argument("ks_vs_cdf: empty sample");
    std::sort(a.begin(), a.end());
    const double n = static_cast<double>(a.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double f = cdf(a[i]);
        d = std::max(d, std::fabs((i + 1) / n - f));
        d = std::max(d, std::fabs(i / n - f));
    }
    return d;
}

namespace {
double kolmogorov_c(double level) {
    // sqrt(-ln(level/2)/2), the asymptotic inverse of the Kolmogorov tail
    return std::sqrt(-0.5 * std::log(0.5 * level));
}
} // namespace

double ks_critical_one_sample(double level, long long n) {
    return kolmogorov_c(level) / std::sqrt(static_cast<double>(n));
}

double ks_critical_two_sample(double level, long long n, long long m) {
    const double nn = static_cast<double>(n), mm = static_cast<double>(m);
    return kolmogorov_c(level) * std::sqrt((nn + mm) / (nn * mm));
}

Chi2Result chi2_two_sample(const std::vector<long long>& a,
                           const std::vector<long long>& b,
                           double min_expected) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("chi2_two_sample: empty sample");
    long long lo = a[0], hi = a[0];
    for (long long v : a) { lo = std::min(lo, v); hi = std::max(hi, v); }
    for (long long v : b) { lo = std::min(lo, v); hi = std::max(hi, v); }
    const std::size_t nbins = static_cast<std::size_t>(hi - lo + 1);
    std::vector<double> ca(nbins, 0.0), cb(nbins, 0.0);
    for (long long v : a) ca[static_cast<std::size_t>(v - lo)] += 1.0;
    for (long long v : b) cb[static_cast<std::size_t>(v - lo)] += 1.0;

    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double tot = na + nb;

    // merge bins left to right until each merged bin has enough pooled mass
    std::vector<double> ma, mb;
    double acca = 0.0, accb = 0.0;
    for (std::size_t i = 0; i < nbins; ++i) {
        acca += ca[i];
        accb += cb[i];
        const double pooled = acca + accb;
        if (pooled * na / tot >= min_expected && pooled * nb / tot >= min_expected) {
            ma.push_back(acca);
            mb.push_back(accb);
            acca = accb = 0.0;
        }
    }
    if (acca + accb > 0.0) {
        if (!ma.empty()) {
            ma.back() += acca;
            mb.back() += accb;
        } else {
            ma.push_back(acca);
            mb.push_back(accb);
        }
    }

    Chi2Result r;
    if (ma.size() < 2) {
        r.dof = 0;
        r.p_value = 1.0;
        return r;
    }
    for (std::size_t i = 0; i < ma.size(); ++i) {
        const double pooled = (ma[i] + mb[i]) / tot;
        const double ea = pooled * na;
        const double eb = pooled * nb;
        r.stat += (ma[i] - ea) * (ma[i] - ea) / ea;
        r.stat += (mb[i] - eb) * (mb[i] - eb) / eb;
    }
    r.dof = static_cast<int>(ma.size()) - 1;
    r.p_value = chi2_sf(r.stat, r.dof);
    return r;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("ols_slope: need >= 2 matched points");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / n, my = sy / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("ols_slope: degenerate x values");
    return sxy / sxx;
}

} // namespace subcover::math
