#ifndef SUBCOVER_MATH_STATS_HPP
#define SUBCOVER_MATH_STATS_HPP

#include <functional>
#include <map>
#include <vector>

namespace subcover::math {

struct MeanVar {
    long long n = 0;
    double mean = 0.0;
    double var = 0.0;         // unbiased sample variance
    double stderr_mean = 0.0; // sd / sqrt(n)
    double m4 = 0.0;          // central fourth moment (biased)
};

MeanVar mean_var(const std::vector<double>& xs);

// Standard error of the unbiased sample variance, from the empirical
// fourth central moment.
double variance_stderr(const MeanVar& mv);

// Two-sample Kolmogorov-Smirnov statistic (sorts copies internally).
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// One-sample KS against a continuous reference CDF.
double ks_vs_cdf(std::vector<double> a, const std::function<double(double)>& cdf);

// Asymptotic Kolmogorov critical value at significance level, for the
// one-sample statistic with n points (multiply-by-sqrt((n+m)/(n m)) form
// handled by the two-sample helper below).
double ks_critical_one_sample(double level, long long n);
double ks_critical_two_sample(double level, long long n, long long m);

struct Chi2Result {
    double stat = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

// Two-sample chi-square homogeneity test on integer-valued samples;
// bins with pooled expected count below min_expected are merged upward.
Chi2Result chi2_two_sample(const std::vector<long long>& a,
                           const std::vector<long long>& b,
                           double min_expected = 5.0);

// Ordinary least squares slope of y on x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace subcover::math

#endif
