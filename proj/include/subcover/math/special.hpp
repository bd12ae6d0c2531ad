#ifndef SUBCOVER_MATH_SPECIAL_HPP
#define SUBCOVER_MATH_SPECIAL_HPP

namespace subcover::math {

// Exponential integral E1(x) = int_x^inf e^{-t}/t dt, x > 0.
// Series for x <= 1, modified Lentz continued fraction for x > 1;
// absolute/relative accuracy target 1e-10 over (0, 700).
double expint_e1(double x);

// Regularized upper incomplete gamma Q(a,x) = Gamma(a,x)/Gamma(a).
// Series for x < a+1, continued fraction otherwise.
double gamma_q(double a, double x);

// Survival function of a chi-square with dof degrees of freedom.
double chi2_sf(double x, double dof);

// Standard normal CDF.
double normal_cdf(double x);

} // namespace subcover::math

#endif
