#ifndef SUBCOVER_MATH_QUADRATURE_HPP
#define SUBCOVER_MATH_QUADRATURE_HPP

#include <functional>

namespace subcover::math {

// Adaptive Simpson on [a,b] to absolute tolerance abs_tol.
double integrate_adaptive(const std::function<double(double)>& f,
                          double a, double b, double abs_tol,
                          int max_depth = 40);

// int_0^upper tail(x) dx for a nonincreasing tail that may blow up (but stay
// integrable) at 0+.  Uses the substitution x = e^u so the singular end is
// resolved on a logarithmic scale.
double integrate_tail_from_zero(const std::function<double(double)>& tail,
                                double upper, double rel_tol = 1e-9);

// int_0^inf e^{-lambda x} tail(x) dx, same substitution near zero, plain
// adaptive panels out to where the exponential has died.
double integrate_tail_exp_transform(const std::function<double(double)>& tail,
                                    double lambda, double rel_tol = 1e-9);

// Monotone root finding: assumes f nondecreasing or nonincreasing on
// [lo, hi] and f(lo), f(hi) bracket zero.  Plain bisection.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double x_tol, int max_iter = 200);

} // namespace subcover::math

#endif
