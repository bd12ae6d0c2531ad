#include "subcover/math/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace subcover::math {

namespace {

double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double fa, double fm, double fb, double whole, double tol,
             int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fa, flm, fm, a, m);
    const double right = simpson(fm, frm, fb, m, b);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f,
                          double a, double b, double abs_tol, int max_depth) {
    if (!(b > a))
        return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = simpson(fa, fm, fb, a, b);
    return adapt(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

double integrate_tail_from_zero(const std::function<double(double)>& tail,
                                double upper, double rel_tol) {
    if (!(upper > 0.0))
        return 0.0;
    // x = e^u:  int tail(e^u) e^u du over u in [u_min, ln(upper)].
    // u_min deep enough that anything integrable has negligible mass below.
    const double u_max = std::log(upper);
    const double u_min = std::min(u_max - 5.0, std::log(1e-280));
    auto g = [&](double u) {
        const double x = std::exp(u);
        return tail(x) * x;
    };
    // rough scale pass to set an absolute tolerance
    double scale = 0.0;
    const int probes = 32;
    for (int i = 0; i <= probes; ++i) {
        const double u = u_min + (u_max - u_min) * i / probes;
        scale = std::max(scale, std::fabs(g(u)));
    }
    const double abs_tol = std::max(scale * (u_max - u_min), 1e-300) * rel_tol;
    // split into panels so the adaptive pass starts with a sane resolution
    double total = 0.0;
    const int panels = 16;
    for (int i = 0; i < panels; ++i) {
        const double a = u_min + (u_max - u_min) * i / panels;
        const double b = u_min + (u_max - u_min) * (i + 1) / panels;
        total += integrate_adaptive(g, a, b, abs_tol / panels);
    }
    return total;
}

double integrate_tail_exp_transform(const std::function<double(double)>& tail,
                                    double lambda, double rel_tol) {
    if (!(lambda > 0.0))
        throw std::domain_error("integrate_tail_exp_transform: lambda must be > 0");
    auto damped = [&](double x) { return std::exp(-lambda * x) * tail(x); };
    // singular part on a log scale up to x0, smooth part out to where
    // e^{-lambda x} is negligible
    const double x0 = std::min(1.0, 1.0 / lambda);
    const double x_cut = 745.0 / lambda; // exp underflow boundary
    double total = integrate_tail_from_zero(damped, x0, rel_tol);
    const double scale = std::max(std::fabs(total), damped(x0) * x0 + 1e-300);
    double a = x0;
    // geometric panels: [x0, 2x0], [2x0, 4x0], ...
    while (a < x_cut) {
        const double b = std::min(2.0 * a, x_cut);
        total += integrate_adaptive(damped, a, b, scale * rel_tol * 0.05);
        a = b;
        if (damped(a) * a < scale * rel_tol * 1e-3 && a > 8.0 / lambda)
            break;
    }
    return total;
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double x_tol, int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("bisect: endpoints do not bracket a root");
    for (int i = 0; i < max_iter && (hi - lo) > x_tol * (1.0 + std::fabs(lo)); ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0)
            return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace subcover::math
