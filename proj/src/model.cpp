#include "subcover/model.hpp"
#include "subcover/math/quadrature.hpp"
#include "subcover/math/special.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace subcover {

namespace {

double truncated_tail(const SubordinatorSpec& s, double x) {
    // mass below the truncation level is absent, so the tail is flat there
    return s.tg_tail.eval(std::max(x, std::max(s.tg_trunc, s.tg_tail.cutoff)));
}

} // namespace

SubordinatorSpec SubordinatorSpec::make_drift_only(double d) {
    SubordinatorSpec s;
    s.family = Family::drift_only;
    s.drift = d;
    return s;
}

SubordinatorSpec SubordinatorSpec::make_stable(double alpha, double drift) {
    SubordinatorSpec s;
    s.family = Family::stable;
    s.alpha = alpha;
    s.drift = drift;
    return s;
}

SubordinatorSpec SubordinatorSpec::make_gamma(double a, double b, double drift) {
    SubordinatorSpec s;
    s.family = Family::gamma;
    s.gamma_a = a;
    s.gamma_b = b;
    s.drift = drift;
    return s;
}

SubordinatorSpec SubordinatorSpec::make_inverse_gaussian(double mu, double lam, double drift) {
    SubordinatorSpec s;
    s.family = Family::inverse_gaussian;
    s.ig_mu = mu;
    s.ig_lam = lam;
    s.drift = drift;
    return s;
}

SubordinatorSpec SubordinatorSpec::make_compound_poisson_fixed(double rate, double jump, double drift) {
    SubordinatorSpec s;
    s.family = Family::compound_poisson;
    s.cp_rate = rate;
    s.cp_jump = JumpLaw::fixed;
    s.cp_jump_param = jump;
    s.drift = drift;
    return s;
}

SubordinatorSpec SubordinatorSpec::make_compound_poisson_exp(double rate, double mean_jump, double drift) {
    SubordinatorSpec s;
    s.family = Family::compound_poisson;
    s.cp_rate = rate;
    s.cp_jump = JumpLaw::exponential;
    s.cp_jump_param = mean_jump;
    s.drift = drift;
    return s;
}

SubordinatorSpec SubordinatorSpec::make_truncated_general(LevyTail tail, double trunc, double drift) {
    SubordinatorSpec s;
    s.family = Family::truncated_general;
    s.tg_tail = std::move(tail);
    s.tg_trunc = trunc;
    s.drift = drift;
    return s;
}

bool SubordinatorSpec::infinite_activity() const {
    switch (family) {
        case Family::stable:
        case Family::gamma:
        case Family::inverse_gaussian:
            return true;
        default:
            return false; // truncated_general is finite activity by construction
    }
}

double SubordinatorSpec::total_jump_rate() const {
    switch (family) {
        case Family::drift_only: return 0.0;
        case Family::compound_poisson: return cp_rate;
        case Family::truncated_general:
            return truncated_tail(*this, tg_trunc);
        default:
            return std::numeric_limits<double>::infinity();
    }
}

bool SubordinatorSpec::supports_exact_increments() const {
    return family != Family::truncated_general;
}

std::string SubordinatorSpec::summary() const {
    std::ostringstream os;
    switch (family) {
        case Family::drift_only: os << "drift_only"; break;
        case Family::stable: os << "stable(alpha=" << alpha << ")"; break;
        case Family::gamma: os << "gamma(a=" << gamma_a << ", b=" << gamma_b << ")"; break;
        case Family::inverse_gaussian:
            os << "inverse_gaussian(mu=" << ig_mu << ", lam=" << ig_lam << ")";
            break;
        case Family::compound_poisson:
            os << "compound_poisson(rate=" << cp_rate
               << (cp_jump == JumpLaw::fixed ? ", fixed jump=" : ", exp jump mean=")
               << cp_jump_param << ")";
            break;
        case Family::truncated_general:
            os << "truncated_general(trunc=" << tg_trunc << ")";
            break;
    }
    os << " + drift " << drift;
    return os.str();
}

void require_valid(const SubordinatorSpec& s) {
    if (!(s.drift >= 0.0) || !std::isfinite(s.drift))
        throw std::invalid_argument("spec: drift must be finite and >= 0");
    switch (s.family) {
        case Family::drift_only:
            break;
        case Family::stable:
            if (!(s.alpha > 0.0) || !(s.alpha < 1.0))
                throw std::invalid_argument("spec: stable alpha must lie strictly inside (0,1)");
            break;
        case Family::gamma:
            if (!(s.gamma_a > 0.0) || !(s.gamma_b > 0.0))
                throw std::invalid_argument("spec: gamma parameters must be > 0");
            break;
        case Family::inverse_gaussian:
            if (!(s.ig_mu > 0.0) || !(s.ig_lam > 0.0))
                throw std::invalid_argument("spec: inverse gaussian parameters must be > 0");
            break;
        case Family::compound_poisson:
            if (!(s.cp_rate > 0.0) || !(s.cp_jump_param > 0.0))
                throw std::invalid_argument("spec: compound poisson parameters must be > 0");
            break;
        case Family::truncated_general:
            if (!s.tg_tail.eval)
                throw std::invalid_argument("spec: truncated_general needs a tail handle");
            if (!(s.tg_trunc > 0.0))
                throw std::invalid_argument("spec: truncated_general truncation must be > 0");
            break;
    }
}

EligibilityReport validate(const SubordinatorSpec& s) {
    EligibilityReport r;
    try {
        require_valid(s);
    } catch (const std::exception& e) {
        r.params_ok = false;
        r.messages.push_back(e.what());
        return r;
    }
    r.infinite_activity = s.infinite_activity();
    r.eligible = r.infinite_activity || s.drift > 0.0;
    if (!r.eligible)
        r.messages.push_back(
            "spec is a compound Poisson process (finite activity, zero drift); "
            "covering-number limit theory does not apply");

    if (s.family == Family::truncated_general) {
        // verify int_0^1 tail(x) dx < inf for the raw handle: estimate the
        // local power p = -d ln tail / d ln x near zero; p >= 1 diverges
        const auto& tail = s.tg_tail.eval;
        const double x1 = 1e-10, x2 = 1e-13;
        const double t1 = tail(x1), t2 = tail(x2);
        if (!std::isfinite(t2)) {
            r.integrable = false;
            r.messages.push_back("tail handle is not finite near 0");
        } else if (t2 > 0.0 && t1 > 0.0) {
            const double p_hat = std::log(t2 / t1) / std::log(x1 / x2);
            if (p_hat >= 0.995) {
                r.integrable = false;
                r.messages.push_back(
                    "tail handle appears non-integrable near 0 (local power >= 1)");
            }
        }
        // sampled monotonicity check on the handle
        double prev = tail(1e-9);
        for (double x = 1e-8; x <= 10.0; x *= 10.0) {
            const double v = tail(x);
            if (v > prev * (1.0 + 1e-9) || v < 0.0) {
                r.params_ok = false;
                r.messages.push_back("tail handle is not nonincreasing and nonnegative");
                break;
            }
            prev = v;
        }
    }
    return r;
}

double eval_phi(const SubordinatorSpec& s, double lambda) {
    require_valid(s);
    if (lambda < 0.0)
        throw std::domain_error("eval_phi: lambda must be >= 0");
    if (lambda == 0.0)
        return 0.0;
    const double d = s.drift * lambda;
    switch (s.family) {
        case Family::drift_only:
            return d;
        case Family::stable:
            return d + std::pow(lambda, s.alpha);
        case Family::gamma:
            return d + s.gamma_a * std::log1p(lambda / s.gamma_b);
        case Family::inverse_gaussian:
            return d + s.ig_lam / s.ig_mu *
                           (std::sqrt(1.0 + 2.0 * s.ig_mu * s.ig_mu * lambda / s.ig_lam) - 1.0);
        case Family::compound_poisson: {
            // 1 - E e^{-lambda J} without cancellation at small lambda
            const double one_minus_lt =
                s.cp_jump == JumpLaw::fixed
                    ? -std::expm1(-lambda * s.cp_jump_param)
                    : lambda * s.cp_jump_param / (1.0 + lambda * s.cp_jump_param);
            return d + s.cp_rate * one_minus_lt;
        }
        case Family::truncated_general: {
            auto tail = [&](double x) { return truncated_tail(s, x); };
            return d + lambda * math::integrate_tail_exp_transform(tail, lambda);
        }
    }
    return 0.0;
}

double eval_tail(const SubordinatorSpec& s, double x) {
    require_valid(s);
    if (!(x > 0.0))
        throw std::domain_error("eval_tail: x must be > 0");
    switch (s.family) {
        case Family::drift_only:
            return 0.0;
        case Family::stable:
            return std::pow(x, -s.alpha) / std::tgamma(1.0 - s.alpha);
        case Family::gamma:
            return s.gamma_a * math::expint_e1(s.gamma_b * x);
        case Family::inverse_gaussian: {
            // int_x^inf sqrt(lam/(2 pi y^3)) e^{-b y} dy with b = lam/(2 mu^2)
            const double b = s.ig_lam / (2.0 * s.ig_mu * s.ig_mu);
            const double c = std::sqrt(s.ig_lam / (2.0 * M_PI));
            return c * (2.0 * std::exp(-b * x) / std::sqrt(x) -
                        2.0 * std::sqrt(M_PI * b) * std::erfc(std::sqrt(b * x)));
        }
        case Family::compound_poisson:
            if (s.cp_jump == JumpLaw::fixed)
                return x < s.cp_jump_param ? s.cp_rate : 0.0;
            return s.cp_rate * std::exp(-x / s.cp_jump_param);
        case Family::truncated_general:
            return truncated_tail(s, x);
    }
    return 0.0;
}

double phi_from_tail(const SubordinatorSpec& s, double lambda, double rel_tol) {
    require_valid(s);
    if (lambda < 0.0)
        throw std::domain_error("phi_from_tail: lambda must be >= 0");
    if (lambda == 0.0)
        return 0.0;
    if (s.family == Family::drift_only)
        return s.drift * lambda;
    auto tail = [&](double x) { return eval_tail(s, x); };
    return s.drift * lambda + lambda * math::integrate_tail_exp_transform(tail, lambda, rel_tol);
}

double small_jump_mean(const SubordinatorSpec& s, double eps) {
    require_valid(s);
    if (!(eps > 0.0))
        return 0.0;
    switch (s.family) {
        case Family::drift_only:
            return 0.0;
        case Family::stable:
            return s.alpha * std::pow(eps, 1.0 - s.alpha) /
                   ((1.0 - s.alpha) * std::tgamma(1.0 - s.alpha));
        case Family::compound_poisson:
            if (s.cp_jump == JumpLaw::fixed)
                return eps > s.cp_jump_param ? s.cp_rate * s.cp_jump_param : 0.0;
            break;
        case Family::truncated_general:
            if (eps <= std::max(s.tg_trunc, s.tg_tail.cutoff))
                return 0.0;
            break;
        default:
            break;
    }
    auto tail = [&](double x) { return eval_tail(s, x); };
    const double integral = math::integrate_tail_from_zero(tail, eps);
    return std::max(0.0, integral - eps * eval_tail(s, eps));
}

bool has_rv_index(const SubordinatorSpec& s) {
    return s.family != Family::truncated_general;
}

double rv_index(const SubordinatorSpec& s) {
    require_valid(s);
    switch (s.family) {
        case Family::drift_only: return 1.0;
        case Family::stable: return s.drift > 0.0 ? 1.0 : s.alpha;
        case Family::gamma: return s.drift > 0.0 ? 1.0 : 0.0;
        case Family::inverse_gaussian: return s.drift > 0.0 ? 1.0 : 0.5;
        case Family::compound_poisson: return s.drift > 0.0 ? 1.0 : 0.0;
        case Family::truncated_general:
            throw std::invalid_argument("rv_index: truncated_general has no declared index");
    }
    return 0.0;
}

double slowly_varying_L(const SubordinatorSpec& s, double lambda) {
    const double idx = rv_index(s);
    switch (s.family) {
        case Family::drift_only:
            return s.drift;
        case Family::stable:
            return s.drift > 0.0 ? s.drift : 1.0;
        case Family::gamma:
            return s.drift > 0.0 ? s.drift : s.gamma_a * std::log(lambda);
        case Family::inverse_gaussian:
            return s.drift > 0.0 ? s.drift : std::sqrt(2.0 * s.ig_lam);
        case Family::compound_poisson:
            return s.drift > 0.0 ? s.drift : s.cp_rate;
        default:
            break;
    }
    (void)idx;
    throw std::invalid_argument("slowly_varying_L: no declared form for this family");
}

} // namespace subcover
