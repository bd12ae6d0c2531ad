#include "subcover/simulate.hpp"
#include "subcover/math/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace subcover {

// ---------------------------------------------------------------------------
// primitive samplers
// ---------------------------------------------------------------------------

// Marsaglia-Tsang for shape >= 1, boosted by U^{1/shape} below 1.
double sample_gamma(double shape, double rate, RngStream& rng) {
    if (!(shape > 0.0) || !(rate > 0.0))
        throw std::invalid_argument("sample_gamma: shape and rate must be > 0");
    double boost = 1.0;
    if (shape < 1.0) {
        boost = std::pow(rng.uniform01(), 1.0 / shape);
        shape += 1.0;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform01();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2)
            return boost * d * v / rate;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
            return boost * d * v / rate;
    }
}

// Kanter's representation of the one-sided stable law with
// E e^{-lambda S} = e^{-lambda^alpha}:  S = (A(U)/W)^{(1-alpha)/alpha},
// U ~ Uniform(0,pi), W ~ Exp(1), A the Zolotarev function.
double sample_positive_stable(double alpha, RngStream& rng) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("sample_positive_stable: alpha must be in (0,1)");
    const double u = M_PI * rng.uniform01();
    const double w = rng.exponential(1.0);
    const double one_m = 1.0 - alpha;
    const double ln_a = (alpha / one_m) * std::log(std::sin(alpha * u)) +
                        std::log(std::sin(one_m * u)) -
                        (1.0 / one_m) * std::log(std::sin(u));
    return std::exp((one_m / alpha) * (ln_a - std::log(w)));
}

// Michael-Schucany-Haas.
double sample_inverse_gaussian(double mu, double lam, RngStream& rng) {
    if (!(mu > 0.0) || !(lam > 0.0))
        throw std::invalid_argument("sample_inverse_gaussian: parameters must be > 0");
    const double z = rng.normal();
    const double y = z * z;
    const double x = mu + mu * mu * y / (2.0 * lam) -
                     mu / (2.0 * lam) * std::sqrt(4.0 * mu * lam * y + mu * mu * y * y);
    if (rng.uniform01() <= mu / (mu + x))
        return x;
    return mu * mu / x;
}

// Sequential exponential spacings; O(mean), fine at the event rates used here.
long long sample_poisson(double mean, RngStream& rng) {
    if (mean < 0.0)
        throw std::invalid_argument("sample_poisson: mean must be >= 0");
    if (mean == 0.0)
        return 0;
    long long n = 0;
    double acc = rng.exponential(1.0);
    while (acc <= mean) {
        ++n;
        acc += rng.exponential(1.0);
    }
    return n;
}

// One jump from the normalized restriction of the Levy measure to (eps, inf):
// inverse transform on the tail, closed form where available.
double sample_jump_above(const SubordinatorSpec& spec, double eps, RngStream& rng) {
    const double rate = eps > 0.0 ? eval_tail(spec, eps) : spec.total_jump_rate();
    if (!(rate > 0.0))
        throw std::invalid_argument("sample_jump_above: no jump mass above eps");
    switch (spec.family) {
        case Family::stable: {
            // tail(x) = x^{-a}/Gamma(1-a):  x = (Gamma(1-a) v)^{-1/a}
            const double v = rate * rng.uniform01();
            return std::pow(std::tgamma(1.0 - spec.alpha) * v, -1.0 / spec.alpha);
        }
        case Family::compound_poisson:
            if (spec.cp_jump == JumpLaw::fixed)
                return spec.cp_jump_param;
            // memoryless: restriction to (eps, inf) is eps + Exp
            return std::max(eps, 0.0) + spec.cp_jump_param * rng.exponential(1.0);
        default: {
            // generic numeric inversion of the monotone tail
            const double v = rate * rng.uniform01();
            double lo = std::max(eps, 1e-300);
            double hi = std::max(2.0 * lo, 1e-12);
            while (eval_tail(spec, hi) > v) {
                lo = hi;
                hi *= 2.0;
                if (hi > 1e300)
                    throw std::runtime_error("sample_jump_above: tail inversion ran away");
            }
            auto f = [&](double x) { return eval_tail(spec, x) - v; };
            return math::bisect(f, lo, hi, 1e-13);
        }
    }
}

// ---------------------------------------------------------------------------
// SamplePath
// ---------------------------------------------------------------------------

double SamplePath::value_at(double t) const {
    if (t < 0.0 || t > horizon * (1.0 + 1e-12))
        throw std::out_of_range("SamplePath::value_at: t outside [0, horizon]");
    if (kind == Kind::events) {
        double v = drift * t;
        for (std::size_t i = 0; i < times.size() && times[i] <= t; ++i)
            v += jumps[i];
        return v;
    }
    const auto idx = static_cast<std::size_t>(std::min(
        std::floor(t / step), static_cast<double>(values.size() - 1)));
    return values[idx];
}

void SamplePath::check_invariants() const {
    if (!(horizon > 0.0))
        throw std::logic_error("SamplePath: horizon must be > 0");
    if (kind == Kind::events) {
        if (times.size() != jumps.size())
            throw std::logic_error("SamplePath: times/jumps size mismatch");
        if (drift < 0.0)
            throw std::logic_error("SamplePath: negative drift");
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (!(jumps[i] > 0.0))
                throw std::logic_error("SamplePath: nonpositive jump");
            if (times[i] < 0.0 || times[i] > horizon)
                throw std::logic_error("SamplePath: event time outside [0, horizon]");
            if (i > 0 && times[i] < times[i - 1])
                throw std::logic_error("SamplePath: event times not sorted");
        }
    } else {
        if (!(step > 0.0) || values.empty() || values.front() != 0.0)
            throw std::logic_error("SamplePath: bad skeleton");
        for (std::size_t i = 1; i < values.size(); ++i)
            if (values[i] < values[i - 1])
                throw std::logic_error("SamplePath: skeleton not nondecreasing");
    }
}

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

Engine Engine::events_engine(double eps, bool compensate) {
    Engine e;
    e.kind = EngineKind::events;
    e.eps = eps;
    e.compensate = compensate;
    return e;
}

Engine Engine::skeleton_engine(double h) {
    Engine e;
    e.kind = EngineKind::skeleton;
    e.h = h;
    return e;
}

double Engine::resolve_eps(const SubordinatorSpec& spec, double delta) const {
    if (eps > 0.0)
        return eps;
    return spec.infinite_activity() ? delta / 50.0 : 0.0;
}

double Engine::resolve_h(const SubordinatorSpec& spec, double delta) const {
    if (h > 0.0)
        return h;
    // steps-to-cross of order 64, via the generic bound U(delta) <= e/Phi(1/delta)
    const double u_upper = M_E / eval_phi(spec, 1.0 / delta);
    return u_upper / 64.0;
}

std::string Engine::tag(const SubordinatorSpec& spec, double delta) const {
    std::ostringstream os;
    if (kind == EngineKind::events) {
        os << "events(eps=" << resolve_eps(spec, delta)
           << (compensate ? ",compensated" : ",uncompensated") << ")";
    } else {
        os << "skeleton(h=" << resolve_h(spec, delta) << ")";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// path generation
// ---------------------------------------------------------------------------

SamplePath simulate_events(const SubordinatorSpec& spec, double horizon,
                           double eps, bool compensate, RngStream& rng) {
    require_valid(spec);
    if (!(horizon > 0.0))
        throw std::invalid_argument("simulate_events: horizon must be > 0");
    if (spec.infinite_activity() && !(eps > 0.0))
        throw std::invalid_argument(
            "simulate_events: infinite-activity spec needs a truncation eps > 0");

    SamplePath p;
    p.kind = SamplePath::Kind::events;
    p.horizon = horizon;
    p.eps = eps;
    p.drift = spec.drift + (compensate && eps > 0.0 ? small_jump_mean(spec, eps) : 0.0);

    const double rate = eps > 0.0 ? eval_tail(spec, eps) : spec.total_jump_rate();
    if (rate > 0.0) {
        double t = rng.exponential(rate);
        while (t <= horizon) {
            p.times.push_back(t);
            p.jumps.push_back(sample_jump_above(spec, eps, rng));
            t += rng.exponential(rate);
        }
    }
    p.check_invariants();
    return p;
}

SamplePath simulate_skeleton(const SubordinatorSpec& spec, double horizon,
                             double h, RngStream& rng) {
    require_valid(spec);
    if (!(horizon > 0.0) || !(h > 0.0))
        throw std::invalid_argument("simulate_skeleton: horizon and h must be > 0");
    if (!spec.supports_exact_increments())
        throw std::invalid_argument(
            "simulate_skeleton: family has no exact increment sampler; use simulate_events");

    SamplePath p;
    p.kind = SamplePath::Kind::skeleton;
    p.horizon = horizon;
    p.step = h;
    const auto n = static_cast<std::size_t>(std::ceil(horizon / h - 1e-12));
    p.values.resize(n + 1);
    p.values[0] = 0.0;
    for (std::size_t k = 1; k <= n; ++k)
        p.values[k] = p.values[k - 1] + sample_increment(spec, h, rng);
    p.check_invariants();
    return p;
}

double sample_increment(const SubordinatorSpec& spec, double h, RngStream& rng) {
    require_valid(spec);
    if (h < 0.0)
        throw std::invalid_argument("sample_increment: h must be >= 0");
    if (h == 0.0)
        return 0.0;
    const double d = spec.drift * h;
    switch (spec.family) {
        case Family::drift_only:
            return d;
        case Family::stable:
            // self-similarity: X_h = h^{1/alpha} S
            return d + std::pow(h, 1.0 / spec.alpha) * sample_positive_stable(spec.alpha, rng);
        case Family::gamma:
            return d + sample_gamma(spec.gamma_a * h, spec.gamma_b, rng);
        case Family::inverse_gaussian:
            return d + sample_inverse_gaussian(h * spec.ig_mu, h * h * spec.ig_lam, rng);
        case Family::compound_poisson: {
            const long long k = sample_poisson(spec.cp_rate * h, rng);
            double v = d;
            for (long long i = 0; i < k; ++i)
                v += spec.cp_jump == JumpLaw::fixed
                         ? spec.cp_jump_param
                         : spec.cp_jump_param * rng.exponential(1.0);
            return v;
        }
        case Family::truncated_general:
            throw std::invalid_argument(
                "sample_increment: truncated_general has no exact increment law; "
                "use simulate_events");
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// first passage
// ---------------------------------------------------------------------------

namespace {

FirstPassageSample first_passage_events(const SubordinatorSpec& spec, double delta,
                                        double eps, bool compensate, RngStream& rng) {
    const double g = spec.drift + (compensate && eps > 0.0 ? small_jump_mean(spec, eps) : 0.0);
    const double rate = eps > 0.0 ? eval_tail(spec, eps) : spec.total_jump_rate();
    if (!(g > 0.0) && !(rate > 0.0))
        throw std::invalid_argument("sample_first_passage: spec cannot cross any level");

    FirstPassageSample fp;
    fp.engine = EngineKind::events;
    if (eps > delta / 2.0 && eps > 0.0)
        fp.note = "eps is large relative to delta; truncation bias may be visible";

    double t = 0.0, v = 0.0;
    for (;;) {
        const double w = rate > 0.0 ? rng.exponential(rate)
                                    : std::numeric_limits<double>::infinity();
        if (g > 0.0 && v + g * w > delta) {
            // continuous crossing: X touches delta and exceeds it immediately after
            fp.time = t + (delta - v) / g;
            fp.overshoot = 0.0;
            fp.crossed_by_jump = false;
            return fp;
        }
        t += w;
        v += g * w + sample_jump_above(spec, eps, rng);
        if (v > delta) {
            fp.time = t;
            fp.overshoot = v - delta;
            fp.crossed_by_jump = true;
            return fp;
        }
        // v == delta resolves as "not crossed"; with g > 0 the next pass
        // crosses immediately at the same time stamp
    }
}

FirstPassageSample first_passage_skeleton(const SubordinatorSpec& spec, double delta,
                                          double h, RngStream& rng) {
    FirstPassageSample fp;
    fp.engine = EngineKind::skeleton;
    fp.note = "grid detection: T is upward-biased (bias -> 0 as h -> 0)";
    double v = 0.0;
    double t = 0.0;
    for (;;) {
        t += h;
        v += sample_increment(spec, h, rng);
        if (v > delta) {
            fp.time = t;
            fp.overshoot = v - delta;
            fp.crossed_by_jump = true;
            return fp;
        }
        if (t > 1e12 / std::max(1.0, delta))
            throw std::runtime_error("sample_first_passage: skeleton failed to cross");
    }
}

} // namespace

FirstPassageSample sample_first_passage(const SubordinatorSpec& spec, double delta,
                                        const Engine& engine, RngStream& rng) {
    require_valid(spec);
    if (!(delta > 0.0))
        throw std::invalid_argument("sample_first_passage: delta must be > 0");
    const EligibilityReport rep = validate(spec);
    if (!rep.eligible)
        throw std::invalid_argument("sample_first_passage: spec is ineligible "
                                    "(compound Poisson: finite activity with zero drift)");
    if (engine.kind == EngineKind::skeleton) {
        if (!spec.supports_exact_increments())
            throw std::invalid_argument(
                "sample_first_passage: skeleton engine incompatible with this family");
        return first_passage_skeleton(spec, delta, engine.resolve_h(spec, delta), rng);
    }
    return first_passage_events(spec, delta, engine.resolve_eps(spec, delta),
                                engine.compensate, rng);
}

void dump_events_csv(const SamplePath& path, std::ostream& os) {
    if (path.kind != SamplePath::Kind::events)
        throw std::invalid_argument("dump_events_csv: path is not an event list");
    os << "time,jump,value\n";
    double cum = 0.0;
    for (std::size_t i = 0; i < path.times.size(); ++i) {
        cum += path.jumps[i];
        os << path.times[i] << ',' << path.jumps[i] << ','
           << (path.drift * path.times[i] + cum) << '\n';
    }
}

} // namespace subcover
