#include "subcover/potential.hpp"
#include "subcover/math/quadrature.hpp"
#include "subcover/math/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subcover {

std::string method_name(PotentialMethod m) {
    switch (m) {
        case PotentialMethod::monte_carlo: return "monte-carlo";
        case PotentialMethod::q_identity: return "q-identity";
        case PotentialMethod::series: return "series";
        case PotentialMethod::asymptotic: return "asymptotic";
    }
    return "?";
}

PotentialEstimate potential_mc(const SubordinatorSpec& spec, double delta,
                               long long replicas, const Engine& engine,
                               RngStream& rng) {
    if (replicas < 2)
        throw std::invalid_argument("potential_mc: need replicas >= 2");
    std::vector<double> ts;
    ts.reserve(static_cast<std::size_t>(replicas));
    for (long long i = 0; i < replicas; ++i)
        ts.push_back(sample_first_passage(spec, delta, engine, rng).time);
    const math::MeanVar mv = math::mean_var(ts);
    PotentialEstimate e;
    e.delta = delta;
    e.value = mv.mean;
    e.stderr_ = mv.stderr_mean;
    e.method = PotentialMethod::monte_carlo;
    e.replicas = replicas;
    e.note = engine.tag(spec, delta);
    return e;
}

std::pair<PotentialEstimate, PotentialEstimate>
potential_q_two_ways(const SubordinatorSpec& spec, double delta, double q,
                     long long replicas, RngStream& rng,
                     const QPotentialOptions& opt) {
    if (!(q > 0.0))
        throw std::invalid_argument("potential_q_two_ways: q must be > 0; use potential_mc for q = 0");
    if (replicas < 2)
        throw std::invalid_argument("potential_q_two_ways: need replicas >= 2");
    if (!spec.supports_exact_increments())
        throw std::invalid_argument("potential_q_two_ways: estimator A needs exact increments");

    // Estimator A: trapezoid of e^{-qt} * 1{X_t <= delta} on a uniform grid,
    // one skeleton per replica, integrated until the path exceeds delta
    // (the indicator stays 0 afterwards since paths are nondecreasing).
    double h = opt.grid_h;
    if (!(h > 0.0))
        h = std::min(M_E / eval_phi(spec, 1.0 / delta), 1.0 / q) / 200.0;
    std::vector<double> integrals;
    integrals.reserve(static_cast<std::size_t>(replicas));
    for (long long i = 0; i < replicas; ++i) {
        double v = 0.0;
        double t = 0.0;
        double acc = 0.5; // f(0)/2 with f(0) = 1
        for (;;) {
            t += h;
            v += sample_increment(spec, h, rng);
            if (v > delta)
                break; // crossing sample is 0; its half-weight adds nothing
            acc += std::exp(-q * t);
            if (t > 1e9)
                throw std::runtime_error("potential_q_two_ways: path failed to cross");
        }
        integrals.push_back(h * acc);
    }
    const math::MeanVar mva = math::mean_var(integrals);
    PotentialEstimate a;
    a.delta = delta;
    a.q = q;
    a.value = mva.mean;
    a.stderr_ = mva.stderr_mean;
    a.method = PotentialMethod::q_identity;
    a.replicas = replicas;
    a.note = "survival-integral estimator, grid h=" + std::to_string(h);

    // Estimator B: (1 - mean e^{-q T_1})/q from first-passage samples.
    Engine be = opt.b_engine;
    std::vector<double> damped;
    damped.reserve(static_cast<std::size_t>(replicas));
    for (long long i = 0; i < replicas; ++i)
        damped.push_back(std::exp(-q * sample_first_passage(spec, delta, be, rng).time));
    const math::MeanVar mvb = math::mean_var(damped);
    PotentialEstimate b;
    b.delta = delta;
    b.q = q;
    b.value = (1.0 - mvb.mean) / q;
    b.stderr_ = mvb.stderr_mean / q;
    b.method = PotentialMethod::q_identity;
    b.replicas = replicas;
    b.note = "passage-transform estimator, " + be.tag(spec, delta);
    return {a, b};
}

namespace {

// Series evaluation on one uniform grid [0, x], m cells of width h = x/m.
// Returns the partial sums and the remainder bound at the right endpoint.
struct SeriesResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
    int terms = 0;
};

SeriesResult series_on_grid(const SubordinatorSpec& spec, double x, std::size_t m,
                            double tol) {
    const double d = spec.drift;
    const double h = x / static_cast<double>(m);

    // exact cell masses of dP = tail(y) dy; the first cell by quadrature with
    // a log substitution so an integrable singularity at 0+ is captured
    std::vector<double> dP(m, 0.0);
    auto tail = [&](double y) { return eval_tail(spec, y); };
    const double p_first = math::integrate_tail_from_zero(tail, h, 1e-10);
    dP[0] = p_first;
    for (std::size_t j = 1; j < m; ++j) {
        // 4-panel Simpson per cell; tails are smooth away from 0
        const double a = h * static_cast<double>(j);
        const double b = a + h;
        const double q1 = a + 0.25 * h, q2 = a + 0.5 * h, q3 = a + 0.75 * h;
        dP[j] = h / 12.0 *
                (tail(a) + 4.0 * tail(q1) + 2.0 * tail(q2) + 4.0 * tail(q3) + tail(b));
    }

    // G_1 = P (prefix sums); recursion G_{n+1}(y_i) = int G_n(y_i - u) dP(u)
    std::vector<double> G(m + 1, 0.0);
    for (std::size_t i = 1; i <= m; ++i)
        G[i] = G[i - 1] + dP[i - 1];

    SeriesResult out;
    out.value = x / d; // n = 0 term: tail^{*0} = Dirac at 0
    double prev_sup = std::fabs(out.value);
    double sign = -1.0;
    double dpow = d * d;
    const int n_max = 200;
    std::vector<double> Gnext(m + 1, 0.0);
    for (int n = 1; n <= n_max; ++n) {
        // H_n(x) = int_0^x G_n by trapezoid; only the endpoint is needed but
        // the full prefix keeps the term sup-norm over the grid available
        double Hend = 0.0, sup_term = 0.0, Hacc = 0.0;
        for (std::size_t i = 1; i <= m; ++i) {
            Hacc += 0.5 * h * (G[i - 1] + G[i]);
            sup_term = std::max(sup_term, Hacc / dpow);
        }
        Hend = Hacc;
        const double term = Hend / dpow;
        out.value += sign * term;
        out.terms = n;
        const bool decreasing = sup_term <= prev_sup * (1.0 + 1e-12);
        if (sup_term < tol && decreasing) {
            out.error = sup_term; // alternating remainder bound
            out.converged = true;
            break;
        }
        prev_sup = sup_term;
        out.error = sup_term;
        if (n == n_max)
            break;
        // G_{n+1}[i] = sum_j dP[j] * (G[i-j] + G[i-j-1])/2
        for (std::size_t i = 0; i <= m; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < i; ++j)
                s += dP[j] * 0.5 * (G[i - j] + G[i - j - 1]);
            Gnext[i] = s;
        }
        G.swap(Gnext);
        sign = -sign;
        dpow *= d;
    }
    return out;
}

} // namespace

std::vector<PotentialEstimate> potential_series(const SubordinatorSpec& spec,
                                                const std::vector<double>& xs,
                                                double grid_step, double tol) {
    require_valid(spec);
    if (!(spec.drift > 0.0))
        throw std::invalid_argument("potential_series: requires drift > 0");
    std::vector<PotentialEstimate> out;
    out.reserve(xs.size());
    for (double x : xs) {
        if (!(x > 0.0))
            throw std::invalid_argument("potential_series: x must be > 0");
        std::size_t m = 2048;
        if (grid_step > 0.0)
            m = std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(x / grid_step)));
        const SeriesResult r = series_on_grid(spec, x, m, tol);
        PotentialEstimate e;
        e.delta = x;
        e.value = r.value;
        e.stderr_ = r.error;
        e.method = PotentialMethod::series;
        e.replicas = static_cast<long long>(m);
        e.flagged = !r.converged;
        if (e.flagged)
            e.note = "series terms not certified decreasing below tolerance";
        out.push_back(e);
    }
    return out;
}

PotentialEstimate potential_asymptotic(const SubordinatorSpec& spec, double delta) {
    require_valid(spec);
    if (!(delta > 0.0))
        throw std::invalid_argument("potential_asymptotic: delta must be > 0");
    const double idx = rv_index(spec); // throws for families without one
    PotentialEstimate e;
    e.delta = delta;
    e.value = 1.0 / (std::tgamma(1.0 + idx) * eval_phi(spec, 1.0 / delta));
    e.method = PotentialMethod::asymptotic;
    if (spec.family == Family::stable && spec.drift == 0.0)
        e.note = "exact for the pure stable family";
    else if (spec.family == Family::drift_only)
        e.note = "exact for drift-only";
    else if (idx == 0.0)
        e.note = "slowly varying Phi: asymptotic only, slow convergence";
    else
        e.note = "asymptotic only";
    return e;
}

PotentialEstimate best_potential(const SubordinatorSpec& spec, double delta,
                                 long long mc_replicas, uint64_t seed,
                                 uint64_t stream_block) {
    require_valid(spec);
    if (spec.family == Family::drift_only ||
        (spec.family == Family::stable && spec.drift == 0.0))
        return potential_asymptotic(spec, delta);
    if (spec.drift > 0.0) {
        auto v = potential_series(spec, {delta}, 0.0, 1e-9);
        if (!v[0].flagged)
            return v[0];
    }
    RngStream rng(seed, stream_block);
    return potential_mc(spec, delta, mc_replicas, Engine::events_engine(), rng);
}

DeltaGrid solve_delta_grid(const SubordinatorSpec& spec, double r, int j_max,
                           PotentialMethod method, long long mc_replicas,
                           uint64_t seed) {
    if (!(r > 0.0) || !(r < 1.0))
        throw std::invalid_argument("solve_delta_grid: r must lie in (0,1)");
    if (j_max < 1)
        throw std::invalid_argument("solve_delta_grid: j_max must be >= 1");

    uint64_t eval_counter = 0;
    auto evaluate = [&](double delta) -> double {
        switch (method) {
            case PotentialMethod::asymptotic:
                return potential_asymptotic(spec, delta).value;
            case PotentialMethod::series:
                return potential_series(spec, {delta}, 0.0, 1e-10)[0].value;
            case PotentialMethod::monte_carlo: {
                RngStream rng(seed, 0x5047ULL << 32 | eval_counter++);
                return potential_mc(spec, delta, mc_replicas, Engine::events_engine(), rng)
                    .value;
            }
            case PotentialMethod::q_identity:
                throw std::invalid_argument("solve_delta_grid: q-identity is not a U(delta) evaluator");
        }
        return 0.0;
    };

    DeltaGrid grid;
    grid.ratio = r;
    grid.method = method;
    const double rel_tol = 1e-3;
    double hi_guess = 1.0;
    for (int j = 1; j <= j_max; ++j) {
        const double target = std::pow(r, j);
        double hi = hi_guess;
        int guard = 0;
        while (evaluate(hi) < target && guard++ < 200)
            hi *= 2.0;
        double lo = hi;
        bool ok = true;
        while (evaluate(lo) > target) {
            lo *= 0.5;
            if (lo < 1e-13) { ok = false; break; }
        }
        if (!ok || guard >= 200) {
            grid.truncated = true;
            grid.note = "target U level below the evaluator's reliable range; grid truncated";
            break;
        }
        // bisection on delta; U is monotone for the supported evaluators
        while (hi / lo > 1.0 + 1e-12) {
            const double mid = std::sqrt(hi * lo);
            const double u = evaluate(mid);
            if (std::fabs(u / target - 1.0) <= 0.3 * rel_tol) { lo = hi = mid; break; }
            (u > target ? hi : lo) = mid;
        }
        const double delta_j = 0.5 * (lo + hi);
        if (!grid.deltas.empty() && delta_j >= grid.deltas.back()) {
            grid.truncated = true;
            grid.note = "solver produced a non-decreasing level; grid truncated";
            break;
        }
        grid.deltas.push_back(delta_j);
        hi_guess = delta_j;
    }
    return grid;
}

} // namespace subcover
