#include "subcover/covering.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace subcover {

namespace {

struct WindowCount {
    long long renewals = 0;
    long long literal = 0;
    std::vector<double> times;
};

// Greedy covering of the range of the path over [a, b], restarted at the
// value X(a).  Exact on event lists; grid scan on skeletons.
WindowCount count_window(const SamplePath& path, double a, double b, double delta) {
    WindowCount out;
    if (path.kind == SamplePath::Kind::events) {
        const double g = path.drift;
        double base = path.value_at(a);
        double v = base;
        double s = a;
        std::size_t j = 0;
        while (j < path.times.size() && path.times[j] <= a) ++j;
        const double inf = std::numeric_limits<double>::infinity();
        for (;;) {
            const double t_next = j < path.times.size() ? path.times[j] : inf;
            if (g > 0.0) {
                // drift crossings strictly before the next jump
                double tau = s + (base + delta - v) / g;
                bool done = false;
                while (tau <= t_next) {
                    if (tau > b) { done = true; break; }
                    ++out.renewals;
                    out.times.push_back(tau);
                    v = base + delta; // value exactly at the touch point
                    base = v;
                    s = tau;
                    tau = s + delta / g;
                }
                if (done) break;
            }
            if (t_next > b || j >= path.times.size())
                break;
            v += g * (t_next - s) + path.jumps[j];
            s = t_next;
            ++j;
            if (v > base + delta) { // strict; exact ties resolve as not crossed
                ++out.renewals;
                out.times.push_back(s);
                base = v;
            }
        }
    } else {
        // skeleton: grid points in (a, b] whose value exceeds base + delta
        const double h = path.step;
        double base = path.value_at(a);
        const auto k0 = static_cast<std::size_t>(std::floor(a / h)) + 1;
        for (std::size_t k = k0; k < path.values.size(); ++k) {
            const double tk = static_cast<double>(k) * h;
            if (tk > b) break;
            if (path.values[k] > base + delta) {
                ++out.renewals;
                out.times.push_back(tk);
                base = path.values[k];
            }
        }
    }
    const double last = out.times.empty() ? a : out.times.back();
    out.literal = out.renewals + (last < b ? 1 : 0);
    return out;
}

} // namespace

CoveringCount count_covering_path(const SamplePath& path, double t, double delta) {
    if (!(delta > 0.0))
        throw std::invalid_argument("count_covering_path: delta must be > 0");
    if (t > path.horizon * (1.0 + 1e-12))
        throw std::invalid_argument("count_covering_path: t exceeds path horizon");
    WindowCount w = count_window(path, 0.0, t, delta);
    CoveringCount c;
    c.renewal_count = w.renewals;
    c.literal_count = w.literal;
    c.renewal_times = std::move(w.times);
    c.method = path.kind == SamplePath::Kind::events ? "path-events" : "path-skeleton";
    c.horizon_t = t;
    c.delta = delta;
    return c;
}

CoveringCount count_covering_renewal(const SubordinatorSpec& spec, double t,
                                     double delta, const Engine& engine,
                                     RngStream& rng) {
    if (!(t > 0.0) || !(delta > 0.0))
        throw std::invalid_argument("count_covering_renewal: t and delta must be > 0");
    const EligibilityReport rep = validate(spec);
    if (!rep.ok())
        throw std::invalid_argument("count_covering_renewal: ineligible spec");

    CoveringCount c;
    c.method = "renewal";
    c.horizon_t = t;
    c.delta = delta;
    double s = 0.0;
    for (;;) {
        const FirstPassageSample fp = sample_first_passage(spec, delta, engine, rng);
        s += fp.time;
        if (s > t)
            break;
        c.renewal_times.push_back(s);
    }
    c.renewal_count = static_cast<long long>(c.renewal_times.size());
    c.literal_count = c.renewal_count +
                      ((c.renewal_times.empty() || c.renewal_times.back() < t) ? 1 : 0);
    return c;
}

long long splitting_defect(const SamplePath& path, double t,
                           const std::vector<double>& splits, double delta) {
    if (!(delta > 0.0))
        throw std::invalid_argument("splitting_defect: delta must be > 0");
    if (t > path.horizon * (1.0 + 1e-12))
        throw std::invalid_argument("splitting_defect: t exceeds path horizon");
    for (std::size_t i = 0; i < splits.size(); ++i) {
        if (!(splits[i] > 0.0) || !(splits[i] < t))
            throw std::invalid_argument("splitting_defect: split points must lie in (0,t)");
        if (i > 0 && !(splits[i] > splits[i - 1]))
            throw std::invalid_argument("splitting_defect: split points must increase");
    }
    const long long global_literal =
        count_window(path, 0.0, t, delta).literal;
    long long pieces = 0;
    double a = 0.0;
    for (double b : splits) {
        pieces += count_window(path, a, b, delta).literal;
        a = b;
    }
    pieces += count_window(path, a, t, delta).literal;
    return global_literal - pieces;
}

} // namespace subcover
