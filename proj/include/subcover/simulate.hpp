#ifndef SUBCOVER_SIMULATE_HPP
#define SUBCOVER_SIMULATE_HPP

#include "subcover/model.hpp"
#include "subcover/rng.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace subcover {

// One simulated trajectory.  Event lists store jumps plus an effective
// drift; skeletons store cumulative values on a uniform grid.  Both start
// at 0 and are nondecreasing.
struct SamplePath {
    enum class Kind { events, skeleton };
    Kind kind = Kind::events;
    double horizon = 0.0;

    // events
    double drift = 0.0; // effective drift (includes compensation when asked)
    double eps = 0.0;   // small-jump truncation used (0 = exact)
    std::vector<double> times;
    std::vector<double> jumps;

    // skeleton
    double step = 0.0;
    std::vector<double> values; // values[k] = X(k*step), values[0] = 0

    std::vector<std::string> notes;

    double value_at(double t) const;
    double value_end() const { return value_at(horizon); }
    void check_invariants() const; // throws std::logic_error on violation
};

enum class EngineKind { events, skeleton };

// First-passage / covering engine selection.  eps <= 0 or h <= 0 requests
// the automatic rule (resolved against the target level delta).
struct Engine {
    EngineKind kind = EngineKind::events;
    double eps = 0.0;
    bool compensate = true;
    double h = 0.0;

    static Engine events_engine(double eps = 0.0, bool compensate = true);
    static Engine skeleton_engine(double h = 0.0);

    double resolve_eps(const SubordinatorSpec& spec, double delta) const;
    double resolve_h(const SubordinatorSpec& spec, double delta) const;
    std::string tag(const SubordinatorSpec& spec, double delta) const;
};

struct FirstPassageSample {
    double time = 0.0;      // T with X_T >= delta and X_t > delta for t > T
    double overshoot = 0.0; // X_T - delta; 0 for drift crossings
    EngineKind engine = EngineKind::events;
    bool crossed_by_jump = false;
    std::string note; // engine warnings (bias direction, eps vs delta scale)
};

// One exact draw of X_h for families with known increment laws.
// truncated_general is rejected and the caller is pointed at simulate_events.
double sample_increment(const SubordinatorSpec& spec, double h, RngStream& rng);

// Event-driven path: Poisson(rate tail(eps)) jump times on [0, horizon],
// jump sizes from the normalized restriction of the Levy measure to
// (eps, inf), effective drift = drift (+ small-jump mean when compensate).
// Exact for finite-activity specs with eps = 0.
SamplePath simulate_events(const SubordinatorSpec& spec, double horizon,
                           double eps, bool compensate, RngStream& rng);

// Cumulative sums of ceil(horizon/h) exact increments.
SamplePath simulate_skeleton(const SubordinatorSpec& spec, double horizon,
                             double h, RngStream& rng);

// First passage strictly above delta.  The events engine is exact between
// jumps (closed-form drift crossing) and extends the simulation until the
// level is crossed; the skeleton engine reports the first grid time with
// value > delta (upward-biased, bias -> 0 as h -> 0, noted in the sample).
FirstPassageSample sample_first_passage(const SubordinatorSpec& spec, double delta,
                                        const Engine& engine, RngStream& rng);

// Primitive samplers (exposed for the statistical test suite).
double sample_gamma(double shape, double rate, RngStream& rng);
double sample_positive_stable(double alpha, RngStream& rng); // E e^{-l S} = e^{-l^a}
double sample_inverse_gaussian(double mu, double lam, RngStream& rng);
long long sample_poisson(double mean, RngStream& rng);
double sample_jump_above(const SubordinatorSpec& spec, double eps, RngStream& rng);

// One record per event: time, jump, cumulative value; header line first.
void dump_events_csv(const SamplePath& path, std::ostream& os);

} // namespace subcover

#endif
