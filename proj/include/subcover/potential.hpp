#ifndef SUBCOVER_POTENTIAL_HPP
#define SUBCOVER_POTENTIAL_HPP

#include "subcover/model.hpp"
#include "subcover/rng.hpp"
#include "subcover/simulate.hpp"

#include <string>
#include <utility>
#include <vector>

namespace subcover {

enum class PotentialMethod { monte_carlo, q_identity, series, asymptotic };

std::string method_name(PotentialMethod m);

// One U(delta) or U_q(delta) value with method tag and statistical error.
struct PotentialEstimate {
    double delta = 0.0;
    double q = 0.0;
    double value = 0.0;
    double stderr_ = 0.0; // 0 for deterministic methods
    PotentialMethod method = PotentialMethod::monte_carlo;
    long long replicas = 0; // replica count or grid resolution
    bool flagged = false;   // series convergence not certified
    std::string note;
};

// U(delta) = E T_1(delta): sample mean of first-passage times with a
// central-limit standard error.
PotentialEstimate potential_mc(const SubordinatorSpec& spec, double delta,
                               long long replicas, const Engine& engine,
                               RngStream& rng);

struct QPotentialOptions {
    double grid_h = 0.0;  // estimator A time grid; <= 0 picks an automatic step
    Engine b_engine;      // estimator B first-passage engine (auto eps)
};

// Both sides of U_q(delta) = int e^{-qt} P(X_t <= delta) dt
//                          = (1 - E e^{-q T_1})/q:
// estimator A integrates the empirical survival over a skeleton time grid,
// estimator B transforms first-passage samples.  Beyond increment sampling
// the two pipelines share no code.
std::pair<PotentialEstimate, PotentialEstimate>
potential_q_two_ways(const SubordinatorSpec& spec, double delta, double q,
                     long long replicas, RngStream& rng,
                     const QPotentialOptions& opt = {});

// Alternating convolution series for U(x) when drift > 0:
//   U(x) = sum_n (-1)^n / d^{n+1} * int_0^x (1 * tail^{*n})(y) dy,
// tail^{*0} = Dirac at 0 (so the n = 0 term is x/d).  Evaluated on a uniform
// grid; the first cell of the tail is integrated by quadrature so an
// integrable blow-up at 0+ is handled exactly at measure level.  Truncation
// uses the alternating-series remainder when terms decrease, otherwise the
// estimates come back flagged.
std::vector<PotentialEstimate> potential_series(const SubordinatorSpec& spec,
                                                const std::vector<double>& xs,
                                                double grid_step = 0.0,
                                                double tol = 1e-9);

// U(delta) ~ 1/(Gamma(1+alpha) Phi(1/delta)) for families with a declared
// regular-variation index; exact for the pure stable family.
PotentialEstimate potential_asymptotic(const SubordinatorSpec& spec, double delta);

// Most accurate route available for the spec: exact/asymptotic for drift-only
// and pure stable, series when drift > 0, Monte Carlo otherwise.
PotentialEstimate best_potential(const SubordinatorSpec& spec, double delta,
                                 long long mc_replicas, uint64_t seed,
                                 uint64_t stream_block);

// Geometric grid U(delta_j) = r^j (Lemma-2-style levels).
struct DeltaGrid {
    double ratio = 0.5;
    std::vector<double> deltas; // strictly decreasing
    PotentialMethod method = PotentialMethod::asymptotic;
    bool truncated = false; // stopped early: target below the evaluator's range
    std::string note;
};

DeltaGrid solve_delta_grid(const SubordinatorSpec& spec, double r, int j_max,
                           PotentialMethod method, long long mc_replicas = 20000,
                           uint64_t seed = 1);

} // namespace subcover

#endif
