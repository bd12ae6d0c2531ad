#ifndef SUBCOVER_MODEL_HPP
#define SUBCOVER_MODEL_HPP

#include <functional>
#include <string>
#include <vector>

namespace subcover {

// Tail function handle x -> Pi(x, inf).  Must be nonincreasing, nonnegative
// and finite for every x > 0; mass below `cutoff` is not represented.
struct LevyTail {
    std::function<double(double)> eval;
    double cutoff = 0.0;
};

enum class Family {
    drift_only,        // empty Levy measure
    stable,            // Phi(lambda) = lambda^alpha, alpha in (0,1)
    gamma,             // Phi(lambda) = a ln(1 + lambda/b)
    inverse_gaussian,  // Phi(lambda) = (lam/mu)(sqrt(1 + 2 mu^2 lambda/lam) - 1)
    compound_poisson,  // rate c, jump law on (0,inf)
    truncated_general, // caller-supplied tail, truncated at eps > 0
};

enum class JumpLaw { fixed, exponential };

struct SubordinatorSpec {
    Family family = Family::drift_only;
    double drift = 0.0;

    double alpha = 0.5;                  // stable
    double gamma_a = 1.0, gamma_b = 1.0; // gamma
    double ig_mu = 1.0, ig_lam = 1.0;    // inverse gaussian
    double cp_rate = 1.0;                // compound poisson
    JumpLaw cp_jump = JumpLaw::fixed;
    double cp_jump_param = 1.0;          // fixed size, or exponential mean
    LevyTail tg_tail;                    // truncated general
    double tg_trunc = 0.0;

    static SubordinatorSpec make_drift_only(double d);
    static SubordinatorSpec make_stable(double alpha, double drift = 0.0);
    static SubordinatorSpec make_gamma(double a, double b, double drift = 0.0);
    static SubordinatorSpec make_inverse_gaussian(double mu, double lam, double drift = 0.0);
    static SubordinatorSpec make_compound_poisson_fixed(double rate, double jump, double drift = 0.0);
    static SubordinatorSpec make_compound_poisson_exp(double rate, double mean_jump, double drift = 0.0);
    static SubordinatorSpec make_truncated_general(LevyTail tail, double trunc, double drift = 0.0);

    bool infinite_activity() const;
    // Pi(0,inf); +inf for infinite-activity families.
    double total_jump_rate() const;
    bool supports_exact_increments() const;
    std::string summary() const;
};

struct EligibilityReport {
    bool params_ok = true;
    bool eligible = false;       // Pi(0,inf) = inf or drift > 0: not compound Poisson
    bool infinite_activity = false;
    bool integrable = true;      // int_0^1 tail < inf (numeric for truncated_general)
    std::vector<std::string> messages;
    bool ok() const { return params_ok && eligible && integrable; }
};

// Throws std::invalid_argument when parameters are out of range.
void require_valid(const SubordinatorSpec& spec);

// Never throws for parameter problems; the report carries the failures.
EligibilityReport validate(const SubordinatorSpec& spec);

// Laplace exponent Phi(lambda) = d lambda + int (1 - e^{-lambda y}) Pi(dy),
// closed form per family (numeric tail transform for truncated_general).
double eval_phi(const SubordinatorSpec& spec, double lambda);

// Levy tail Pi(x, inf).
double eval_tail(const SubordinatorSpec& spec, double x);

// Independent route: d lambda + lambda int_0^inf e^{-lambda x} tail(x) dx by
// adaptive quadrature with a logarithmic substitution near zero.  Used as a
// cross-check of eval_phi.
double phi_from_tail(const SubordinatorSpec& spec, double lambda, double rel_tol = 1e-9);

// int_0^eps x Pi(dx) = int_0^eps tail - eps*tail(eps); closed form for the
// stable family, quadrature otherwise.  Used for small-jump compensation.
double small_jump_mean(const SubordinatorSpec& spec, double eps);

// Declared regular-variation index of Phi at infinity; throws
// std::invalid_argument for truncated_general (no declared index).
double rv_index(const SubordinatorSpec& spec);
bool has_rv_index(const SubordinatorSpec& spec);

// Family slowly-varying part, Phi(lambda) ~ lambda^alpha L(lambda).
double slowly_varying_L(const SubordinatorSpec& spec, double lambda);

} // namespace subcover

#endif
