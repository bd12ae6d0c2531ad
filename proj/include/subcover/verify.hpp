#ifndef SUBCOVER_VERIFY_HPP
#define SUBCOVER_VERIFY_HPP

#include "subcover/covering.hpp"
#include "subcover/model.hpp"
#include "subcover/potential.hpp"
#include "subcover/simulate.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace subcover {

struct ReportRow {
    double delta = 0.0; // level delta, or grid point x for evaluator runs
    double u = 0.0;
    double u_stderr = 0.0;
    std::string u_method;
    double statistic = 0.0;
    double stderr_ = 0.0;
    double variance = 0.0;
    double var_stderr = 0.0;
    long long replicas = 0;
    std::map<std::string, double> extra;
};

struct Verdict {
    std::string criterion;
    bool pass = false;
    std::string detail;
};

// Per-replica covering record, emitted to the replica table when requested.
struct ReplicaRecord {
    long long replica = 0;
    double delta = 0.0;
    double t = 0.0;
    std::string engine;
    long long n = 0;
    long long literal_n = 0;
    double max_renewal_time = 0.0;
};

struct ExperimentReport {
    std::string experiment;
    std::string spec_summary;
    uint64_t seed = 0;
    nlohmann::json options; // resolved run options, self-describing
    std::map<std::string, double> tolerances;
    std::vector<ReportRow> rows;
    std::map<std::string, double> scalars;
    std::vector<Verdict> verdicts;
    std::vector<std::string> notes;
    std::vector<ReplicaRecord> replica_records; // CSV only, never in JSON

    // metadata: excluded from reproducibility comparisons
    std::string timestamp;
    double wallclock_ms = 0.0;
    int workers = 1;

    bool pass() const;
    nlohmann::json to_json(bool with_metadata = true) const;
    std::string summary_text() const;
    std::string rows_csv() const;
    std::string replicas_csv() const;
};

struct ExperimentOptions {
    double t = 1.0;
    std::vector<double> deltas; // decreasing levels (or grid points x)
    long long replicas = 1000;
    Engine engine;
    uint64_t seed = 1;
    int workers = 1;
    std::map<std::string, double> tol; // per-experiment overrides
    long long u_replicas = 20000;      // Monte Carlo potential fallback
    bool single_path = false;          // theorem1 secondary mode
    bool dump_replicas = false;
};

// Statistical check of lim U(delta) N(t,delta) = t: per-delta mean and
// variance of U*N over replicas, with tolerance and 3-sigma trend verdicts.
ExperimentReport run_theorem1(const SubordinatorSpec& spec, const ExperimentOptions& opt);

// Exponential tail bound with the derived constant C_a = e:
// P(N >= x) <= exp(2 C_a t / U - x/8) at every empirical atom.
ExperimentReport run_lemma4(const SubordinatorSpec& spec, const ExperimentOptions& opt);

// Var(N) U^2 / t^2 across delta decades: bounded, no increasing trend.
ExperimentReport run_lemma5(const SubordinatorSpec& spec, const ExperimentOptions& opt);

// Box indices: regression slope of ln N on ln(1/delta), per replica then
// averaged, compared against the declared index of Phi.
ExperimentReport run_indices(const SubordinatorSpec& spec, const ExperimentOptions& opt);

// N * (series U) / t -> 1 for drift > 0.
ExperimentReport run_cor1(const SubordinatorSpec& spec, const ExperimentOptions& opt);

// N delta^alpha / (t Gamma(1+alpha) L(1/delta)) -> 1 with the family's
// slowly varying part.
ExperimentReport run_cor2(const SubordinatorSpec& spec, const ExperimentOptions& opt);

// Potential table: every applicable method per delta, cross-method
// agreement, monotonicity, and the derived two-sided bound
// (1-2/e)/(1-1/e) <= U(delta) Phi(1/delta) <= e.
ExperimentReport run_potential_table(const SubordinatorSpec& spec, const ExperimentOptions& opt);

// f(x) = ln|ln x| / Phi(ln|ln x| / x) for x in (0, 1/e).
double hausdorff_f(const SubordinatorSpec& spec, double x);

// Profile of f and of the products Phi(x) f(x) and Phi(1/x) f(x) on a log
// grid; report-only (no hard failure on the literal product).
ExperimentReport run_hausdorff(const SubordinatorSpec& spec, const ExperimentOptions& opt);

// g(x) = Phi(x) lnln(x) / Phi(x lnln(x)) on an increasing grid; classifies
// the trend over the last three decades as diverges / bounded / finite-limit.
ExperimentReport run_condition_2_4(const SubordinatorSpec& spec, const ExperimentOptions& opt);

// Path generator run: event records are streamed to paths_out when given.
ExperimentReport run_simulate_paths(const SubordinatorSpec& spec, const ExperimentOptions& opt,
                                    std::ostream* paths_out = nullptr);

// Derived two-sided bound constants for U(delta) Phi(1/delta).
double potential_bound_lower();
double potential_bound_upper();

} // namespace subcover

#endif
