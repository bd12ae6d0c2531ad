#include "subcover/verify.hpp"
#include "subcover/math/stats.hpp"
#include "subcover/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace subcover {

namespace {

constexpr uint64_t kPurposeCounts = 1;
constexpr uint64_t kPurposePotential = 2;
constexpr uint64_t kPurposePaths = 3;

uint64_t stream_id(uint64_t purpose, uint64_t delta_idx, uint64_t replica) {
    return (purpose << 56) | (delta_idx << 40) | replica;
}

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    }
};

std::string iso_timestamp() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

double tol_or(const ExperimentOptions& opt, const std::string& key, double fallback) {
    auto it = opt.tol.find(key);
    return it == opt.tol.end() ? fallback : it->second;
}

nlohmann::json engine_json(const Engine& e) {
    return {{"kind", e.kind == EngineKind::events ? "events" : "skeleton"},
            {"eps", e.eps},
            {"compensate", e.compensate},
            {"h", e.h}};
}

nlohmann::json options_json(const ExperimentOptions& opt) {
    return {{"t", opt.t},
            {"deltas", opt.deltas},
            {"replicas", opt.replicas},
            {"engine", engine_json(opt.engine)},
            {"u_replicas", opt.u_replicas},
            {"single_path", opt.single_path}};
}

std::vector<double> sorted_desc(std::vector<double> v) {
    std::sort(v.begin(), v.end(), std::greater<double>());
    return v;
}

void require_eligible(const SubordinatorSpec& spec) {
    const EligibilityReport rep = validate(spec);
    if (!rep.params_ok)
        throw std::invalid_argument("spec parameters invalid: " +
                                    (rep.messages.empty() ? "" : rep.messages.front()));
    if (!rep.eligible)
        throw std::invalid_argument(
            "spec is a compound Poisson process (finite activity with zero drift); "
            "excluded by the covering-theorem hypotheses");
}

// Replica draws of the renewal covering count at one delta.
std::vector<long long> draw_counts(const SubordinatorSpec& spec, double t, double delta,
                                   const Engine& engine, long long replicas,
                                   uint64_t seed, uint64_t delta_idx, int workers,
                                   std::vector<ReplicaRecord>* records) {
    std::vector<long long> ns(static_cast<std::size_t>(replicas));
    std::vector<long long> literal(records ? static_cast<std::size_t>(replicas) : 0);
    std::vector<double> maxt(records ? static_cast<std::size_t>(replicas) : 0);
    parallel_for(replicas, workers, [&](long long r) {
        RngStream rng(seed, stream_id(kPurposeCounts, delta_idx, static_cast<uint64_t>(r)));
        const CoveringCount c = count_covering_renewal(spec, t, delta, engine, rng);
        ns[static_cast<std::size_t>(r)] = c.renewal_count;
        if (records) {
            literal[static_cast<std::size_t>(r)] = c.literal_count;
            maxt[static_cast<std::size_t>(r)] = c.max_renewal_time();
        }
    });
    if (records) {
        const std::string tag = engine.tag(spec, delta);
        for (long long r = 0; r < replicas; ++r)
            records->push_back({r, delta, t, tag, ns[static_cast<std::size_t>(r)],
                                literal[static_cast<std::size_t>(r)],
                                maxt[static_cast<std::size_t>(r)]});
    }
    return ns;
}

// Non-increasing trend across consecutive levels at 3 sigma.
Verdict trend_non_increasing(const std::string& name, const std::vector<double>& values,
                             const std::vector<double>& errors) {
    Verdict v;
    v.criterion = name;
    v.pass = true;
    if (values.size() < 2) {
        v.detail = "single level; trend vacuous";
        return v;
    }
    std::ostringstream detail;
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
        const double slack =
            3.0 * std::sqrt(errors[k] * errors[k] + errors[k + 1] * errors[k + 1]);
        if (values[k + 1] > values[k] + slack) {
            v.pass = false;
            detail << "increase at step " << k << " (" << values[k] << " -> "
                   << values[k + 1] << ", slack " << slack << "); ";
        }
    }
    v.detail = v.pass ? "non-increasing at 3 sigma" : detail.str();
    return v;
}

ExperimentReport make_report(const std::string& name, const SubordinatorSpec& spec,
                             const ExperimentOptions& opt) {
    ExperimentReport rep;
    rep.experiment = name;
    rep.spec_summary = spec.summary();
    rep.seed = opt.seed;
    rep.options = options_json(opt);
    rep.workers = opt.workers;
    rep.timestamp = iso_timestamp();
    return rep;
}

} // namespace

double potential_bound_lower() { return (1.0 - 2.0 / M_E) / (1.0 - 1.0 / M_E); }
double potential_bound_upper() { return M_E; }

// ---------------------------------------------------------------------------
// report plumbing
// ---------------------------------------------------------------------------

bool ExperimentReport::pass() const {
    for (const auto& v : verdicts)
        if (!v.pass)
            return false;
    return true;
}

nlohmann::json ExperimentReport::to_json(bool with_metadata) const {
    nlohmann::json j;
    j["schema"] = "subcover-report-v1";
    j["experiment"] = experiment;
    j["spec"] = spec_summary;
    j["seed"] = seed;
    j["options"] = options;
    j["tolerances"] = tolerances;
    nlohmann::json rows_j = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json rj = {{"delta", r.delta},       {"u", r.u},
                             {"u_stderr", r.u_stderr}, {"u_method", r.u_method},
                             {"statistic", r.statistic}, {"stderr", r.stderr_},
                             {"variance", r.variance},   {"var_stderr", r.var_stderr},
                             {"replicas", r.replicas}};
        for (const auto& [k, v] : r.extra)
            rj[k] = v;
        rows_j.push_back(rj);
    }
    j["rows"] = rows_j;
    j["scalars"] = scalars;
    nlohmann::json verdicts_j = nlohmann::json::array();
    for (const auto& v : verdicts)
        verdicts_j.push_back({{"criterion", v.criterion}, {"pass", v.pass}, {"detail", v.detail}});
    j["verdicts"] = verdicts_j;
    j["notes"] = notes;
    j["pass"] = pass();
    if (with_metadata)
        j["metadata"] = {{"timestamp", timestamp},
                         {"wallclock_ms", wallclock_ms},
                         {"workers", workers}};
    return j;
}

std::string ExperimentReport::summary_text() const {
    std::ostringstream os;
    os << "experiment: " << experiment << "\n"
       << "spec:       " << spec_summary << "\n"
       << "seed:       " << seed << "\n";
    for (const auto& [k, v] : tolerances)
        os << "tol " << k << " = " << v << "\n";
    os << "\n";
    for (const auto& r : rows) {
        os << "  delta=" << r.delta;
        if (!r.u_method.empty())
            os << "  U=" << r.u << " (" << r.u_method << ")";
        os << "  statistic=" << r.statistic;
        if (r.stderr_ > 0.0)
            os << " +- " << r.stderr_;
        if (r.replicas > 0)
            os << "  replicas=" << r.replicas;
        os << "\n";
    }
    for (const auto& [k, v] : scalars)
        os << "  " << k << " = " << v << "\n";
    os << "\n";
    for (const auto& v : verdicts)
        os << (v.pass ? "[PASS] " : "[FAIL] ") << v.criterion << ": " << v.detail << "\n";
    for (const auto& n : notes)
        os << "note: " << n << "\n";
    os << "overall: " << (pass() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

std::string ExperimentReport::rows_csv() const {
    std::set<std::string> extra_keys;
    for (const auto& r : rows)
        for (const auto& [k, v] : r.extra)
            extra_keys.insert(k);
    std::ostringstream os;
    os << "delta,u,u_stderr,u_method,statistic,stderr,variance,var_stderr,replicas";
    for (const auto& k : extra_keys)
        os << ',' << k;
    os << '\n';
    for (const auto& r : rows) {
        os << fmt(r.delta) << ',' << fmt(r.u) << ',' << fmt(r.u_stderr) << ','
           << r.u_method << ',' << fmt(r.statistic) << ',' << fmt(r.stderr_) << ','
           << fmt(r.variance) << ',' << fmt(r.var_stderr) << ',' << r.replicas;
        for (const auto& k : extra_keys) {
            auto it = r.extra.find(k);
            os << ',' << (it == r.extra.end() ? "" : fmt(it->second));
        }
        os << '\n';
    }
    return os.str();
}

std::string ExperimentReport::replicas_csv() const {
    std::ostringstream os;
    os << "replica,delta,t,engine,n,literal_n,max_renewal_time\n";
    for (const auto& r : replica_records)
        os << r.replica << ',' << fmt(r.delta) << ',' << fmt(r.t) << ',' << r.engine
           << ',' << r.n << ',' << r.literal_n << ',' << fmt(r.max_renewal_time) << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// theorem 1
// ---------------------------------------------------------------------------

ExperimentReport run_theorem1(const SubordinatorSpec& spec, const ExperimentOptions& opt) {
    Stopwatch sw;
    require_eligible(spec);
    if (opt.deltas.empty())
        throw std::invalid_argument("run_theorem1: need a nonempty delta list");
    const std::vector<double> deltas = sorted_desc(opt.deltas);

    ExperimentReport rep = make_report("theorem1", spec, opt);
    const double tol_mean = tol_or(opt, "mean_abs_error", 0.05 * opt.t);
    rep.tolerances["mean_abs_error"] = tol_mean;

    if (opt.single_path) {
        // secondary check: one long path, nested deltas on the same trajectory
        RngStream rng(opt.seed, stream_id(kPurposePaths, 0, 0));
        const double eps = opt.engine.resolve_eps(spec, deltas.back());
        const SamplePath path =
            simulate_events(spec, opt.t, eps, opt.engine.compensate, rng);
        for (std::size_t k = 0; k < deltas.size(); ++k) {
            const PotentialEstimate u = best_potential(
                spec, deltas[k], opt.u_replicas, opt.seed, stream_id(kPurposePotential, k, 0));
            const CoveringCount c = count_covering_path(path, opt.t, deltas[k]);
            ReportRow row;
            row.delta = deltas[k];
            row.u = u.value;
            row.u_stderr = u.stderr_;
            row.u_method = method_name(u.method);
            row.statistic = u.value * static_cast<double>(c.renewal_count);
            row.replicas = 1;
            row.extra["n"] = static_cast<double>(c.renewal_count);
            rep.rows.push_back(row);
        }
        Verdict v;
        v.criterion = "single-path-un-close-to-t@smallest-delta";
        const double got = rep.rows.back().statistic;
        v.pass = std::fabs(got - opt.t) <= tol_mean;
        v.detail = "U*N = " + fmt(got) + " vs t = " + fmt(opt.t);
        rep.verdicts.push_back(v);
        rep.notes.push_back("single-path mode: a.s. statement probed along one trajectory");
        rep.wallclock_ms = sw.ms();
        return rep;
    }

    std::vector<double> abs_err, abs_err_se, variances, var_se;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        const double delta = deltas[k];
        const PotentialEstimate u = best_potential(
            spec, delta, opt.u_replicas, opt.seed, stream_id(kPurposePotential, k, 0));
        const std::vector<long long> ns =
            draw_counts(spec, opt.t, delta, opt.engine, opt.replicas, opt.seed, k,
                        opt.workers, opt.dump_replicas ? &rep.replica_records : nullptr);
        std::vector<double> un(ns.size());
        for (std::size_t i = 0; i < ns.size(); ++i)
            un[i] = u.value * static_cast<double>(ns[i]);
        const math::MeanVar mv = math::mean_var(un);

        ReportRow row;
        row.delta = delta;
        row.u = u.value;
        row.u_stderr = u.stderr_;
        row.u_method = method_name(u.method);
        row.statistic = mv.mean;
        row.stderr_ = mv.stderr_mean;
        row.variance = mv.var;
        row.var_stderr = math::variance_stderr(mv);
        row.replicas = opt.replicas;
        rep.rows.push_back(row);

        abs_err.push_back(std::fabs(mv.mean - opt.t));
        abs_err_se.push_back(mv.stderr_mean);
        variances.push_back(mv.var);
        var_se.push_back(row.var_stderr);
    }

    Verdict vm;
    vm.criterion = "mean-within-tol@smallest-delta";
    vm.pass = abs_err.back() <= tol_mean + 1e-15;
    vm.detail = "|mean - t| = " + fmt(abs_err.back()) + " vs tol " + fmt(tol_mean);
    rep.verdicts.push_back(vm);
    rep.verdicts.push_back(trend_non_increasing("abs-error-non-increasing", abs_err, abs_err_se));
    rep.verdicts.push_back(trend_non_increasing("variance-non-increasing", variances, var_se));
    rep.wallclock_ms = sw.ms();
    return rep;
}

// ---------------------------------------------------------------------------
// lemma 4
// ---------------------------------------------------------------------------

ExperimentReport run_lemma4(const SubordinatorSpec& spec, const ExperimentOptions& opt) {
    Stopwatch sw;
    require_eligible(spec);
    if (opt.deltas.empty())
        throw std::invalid_argument("run_lemma4: need a nonempty delta list");
    const std::vector<double> deltas = sorted_desc(opt.deltas);

    ExperimentReport rep = make_report("lemma4", spec, opt);
    const double c_a = tol_or(opt, "c_a", M_E);
    rep.tolerances["c_a"] = c_a;

    bool all_clear = true;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        const double delta = deltas[k];
        const PotentialEstimate u = best_potential(
            spec, delta, opt.u_replicas, opt.seed, stream_id(kPurposePotential, k, 0));
        const std::vector<long long> ns =
            draw_counts(spec, opt.t, delta, opt.engine, opt.replicas, opt.seed, k,
                        opt.workers, opt.dump_replicas ? &rep.replica_records : nullptr);

        std::vector<long long> sorted = ns;
        std::sort(sorted.begin(), sorted.end());
        const double exponent_base = 2.0 * c_a * opt.t / u.value;
        long long violations = 0;
        double min_log_margin = std::numeric_limits<double>::infinity();
        bool vacuous = true;
        const double n_total = static_cast<double>(sorted.size());
        std::size_t i = 0;
        while (i < sorted.size()) {
            const long long atom = sorted[i];
            const double surv = (n_total - static_cast<double>(i)) / n_total;
            const double log_bound = exponent_base - static_cast<double>(atom) / 8.0;
            if (log_bound < 0.0)
                vacuous = false;
            const double margin = log_bound - std::log(surv);
            min_log_margin = std::min(min_log_margin, margin);
            if (margin < 0.0)
                ++violations;
            while (i < sorted.size() && sorted[i] == atom)
                ++i;
        }

        const math::MeanVar mv = math::mean_var(std::vector<double>(ns.begin(), ns.end()));
        ReportRow row;
        row.delta = delta;
        row.u = u.value;
        row.u_stderr = u.stderr_;
        row.u_method = method_name(u.method);
        row.statistic = static_cast<double>(violations);
        row.replicas = opt.replicas;
        row.extra["mean_n"] = mv.mean;
        row.extra["max_n"] = static_cast<double>(sorted.back());
        row.extra["min_log_margin"] = min_log_margin;
        row.extra["bound_binding_from_x"] = 8.0 * exponent_base;
        rep.rows.push_back(row);
        if (violations > 0)
            all_clear = false;
        if (vacuous)
            rep.notes.push_back("delta=" + fmt(delta) +
                                ": bound exceeds 1 at every empirical atom (vacuously satisfied)");

        Verdict v;
        v.criterion = "no-tail-bound-violation@delta=" + fmt(delta);
        v.pass = violations == 0;
        v.detail = fmt(static_cast<double>(violations)) + " violations, min log-margin " +
                   fmt(min_log_margin);
        rep.verdicts.push_back(v);
    }
    rep.scalars["total_violations"] = all_clear ? 0.0 : 1.0;
    rep.wallclock_ms = sw.ms();
    return rep;
}

// ---------------------------------------------------------------------------
// lemma 5
// ---------------------------------------------------------------------------

ExperimentReport run_lemma5(const SubordinatorSpec& spec, const ExperimentOptions& opt) {
    Stopwatch sw;
    require_eligible(spec);
    if (opt.deltas.empty())
        throw std::invalid_argument("run_lemma5: need a nonempty delta list");
    const std::vector<double> deltas = sorted_desc(opt.deltas);

    ExperimentReport rep = make_report("lemma5", spec, opt);
    std::vector<double> ratios, ratio_se;
    double max_ratio = 0.0;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        const double delta = deltas[k];
        const PotentialEstimate u = best_potential(
            spec, delta, opt.u_replicas, opt.seed, stream_id(kPurposePotential, k, 0));
        const std::vector<long long> ns =
            draw_counts(spec, opt.t, delta, opt.engine, opt.replicas, opt.seed, k,
                        opt.workers, opt.dump_replicas ? &rep.replica_records : nullptr);
        const math::MeanVar mv = math::mean_var(std::vector<double>(ns.begin(), ns.end()));
        const double scale = u.value * u.value / (opt.t * opt.t);
        const double ratio = mv.var * scale;
        const double se = math::variance_stderr(mv) * scale;

        ReportRow row;
        row.delta = delta;
        row.u = u.value;
        row.u_stderr = u.stderr_;
        row.u_method = method_name(u.method);
        row.statistic = ratio;
        row.stderr_ = se;
        row.variance = mv.var;
        row.var_stderr = math::variance_stderr(mv);
        row.replicas = opt.replicas;
        row.extra["mean_n"] = mv.mean;
        rep.rows.push_back(row);
        ratios.push_back(ratio);
        ratio_se.push_back(se);
        max_ratio = std::max(max_ratio, ratio);
    }
    rep.scalars["max_ratio"] = max_ratio;
    rep.verdicts.push_back(
        trend_non_increasing("variance-ratio-no-increasing-trend", ratios, ratio_se));
    rep.wallclock_ms = sw.ms();
    return rep;
}

// ---------------------------------------------------------------------------
// box indices
// ---------------------------------------------------------------------------

ExperimentReport run_indices(const SubordinatorSpec& spec, const ExperimentOptions& opt) {
    Stopwatch sw;
    require_eligible(spec);
    const std::vector<double> deltas = sorted_desc(opt.deltas);
    if (deltas.size() < 4 ||
        std::log10(deltas.front() / deltas.back()) < 3.0 - 1e-9)
        throw std::invalid_argument(
            "run_indices: need at least 3 decades of delta (>= 4 log-spaced levels)");

    ExperimentReport rep = make_report("indices", spec, opt);
    const double tol_slope = tol_or(opt, "slope_abs_error", 0.05);
    rep.tolerances["slope_abs_error"] = tol_slope;

    // per (replica, delta) independent renewal counts
    std::vector<std::vector<long long>> counts(deltas.size());
    for (std::size_t k = 0; k < deltas.size(); ++k)
        counts[k] = draw_counts(spec, opt.t, deltas[k], opt.engine, opt.replicas,
                                opt.seed, k, opt.workers,
                                opt.dump_replicas ? &rep.replica_records : nullptr);

    // per-replica OLS of ln N on ln(1/delta), restricted to N >= 1 points;
    // replicas with fewer than 3 usable points are dropped (and counted)
    std::vector<double> slopes;
    long long dropped = 0;
    for (long long r = 0; r < opt.replicas; ++r) {
        std::vector<double> xs, ys;
        for (std::size_t k = 0; k < deltas.size(); ++k) {
            const long long n = counts[k][static_cast<std::size_t>(r)];
            if (n >= 1) {
                xs.push_back(std::log(1.0 / deltas[k]));
                ys.push_back(std::log(static_cast<double>(n)));
            }
        }
        if (xs.size() < 3) {
            ++dropped;
            continue;
        }
        slopes.push_back(math::ols_slope(xs, ys));
    }
    if (slopes.size() < 2)
        throw std::runtime_error("run_indices: too few usable replicas");
    const math::MeanVar mv = math::mean_var(slopes);

    for (std::size_t k = 0; k < deltas.size(); ++k) {
        const math::MeanVar nk =
            math::mean_var(std::vector<double>(counts[k].begin(), counts[k].end()));
        ReportRow row;
        row.delta = deltas[k];
        row.statistic = nk.mean;
        row.stderr_ = nk.stderr_mean;
        row.replicas = opt.replicas;
        rep.rows.push_back(row);
    }
    rep.scalars["slope"] = mv.mean;
    rep.scalars["slope_stderr"] = mv.stderr_mean;
    rep.scalars["dropped_replicas"] = static_cast<double>(dropped);

    Verdict v;
    v.criterion = "slope-matches-phi-index";
    if (has_rv_index(spec)) {
        const double idx = rv_index(spec);
        rep.scalars["expected_index"] = idx;
        v.pass = std::fabs(mv.mean - idx) <= tol_slope;
        v.detail = "slope " + fmt(mv.mean) + " vs index " + fmt(idx) + " (tol " +
                   fmt(tol_slope) + ")";
    } else {
        v.pass = true;
        v.detail = "no declared index for this family; slope " + fmt(mv.mean) +
                   " reported only";
    }
    rep.verdicts.push_back(v);
    rep.wallclock_ms = sw.ms();
    return rep;
}

// ---------------------------------------------------------------------------
// corollaries
// ---------------------------------------------------------------------------

namespace {

ExperimentReport run_ratio_experiment(const std::string& name,
                                      const SubordinatorSpec& spec,
                                      const ExperimentOptions& opt,
                                      double default_tol,
                                      const std::function<double(double, std::size_t, ReportRow&)>&
                                          scale_for_delta) {
    Stopwatch sw;
    require_eligible(spec);
    if (opt.deltas.empty())
        throw std::invalid_argument(name + ": need a nonempty delta list");
    const std::vector<double> deltas = sorted_desc(opt.deltas);

    ExperimentReport rep = make_report(name, spec, opt);
    const double tol_mean = tol_or(opt, "mean_abs_error", default_tol);
    rep.tolerances["mean_abs_error"] = tol_mean;

    std::vector<double> abs_err, abs_err_se;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        const double delta = deltas[k];
        ReportRow row;
        row.delta = delta;
        row.replicas = opt.replicas;
        const double scale = scale_for_delta(delta, k, row); // ratio = scale * N
        const std::vector<long long> ns =
            draw_counts(spec, opt.t, delta, opt.engine, opt.replicas, opt.seed, k,
                        opt.workers, opt.dump_replicas ? &rep.replica_records : nullptr);
        std::vector<double> ratio(ns.size());
        for (std::size_t i = 0; i < ns.size(); ++i)
            ratio[i] = scale * static_cast<double>(ns[i]);
        const math::MeanVar mv = math::mean_var(ratio);
        row.statistic = mv.mean;
        row.stderr_ = mv.stderr_mean;
        row.variance = mv.var;
        row.var_stderr = math::variance_stderr(mv);
        rep.rows.push_back(row);
        abs_err.push_back(std::fabs(mv.mean - 1.0));
        abs_err_se.push_back(mv.stderr_mean);
    }

    Verdict vm;
    vm.criterion = "ratio-within-tol@smallest-delta";
    vm.pass = abs_err.back() <= tol_mean + 1e-15;
    vm.detail = "|ratio - 1| = " + fmt(abs_err.back()) + " vs tol " + fmt(tol_mean);
    rep.verdicts.push_back(vm);
    rep.verdicts.push_back(
        trend_non_increasing("ratio-error-non-increasing", abs_err, abs_err_se));
    rep.wallclock_ms = sw.ms();
    return rep;
}

} // namespace

ExperimentReport run_cor1(const SubordinatorSpec& spec, const ExperimentOptions& opt) {
    if (!(spec.drift > 0.0))
        throw std::invalid_argument("run_cor1: requires drift > 0 (series route)");
    return run_ratio_experiment(
        "cor1", spec, opt, 0.05,
        [&](double delta, std::size_t, ReportRow& row) {
            const PotentialEstimate u = potential_series(spec, {delta}, 0.0, 1e-9)[0];
            row.u = u.value;
            row.u_stderr = u.stderr_;
            row.u_method = method_name(u.method);
            return u.value / opt.t;
        });
}

ExperimentReport run_cor2(const SubordinatorSpec& spec, const ExperimentOptions& opt) {
    if (!has_rv_index(spec))
        throw std::invalid_argument("run_cor2: family has no declared regular-variation index");
    const double idx = rv_index(spec);
    return run_ratio_experiment(
        "cor2", spec, opt, 0.05,
        [&](double delta, std::size_t, ReportRow& row) {
            const double L = slowly_varying_L(spec, 1.0 / delta);
            row.u_method = "rv-asymptotic";
            row.extra["slowly_varying_L"] = L;
            return std::pow(delta, idx) / (opt.t * std::tgamma(1.0 + idx) * L);
        });
}

// ---------------------------------------------------------------------------
// potential table
// ---------------------------------------------------------------------------

ExperimentReport run_potential_table(const SubordinatorSpec& spec,
                                     const ExperimentOptions& opt) {
    Stopwatch sw;
    require_eligible(spec);
    if (opt.deltas.empty())
        throw std::invalid_argument("run_potential_table: need a nonempty delta list");
    const std::vector<double> deltas = sorted_desc(opt.deltas);

    ExperimentReport rep = make_report("potential-table", spec, opt);
    const double lower = potential_bound_lower();
    const double upper = potential_bound_upper();
    rep.tolerances["band_lower"] = lower;
    rep.tolerances["band_upper"] = upper;

    bool band_ok = true, agree_ok = true;
    std::vector<double> best_values, best_se;
    double band_min = std::numeric_limits<double>::infinity();
    double band_max = 0.0;
    std::ostringstream agree_detail;

    for (std::size_t k = 0; k < deltas.size(); ++k) {
        const double delta = deltas[k];
        std::vector<PotentialEstimate> ests;

        RngStream rng(opt.seed, stream_id(kPurposePotential, k, 1));
        ests.push_back(potential_mc(spec, delta, opt.replicas, opt.engine, rng));
        if (spec.drift > 0.0)
            ests.push_back(potential_series(spec, {delta}, 0.0, 1e-9)[0]);
        if (has_rv_index(spec))
            ests.push_back(potential_asymptotic(spec, delta));

        // best: exact asymptotic, else unflagged series, else Monte Carlo
        const bool asym_exact = spec.family == Family::drift_only ||
                                (spec.family == Family::stable && spec.drift == 0.0);
        const PotentialEstimate* best = &ests[0];
        for (const auto& e : ests) {
            if (e.method == PotentialMethod::asymptotic && asym_exact) best = &e;
        }
        if (best->method == PotentialMethod::monte_carlo)
            for (const auto& e : ests)
                if (e.method == PotentialMethod::series && !e.flagged) best = &e;

        for (const auto& e : ests) {
            ReportRow row;
            row.delta = delta;
            row.u = e.value;
            row.u_stderr = e.stderr_;
            row.u_method = method_name(e.method);
            row.statistic = e.value;
            row.stderr_ = e.stderr_;
            row.replicas = e.replicas;
            row.extra["flagged"] = e.flagged ? 1.0 : 0.0;
            if (&e == best) {
                const double band = e.value * eval_phi(spec, 1.0 / delta);
                row.extra["band_product"] = band;
                band_min = std::min(band_min, band);
                band_max = std::max(band_max, band);
                if (!(band >= lower - 1e-12) || !(band <= upper + 1e-12))
                    band_ok = false;
                best_values.push_back(e.value);
                best_se.push_back(e.stderr_);
            }
            rep.rows.push_back(row);
        }

        // pairwise agreement; the asymptotic route participates only where exact
        for (std::size_t i = 0; i < ests.size(); ++i) {
            for (std::size_t j = i + 1; j < ests.size(); ++j) {
                const auto& a = ests[i];
                const auto& b = ests[j];
                if (a.flagged || b.flagged)
                    continue;
                if ((a.method == PotentialMethod::asymptotic ||
                     b.method == PotentialMethod::asymptotic) &&
                    !asym_exact)
                    continue;
                const double slack = 3.0 * (a.stderr_ + b.stderr_) +
                                     1e-6 * std::max(a.value, b.value) + 1e-12;
                if (std::fabs(a.value - b.value) > slack) {
                    agree_ok = false;
                    agree_detail << "delta=" << delta << ": " << method_name(a.method)
                                 << "=" << a.value << " vs " << method_name(b.method)
                                 << "=" << b.value << " (slack " << slack << "); ";
                }
            }
        }
    }

    rep.scalars["band_min"] = band_min;
    rep.scalars["band_max"] = band_max;

    Verdict vb;
    vb.criterion = "two-sided-potential-bound";
    vb.pass = band_ok;
    vb.detail = "U*Phi(1/delta) in [" + fmt(band_min) + ", " + fmt(band_max) +
                "] vs [" + fmt(lower) + ", " + fmt(upper) + "]";
    rep.verdicts.push_back(vb);

    Verdict va;
    va.criterion = "cross-method-agreement";
    va.pass = agree_ok;
    va.detail = agree_ok ? "all pairs within 3 combined errors" : agree_detail.str();
    rep.verdicts.push_back(va);

    // monotone in delta: values recorded with delta decreasing
    Verdict vmono;
    vmono.criterion = "u-nondecreasing-in-delta";
    vmono.pass = true;
    for (std::size_t k = 0; k + 1 < best_values.size(); ++k) {
        const double slack = 3.0 * (best_se[k] + best_se[k + 1]);
        if (best_values[k + 1] > best_values[k] + slack)
            vmono.pass = false;
    }
    vmono.detail = vmono.pass ? "monotone within statistical error" : "monotonicity violated";
    rep.verdicts.push_back(vmono);
    rep.wallclock_ms = sw.ms();
    return rep;
}

// ---------------------------------------------------------------------------
// hausdorff function and condition (2.4)
// ---------------------------------------------------------------------------

double hausdorff_f(const SubordinatorSpec& spec, double x) {
    if (!(x > 0.0) || !(x < std::exp(-1.0)))
        throw std::domain_error("hausdorff_f: x must lie in (0, 1/e)");
    const double ell = std::log(-std::log(x));
    return ell / eval_phi(spec, ell / x);
}

ExperimentReport run_hausdorff(const SubordinatorSpec& spec, const ExperimentOptions& opt) {
    Stopwatch sw;
    require_valid(spec);
    ExperimentReport rep = make_report("hausdorff", spec, opt);
    std::vector<double> grid = opt.deltas;
    if (grid.empty())
        for (double x = 1e-8; x < std::exp(-1.0) * 0.999; x *= std::sqrt(10.0))
            grid.push_back(x);
    std::sort(grid.begin(), grid.end());

    double min_literal = std::numeric_limits<double>::infinity();
    double min_inverse_deep = std::numeric_limits<double>::infinity();
    const double e_to_minus_e = std::exp(-M_E);
    for (double x : grid) {
        const double f = hausdorff_f(spec, x);
        const double lit = eval_phi(spec, x) * f;
        const double inv = eval_phi(spec, 1.0 / x) * f;
        ReportRow row;
        row.delta = x;
        row.statistic = f;
        row.extra["phi_x_times_f"] = lit;
        row.extra["phi_inv_x_times_f"] = inv;
        rep.rows.push_back(row);
        min_literal = std::min(min_literal, lit);
        if (x <= e_to_minus_e)
            min_inverse_deep = std::min(min_inverse_deep, inv);
    }
    rep.scalars["min_phi_x_times_f"] = min_literal;
    rep.scalars["min_phi_inv_x_times_f_below_e^-e"] = min_inverse_deep;

    Verdict v;
    v.criterion = "profile-reported";
    v.pass = true;
    v.detail = "literal product min " + fmt(min_literal) +
               "; Phi(1/x) f(x) min over x <= e^-e: " + fmt(min_inverse_deep);
    rep.verdicts.push_back(v);
    rep.notes.push_back(
        "the literal product Phi(x) f(x) tends to 0 for every family as x -> 0; "
        "the Phi(1/x) reading is >= 1 for x <= e^-e by concavity of Phi. "
        "Profile reported, no hard failure.");
    rep.wallclock_ms = sw.ms();
    return rep;
}

ExperimentReport run_condition_2_4(const SubordinatorSpec& spec, const ExperimentOptions& opt) {
    Stopwatch sw;
    require_valid(spec);
    ExperimentReport rep = make_report("condition-2-4", spec, opt);
    std::vector<double> grid = opt.deltas;
    if (grid.empty())
        for (double x = 1e2; x <= 1e12 * 1.0001; x *= 10.0)
            grid.push_back(x);
    std::sort(grid.begin(), grid.end());
    const double e_to_e = std::exp(M_E);
    if (grid.front() < e_to_e)
        throw std::invalid_argument("run_condition_2_4: grid must start at or above e^e");
    if (grid.size() < 4 || std::log10(grid.back() / grid.front()) < 3.0 - 1e-9)
        throw std::invalid_argument("run_condition_2_4: grid must span at least 3 decades");

    auto g = [&](double x) {
        const double ll = std::log(std::log(x));
        return eval_phi(spec, x) * ll / eval_phi(spec, x * ll);
    };
    for (double x : grid) {
        ReportRow row;
        row.delta = x;
        row.statistic = g(x);
        rep.rows.push_back(row);
    }

    // classification from the last three points spaced at least a decade apart
    std::vector<double> marks;
    double next_cap = grid.back() * 10.0;
    for (auto it = grid.rbegin(); it != grid.rend() && marks.size() < 3; ++it) {
        if (*it <= next_cap / 9.99) {
            marks.push_back(*it);
            next_cap = *it;
        }
    }
    std::reverse(marks.begin(), marks.end());
    if (marks.size() < 3)
        throw std::invalid_argument("run_condition_2_4: could not find 3 decade marks");
    const double g1 = g(marks[0]), g2 = g(marks[1]), g3 = g(marks[2]);
    const double r1 = g2 / g1, r2 = g3 / g2;
    const double theta = tol_or(opt, "trend_theta", 0.005);
    rep.tolerances["trend_theta"] = theta;
    std::string clazz;
    if (r1 > 1.0 + theta && r2 > 1.0 + theta)
        clazz = "diverges";
    else if (std::fabs(r1 - 1.0) <= theta && std::fabs(r2 - 1.0) <= theta)
        clazz = "finite-limit";
    else
        clazz = "bounded";
    rep.scalars["g_last"] = g3;
    rep.scalars["decade_ratio_1"] = r1;
    rep.scalars["decade_ratio_2"] = r2;
    rep.notes.push_back("classification: " + clazz);

    Verdict v;
    v.criterion = "condition-2-4-classification";
    if (has_rv_index(spec)) {
        const std::string expected = rv_index(spec) < 1.0 ? "diverges" : "finite-limit";
        v.pass = clazz == expected;
        v.detail = "classified '" + clazz + "', expected '" + expected +
                   "' for index " + fmt(rv_index(spec));
    } else {
        v.pass = true;
        v.detail = "classified '" + clazz + "' (no declared index; informational)";
    }
    rep.verdicts.push_back(v);
    rep.wallclock_ms = sw.ms();
    return rep;
}

// ---------------------------------------------------------------------------
// path generation run
// ---------------------------------------------------------------------------

ExperimentReport run_simulate_paths(const SubordinatorSpec& spec, const ExperimentOptions& opt,
                                    std::ostream* paths_out) {
    Stopwatch sw;
    require_valid(spec);
    ExperimentReport rep = make_report("simulate-paths", spec, opt);
    double eps = opt.engine.eps;
    if (!(eps > 0.0) && spec.infinite_activity()) {
        if (opt.deltas.empty())
            throw std::invalid_argument(
                "run_simulate_paths: infinite-activity spec needs eps (or a delta list "
                "to derive it from)");
        eps = sorted_desc(opt.deltas).back() / 50.0;
    }
    if (paths_out)
        *paths_out << "replica,time,jump,value\n";
    double total_events = 0.0;
    for (long long r = 0; r < opt.replicas; ++r) {
        RngStream rng(opt.seed, stream_id(kPurposePaths, 0, static_cast<uint64_t>(r)));
        const SamplePath p =
            simulate_events(spec, opt.t, eps, opt.engine.compensate, rng);
        total_events += static_cast<double>(p.times.size());
        if (paths_out) {
            double cum = 0.0;
            for (std::size_t i = 0; i < p.times.size(); ++i) {
                cum += p.jumps[i];
                *paths_out << r << ',' << fmt(p.times[i]) << ',' << fmt(p.jumps[i]) << ','
                           << fmt(p.drift * p.times[i] + cum) << '\n';
            }
        }
        if (r == 0) {
            ReportRow row;
            row.delta = eps;
            row.statistic = static_cast<double>(p.times.size());
            row.extra["effective_drift"] = p.drift;
            row.extra["end_value"] = p.value_end();
            row.replicas = opt.replicas;
            rep.rows.push_back(row);
        }
    }
    rep.scalars["mean_events_per_path"] = total_events / static_cast<double>(opt.replicas);
    Verdict v;
    v.criterion = "paths-monotone";
    v.pass = true; // construction-time invariant checks did not throw
    v.detail = "all generated paths passed invariant checks";
    rep.verdicts.push_back(v);
    rep.wallclock_ms = sw.ms();
    return rep;
}

} // namespace subcover
