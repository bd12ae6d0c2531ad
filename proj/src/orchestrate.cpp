#include "subcover/orchestrate.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace subcover {

namespace {

std::vector<double> resolve_deltas(const RunConfig& cfg) {
    if (cfg.delta_spec.kind != DeltaSpec::Kind::geometric)
        return cfg.opt.deltas;
    PotentialMethod m = cfg.u_method;
    if (cfg.u_method_auto) {
        if (cfg.spec.family == Family::drift_only ||
            (cfg.spec.family == Family::stable && cfg.spec.drift == 0.0))
            m = PotentialMethod::asymptotic;
        else if (cfg.spec.drift > 0.0)
            m = PotentialMethod::series;
        else
            m = PotentialMethod::monte_carlo;
    }
    const DeltaGrid grid = solve_delta_grid(cfg.spec, cfg.delta_spec.grid_r,
                                            cfg.delta_spec.grid_j_max, m,
                                            cfg.opt.u_replicas, cfg.opt.seed);
    if (grid.deltas.empty())
        throw std::invalid_argument("config key 'delta_grid': no levels could be solved");
    return grid.deltas;
}

ExperimentReport dispatch(const RunConfig& cfg, const ExperimentOptions& opt,
                          std::ostream* paths_out) {
    const std::string& e = cfg.experiment;
    if (e == "theorem1") return run_theorem1(cfg.spec, opt);
    if (e == "lemma4") return run_lemma4(cfg.spec, opt);
    if (e == "lemma5") return run_lemma5(cfg.spec, opt);
    if (e == "cor1") return run_cor1(cfg.spec, opt);
    if (e == "cor2") return run_cor2(cfg.spec, opt);
    if (e == "indices") return run_indices(cfg.spec, opt);
    if (e == "potential-table") return run_potential_table(cfg.spec, opt);
    if (e == "hausdorff") return run_hausdorff(cfg.spec, opt);
    if (e == "condition-2-4") return run_condition_2_4(cfg.spec, opt);
    if (e == "simulate-paths") return run_simulate_paths(cfg.spec, opt, paths_out);
    throw std::invalid_argument("config key 'experiment': unknown experiment '" + e + "'");
}

} // namespace

ExperimentReport run_in_memory(const RunConfig& cfg) {
    ExperimentOptions opt = cfg.opt;
    opt.deltas = resolve_deltas(cfg);
    return dispatch(cfg, opt, nullptr);
}

RunResult run(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    ExperimentOptions opt = cfg.opt;
    opt.deltas = resolve_deltas(cfg);

    const fs::path out(cfg.out_dir);
    fs::create_directories(out / "tables");

    RunResult res;
    res.out_dir = cfg.out_dir;
    if (cfg.experiment == "simulate-paths") {
        std::ofstream paths(out / "tables" / "paths.csv");
        res.report = dispatch(cfg, opt, &paths);
    } else {
        res.report = dispatch(cfg, opt, nullptr);
    }

    {
        std::ofstream js(out / "report.json");
        js << res.report.to_json(true).dump(2) << '\n';
    }
    {
        std::ofstream rows(out / "tables" / "rows.csv");
        rows << res.report.rows_csv();
    }
    if (!res.report.replica_records.empty()) {
        std::ofstream reps(out / "tables" / "replicas.csv");
        reps << res.report.replicas_csv();
    }
    {
        std::ofstream sum(out / "summary.txt");
        sum << res.report.summary_text();
    }
    res.exit_code = res.report.pass() ? 0 : 1;
    return res;
}

std::string describe(const SubordinatorSpec& spec) {
    std::ostringstream os;
    os << "spec: " << spec.summary() << "\n";
    const EligibilityReport rep = validate(spec);
    os << "parameters: " << (rep.params_ok ? "valid" : "INVALID") << "\n";
    for (const auto& m : rep.messages)
        os << "  - " << m << "\n";
    if (!rep.params_ok)
        return os.str();
    os << "activity: " << (rep.infinite_activity ? "infinite" : "finite") << "\n"
       << "covering-theorem eligible: " << (rep.eligible ? "yes" : "no") << "\n";

    os << "\nPhi on a reference grid:\n";
    for (double lam : {0.1, 1.0, 10.0, 100.0, 1000.0})
        os << "  Phi(" << lam << ") = " << eval_phi(spec, lam) << "\n";

    if (has_rv_index(spec)) {
        const double idx = rv_index(spec);
        os << "\nregular-variation index: " << idx << "\n";
        if (idx == 0.0 && spec.family == Family::gamma)
            os << "slowly varying L(lambda) = a ln(lambda) (asymptotically)\n";
    } else {
        os << "\nregular-variation index: not declared for this family\n";
    }

    os << "\nderived two-sided band for U(delta), "
       << potential_bound_lower() << "/Phi(1/delta) <= U <= e/Phi(1/delta):\n";
    for (double delta : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
        const double phi = eval_phi(spec, 1.0 / delta);
        os << "  delta=" << delta << ": [" << potential_bound_lower() / phi << ", "
           << potential_bound_upper() / phi << "]\n";
    }
    return os.str();
}

std::vector<std::string> list_experiments() {
    return {"theorem1",  "lemma4",          "lemma5",    "cor1",
            "cor2",      "indices",         "potential-table",
            "hausdorff", "condition-2-4",   "simulate-paths"};
}

} // namespace subcover
