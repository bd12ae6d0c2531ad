// Command-line front end: run experiments from a config file, describe a
// spec, list available experiments.

#include "subcover/orchestrate.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"subcover: covering numbers and potential functions of subordinators"};
    app.require_subcommand(1);

    std::string config_path, out_dir, spec_path;
    long long seed_override = -1;
    int workers_override = -1;

    auto* run_cmd = app.add_subcommand("run", "run an experiment from a config file");
    run_cmd->add_option("--config", config_path, "config file (key = value lines)")
        ->required();
    run_cmd->add_option("--seed", seed_override, "override the config seed");
    run_cmd->add_option("--workers", workers_override, "override the worker count");
    run_cmd->add_option("--out", out_dir, "override the output directory");

    auto* describe_cmd = app.add_subcommand("describe", "describe a subordinator spec file");
    describe_cmd->add_option("spec", spec_path, "spec file (key = value lines)")->required();

    app.add_subcommand("list-experiments", "list available experiments");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            subcover::RunConfig cfg = subcover::read_config_file(config_path);
            if (seed_override >= 0)
                cfg.opt.seed = static_cast<uint64_t>(seed_override);
            if (workers_override >= 1)
                cfg.opt.workers = workers_override;
            if (!out_dir.empty())
                cfg.out_dir = out_dir;
            const subcover::RunResult res = subcover::run(cfg);
            std::cout << res.report.summary_text();
            std::cout << "artifacts: " << res.out_dir << "/report.json, tables/, summary.txt\n";
            return res.exit_code;
        }
        if (describe_cmd->parsed()) {
            std::cout << subcover::describe(subcover::read_spec_file(spec_path));
            return 0;
        }
        for (const auto& e : subcover::list_experiments())
            std::cout << e << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
