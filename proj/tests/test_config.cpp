#include <doctest.h>

#include "subcover/config.hpp"
#include "subcover/orchestrate.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <stdexcept>

using namespace subcover;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("subcover-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

fs::path write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
    return p;
}

} // namespace

TEST_CASE("config parsing: full round trip") {
    TempDir tmp;
    const auto cfg_path = write_file(tmp.path / "run.cfg",
                                     "# comment\n"
                                     "experiment = theorem1\n"
                                     "t = 2.0\n"
                                     "deltas = 0.01, 0.1\n"
                                     "replicas = 250\n"
                                     "seed = 99\n"
                                     "workers = 3\n"
                                     "engine = events\n"
                                     "eps = 1e-5\n"
                                     "compensate = true\n"
                                     "tol.mean_abs_error = 0.2\n"
                                     "out = " + (tmp.path / "out").string() + "\n"
                                     "spec.family = stable\n"
                                     "spec.alpha = 0.5\n"
                                     "spec.drift = 0\n");
    const RunConfig cfg = read_config_file(cfg_path.string());
    CHECK(cfg.experiment == "theorem1");
    CHECK(cfg.opt.t == 2.0);
    REQUIRE(cfg.opt.deltas.size() == 2);
    CHECK(cfg.opt.deltas[0] == 0.1); // sorted decreasing
    CHECK(cfg.opt.deltas[1] == 0.01);
    CHECK(cfg.opt.replicas == 250);
    CHECK(cfg.opt.seed == 99);
    CHECK(cfg.opt.workers == 3);
    CHECK(cfg.opt.engine.eps == 1e-5);
    CHECK(cfg.opt.tol.at("mean_abs_error") == 0.2);
    CHECK(cfg.spec.family == Family::stable);
    CHECK(cfg.spec.alpha == 0.5);
}

TEST_CASE("config parsing: unknown keys are named in the diagnostic") {
    TempDir tmp;
    const auto p = write_file(tmp.path / "bad.cfg",
                              "experiment = theorem1\n"
                              "bogus_key = 1\n"
                              "spec.family = drift_only\nspec.drift = 1\n");
    CHECK_THROWS_WITH_AS(read_config_file(p.string()), doctest::Contains("bogus_key"),
                         std::invalid_argument);
}

TEST_CASE("config parsing: log-spaced and geometric delta forms") {
    TempDir tmp;
    const auto p1 = write_file(tmp.path / "log.cfg",
                               "experiment = lemma5\n"
                               "delta_log = 1e-4 1e-2 1\n"
                               "spec.family = drift_only\nspec.drift = 1\n");
    const RunConfig c1 = read_config_file(p1.string());
    REQUIRE(c1.opt.deltas.size() == 3);
    CHECK(c1.opt.deltas[0] == doctest::Approx(1e-2));
    CHECK(c1.opt.deltas[2] == doctest::Approx(1e-4));

    const auto p2 = write_file(tmp.path / "geom.cfg",
                               "experiment = theorem1\n"
                               "delta_grid = 0.5 3\n"
                               "replicas = 16\n"
                               "spec.family = drift_only\nspec.drift = 1\n");
    const RunConfig c2 = read_config_file(p2.string());
    const ExperimentReport rep = run_in_memory(c2);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.rows[0].delta == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(rep.rows[2].delta == doctest::Approx(0.125).epsilon(1e-3));
}

TEST_CASE("spec files parse every family") {
    TempDir tmp;
    const auto p = write_file(tmp.path / "spec.cfg",
                              "family = compound_poisson\n"
                              "rate = 2\n"
                              "jump = exponential\n"
                              "jump_param = 0.5\n"
                              "drift = 1\n");
    const SubordinatorSpec s = read_spec_file(p.string());
    CHECK(s.family == Family::compound_poisson);
    CHECK(s.cp_jump == JumpLaw::exponential);

    const auto p2 = write_file(tmp.path / "tg.cfg",
                               "family = truncated_general\n"
                               "tail_alpha = 0.5\n"
                               "trunc = 1e-3\n"
                               "drift = 1\n");
    const SubordinatorSpec s2 = read_spec_file(p2.string());
    CHECK(s2.family == Family::truncated_general);
    CHECK(eval_tail(s2, 1.0) == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-12));

    const auto bad = write_file(tmp.path / "bad.cfg", "family = nosuch\n");
    CHECK_THROWS_WITH_AS(read_spec_file(bad.string()), doctest::Contains("family"),
                         std::invalid_argument);
}

TEST_CASE("spec_file reference resolves relative to the config directory") {
    TempDir tmp;
    write_file(tmp.path / "spec.cfg", "family = drift_only\ndrift = 1\n");
    const auto p = write_file(tmp.path / "run.cfg",
                              "experiment = theorem1\n"
                              "deltas = 0.1\n"
                              "replicas = 8\n"
                              "spec_file = spec.cfg\n");
    const RunConfig cfg = read_config_file(p.string());
    CHECK(cfg.spec.family == Family::drift_only);
}

TEST_CASE("ineligible spec surfaces the hypothesis message through run_in_memory") {
    TempDir tmp;
    const auto p = write_file(tmp.path / "cp.cfg",
                              "experiment = theorem1\n"
                              "deltas = 0.1\n"
                              "spec.family = compound_poisson\n"
                              "spec.rate = 1\n"
                              "spec.jump_param = 1\n");
    const RunConfig cfg = read_config_file(p.string());
    CHECK_THROWS_WITH_AS(run_in_memory(cfg), doctest::Contains("compound Poisson"),
                         std::invalid_argument);
}

TEST_CASE("run() writes the full artifact set and reports exit status") {
    TempDir tmp;
    RunConfig cfg;
    cfg.spec = SubordinatorSpec::make_drift_only(1.0);
    cfg.experiment = "theorem1";
    cfg.opt.t = 1.0;
    cfg.opt.deltas = {0.1};
    cfg.opt.replicas = 32;
    cfg.opt.seed = 7;
    cfg.out_dir = (tmp.path / "run1").string();
    const RunResult res = run(cfg);
    CHECK(res.exit_code == 0);
    CHECK(fs::exists(tmp.path / "run1" / "report.json"));
    CHECK(fs::exists(tmp.path / "run1" / "summary.txt"));
    CHECK(fs::exists(tmp.path / "run1" / "tables" / "rows.csv"));

    std::ifstream in(tmp.path / "run1" / "report.json");
    nlohmann::json j;
    in >> j;
    CHECK(j["pass"] == true);
    CHECK(j["schema"] == "subcover-report-v1");
    CHECK(j["rows"][0]["statistic"] == 1.0);
    CHECK(j.contains("metadata"));
}

TEST_CASE("simulate-paths run writes the paths table") {
    TempDir tmp;
    RunConfig cfg;
    cfg.spec = SubordinatorSpec::make_compound_poisson_fixed(2.0, 1.0, 0.5);
    cfg.experiment = "simulate-paths";
    cfg.opt.t = 1.0;
    cfg.opt.replicas = 3;
    cfg.out_dir = (tmp.path / "paths").string();
    const RunResult res = run(cfg);
    CHECK(res.exit_code == 0);
    CHECK(fs::exists(tmp.path / "paths" / "tables" / "paths.csv"));
}

TEST_CASE("list_experiments names every runner") {
    const auto xs = list_experiments();
    CHECK(xs.size() == 10);
    for (const std::string& name :
         {"theorem1", "lemma4", "lemma5", "cor1", "cor2", "indices", "potential-table",
          "hausdorff", "condition-2-4", "simulate-paths"})
        CHECK(std::find(xs.begin(), xs.end(), name) != xs.end());
}

TEST_CASE("describe prints the index and band") {
    const std::string text = describe(SubordinatorSpec::make_stable(0.5));
    CHECK(text.find("index: 0.5") != std::string::npos);
    CHECK(text.find("eligible: yes") != std::string::npos);
    const std::string gtext = describe(SubordinatorSpec::make_gamma(1.0, 1.0));
    CHECK(gtext.find("slowly varying") != std::string::npos);
    const std::string bad = describe(SubordinatorSpec::make_stable(1.5));
    CHECK(bad.find("INVALID") != std::string::npos);
}
