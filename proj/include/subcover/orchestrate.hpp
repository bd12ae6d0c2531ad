#ifndef SUBCOVER_ORCHESTRATE_HPP
#define SUBCOVER_ORCHESTRATE_HPP

#include "subcover/config.hpp"
#include "subcover/verify.hpp"

#include <string>
#include <vector>

namespace subcover {

struct RunResult {
    ExperimentReport report;
    int exit_code = 0; // 0 all verdicts pass, 1 some verdict failed
    std::string out_dir;
};

// Resolves the delta grid, dispatches the named experiment, and writes
// report.json, tables/*.csv and summary.txt under cfg.out_dir.
RunResult run(const RunConfig& cfg);

// Runs the experiment without touching the filesystem (used by tests).
ExperimentReport run_in_memory(const RunConfig& cfg);

std::string describe(const SubordinatorSpec& spec);

std::vector<std::string> list_experiments();

} // namespace subcover

#endif
