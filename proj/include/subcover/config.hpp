#ifndef SUBCOVER_CONFIG_HPP
#define SUBCOVER_CONFIG_HPP

#include "subcover/model.hpp"
#include "subcover/potential.hpp"
#include "subcover/verify.hpp"

#include <map>
#include <string>

namespace subcover {

// Delta levels come in three forms: an explicit decreasing list, a
// log-spaced grid, or a geometric potential grid U(delta_j) = r^j solved at
// run time (it needs the spec).
struct DeltaSpec {
    enum class Kind { explicit_list, log_spaced, geometric };
    Kind kind = Kind::explicit_list;
    std::vector<double> list;
    double log_min = 0.0, log_max = 0.0;
    int per_decade = 1;
    double grid_r = 0.5;
    int grid_j_max = 4;
};

struct RunConfig {
    SubordinatorSpec spec;
    std::string spec_source = "inline";
    std::string experiment;
    ExperimentOptions opt;
    DeltaSpec delta_spec;
    PotentialMethod u_method = PotentialMethod::asymptotic;
    bool u_method_auto = true;
    std::string out_dir = "runs/out";
};

// Flat key = value lines, '#' comments, one nesting level through dotted
// keys (spec.*, tol.*).  Unknown keys are rejected with a diagnostic that
// names the key.
std::map<std::string, std::string> read_kv_file(const std::string& path);

SubordinatorSpec parse_spec_kv(const std::map<std::string, std::string>& kv);
SubordinatorSpec read_spec_file(const std::string& path);

RunConfig parse_config_kv(const std::map<std::string, std::string>& kv,
                          const std::string& base_dir = "");
RunConfig read_config_file(const std::string& path);

} // namespace subcover

#endif
