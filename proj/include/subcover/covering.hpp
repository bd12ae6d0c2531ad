#ifndef SUBCOVER_COVERING_HPP
#define SUBCOVER_COVERING_HPP

#include "subcover/model.hpp"
#include "subcover/rng.hpp"
#include "subcover/simulate.hpp"

#include <string>
#include <vector>

namespace subcover {

// Greedy covering count for one path/horizon.  The renewal count N follows
// the working definition {N >= k} = {T_k <= t}; the literal count adds the
// partial last interval (N + 1 when T_N < t) and equals the minimal number
// of delta-intervals covering the range.
struct CoveringCount {
    long long renewal_count = 0;
    long long literal_count = 0;
    std::vector<double> renewal_times;
    std::string method; // "path-events" | "path-skeleton" | "renewal"
    double horizon_t = 0.0;
    double delta = 0.0;

    double max_renewal_time() const {
        return renewal_times.empty() ? 0.0 : renewal_times.back();
    }
};

// Greedy recursion T_{n+1} = inf{s >= T_n : X_s - X_{T_n} > delta}; exact
// closed-form drift crossings on event lists, grid scan on skeletons.
CoveringCount count_covering_path(const SamplePath& path, double t, double delta);

// Renewal construction: i.i.d. first-passage draws summed until they exceed
// t.  Distributionally equal to the path-based count.
CoveringCount count_covering_renewal(const SubordinatorSpec& spec, double t,
                                     double delta, const Engine& engine,
                                     RngStream& rng);

// Literal covering counts on each piece of [0,t] cut at the split points,
// each piece restarted at its left endpoint; returns
// (global literal count) - (sum of piece literal counts), an integer in
// (-j, 0] for paths without ties.
long long splitting_defect(const SamplePath& path, double t,
                           const std::vector<double>& splits, double delta);

} // namespace subcover

#endif
