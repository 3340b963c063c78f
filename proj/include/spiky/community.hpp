#pragma once

#include <cstdint>
#include <vector>

#include "spiky/graph.hpp"

namespace spiky {

struct Partition {
    // node id -> community id, ids contiguous from 0
    std::vector<std::uint32_t> assignment;
    double modularity = 0.0;

    std::uint32_t community_count() const;
};

// Newman modularity of an arbitrary assignment (weighted, resolution 1).
double modularity(const Graph& g, const std::vector<std::uint32_t>& assignment);

// Louvain method: seeded node-order shuffles make runs reproducible; ties in
// the gain comparison break toward the lowest community id.  The returned
// modularity is computed from the final aggregated level, which must agree
// with modularity(g, assignment) to machine precision.
Partition louvain(const Graph& g, std::uint64_t seed = 0);

}  // namespace spiky
