#pragma once

#include <cstdint>

#include "spiky/graph.hpp"
#include "spiky/rng.hpp"
#include "spiky/sampler.hpp"

namespace spiky {

// Metropolis-Hastings random walk targeting the uniform node distribution:
// from u propose a uniform neighbor v, accept with min(1, deg(u)/deg(v))
// (unweighted degrees).  Stops after target_nodes distinct visits or
// 1000 * target_nodes proposals (step_cap_hit).  request_count counts
// proposals; layers record nodes in discovery order; the sampled graph is
// the subgraph induced on the visited set.
SampleResult metropolis_hastings_rw(const Graph& g, NodeId start,
                                    std::size_t target_nodes, std::uint64_t seed);

// Forest fire: burning nodes ignite x ~ Geometric(1 - forward_prob) of their
// unburned neighbors (mean forward_prob/(1-forward_prob)); a dead fire
// restarts at a uniform unburned node.  Layers group nodes by burn-tree
// depth; the sampled graph contains the burn-tree edges only.
SampleResult forest_fire(const Graph& g, const NodeSet& seeds, double forward_prob,
                         std::size_t target_nodes, std::uint64_t seed);

// single spread draw, exposed so the distribution itself is testable
std::size_t forest_fire_spread_count(double forward_prob, Rng& rng);

}  // namespace spiky
