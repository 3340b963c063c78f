#pragma once

#include <cstdint>
#include <vector>

#include "spiky/graph.hpp"

namespace spiky {

// Uniform simple graph with exactly m edges (G(n,m) model).
Graph erdos_renyi(std::size_t n, std::size_t m, std::uint64_t seed);

// Preferential attachment: clique on m_attach+1 nodes, then each arriving
// node attaches to m_attach distinct targets drawn proportionally to degree.
Graph barabasi_albert(std::size_t n, std::size_t m_attach, std::uint64_t seed);

// Planted partition: within-block pairs with p_in, cross-block with p_out.
Graph stochastic_block_model(const std::vector<std::size_t>& sizes, double p_in,
                             double p_out, std::uint64_t seed);

}  // namespace spiky
