#include "spiky/generators.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "spiky/rng.hpp"

namespace spiky {

Graph erdos_renyi(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("erdos_renyi: n must be positive");
    std::size_t max_edges = n * (n - 1) / 2;
    if (m > max_edges) throw std::invalid_argument("erdos_renyi: too many edges requested");

    Rng rng(seed);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(m * 2);
    GraphBuilder b(n);
    while (seen.size() < m) {
        NodeId u = pick(rng), v = pick(rng);
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
        if (seen.insert(key).second) b.add_edge(u, v);
    }
    return b.build();
}

Graph barabasi_albert(std::size_t n, std::size_t m_attach, std::uint64_t seed) {
    if (m_attach == 0) throw std::invalid_argument("barabasi_albert: m_attach must be positive");
    if (n < m_attach + 1)
        throw std::invalid_argument("barabasi_albert: need at least m_attach+1 nodes");

    Rng rng(seed);
    GraphBuilder b(n);
    std::size_t m0 = m_attach + 1;
    // stub list: node v appears once per incident edge, so uniform picks are
    // degree-proportional
    std::vector<NodeId> stubs;
    stubs.reserve(2 * (m0 * (m0 - 1) / 2 + (n - m0) * m_attach));
    for (NodeId u = 0; u < m0; ++u)
        for (NodeId v = u + 1; v < m0; ++v) {
            b.add_edge(u, v);
            stubs.push_back(u);
            stubs.push_back(v);
        }
    std::set<NodeId> targets;
    for (NodeId v = static_cast<NodeId>(m0); v < n; ++v) {
        targets.clear();
        std::uniform_int_distribution<std::size_t> pick(0, stubs.size() - 1);
        while (targets.size() < m_attach) targets.insert(stubs[pick(rng)]);
        for (NodeId t : targets) {
            b.add_edge(v, t);
            stubs.push_back(v);
            stubs.push_back(t);
        }
    }
    return b.build();
}

namespace {

// emits each cell of a rows x cols grid independently with probability p by
// geometric skipping; calls emit(r, c)
template <typename Emit>
void bernoulli_grid(std::size_t rows, std::size_t cols, double p, Rng& rng, Emit emit) {
    if (p <= 0 || rows == 0 || cols == 0) return;
    std::size_t r = 0, c = 0;
    auto advance = [&](std::size_t by) {
        c += by;
        r += c / cols;
        c %= cols;
    };
    while (r < rows) {
        if (p < 1) {
            double u = std::uniform_real_distribution<double>(0, 1)(rng);
            advance(static_cast<std::size_t>(std::log1p(-u) / std::log1p(-p)));
            if (r >= rows) break;
        }
        emit(r, c);
        advance(1);
    }
}

}  // namespace

Graph stochastic_block_model(const std::vector<std::size_t>& sizes, double p_in,
                             double p_out, std::uint64_t seed) {
    if (sizes.empty()) throw std::invalid_argument("stochastic_block_model: no blocks");
    for (std::size_t s : sizes)
        if (s == 0) throw std::invalid_argument("stochastic_block_model: empty block");
    if (!(p_in >= 0 && p_in <= 1 && p_out >= 0 && p_out <= 1 && p_out <= p_in))
        throw std::invalid_argument("stochastic_block_model: need 0 <= p_out <= p_in <= 1");

    std::vector<std::size_t> offset(sizes.size() + 1, 0);
    std::partial_sum(sizes.begin(), sizes.end(), offset.begin() + 1);

    Rng rng(seed);
    GraphBuilder b(offset.back());
    for (std::size_t a = 0; a < sizes.size(); ++a) {
        // within block: upper triangle as a ragged grid, row i has
        // sizes[a]-1-i cells starting at column i+1
        if (sizes[a] > 1) {
            // flatten to grid of (sizes[a]-1) rows where row i covers pairs
            // (i, i+1..s-1); emit via per-row widths
            std::size_t s = sizes[a];
            std::size_t r = 0, c = 0;  // c counts within row r (0-based -> pair (r, r+1+c))
            auto row_width = [&](std::size_t row) { return s - 1 - row; };
            auto advance = [&](std::size_t by) {
                c += by;
                while (r < s - 1 && c >= row_width(r)) {
                    c -= row_width(r);
                    ++r;
                }
            };
            while (r < s - 1) {
                if (p_in <= 0) break;
                if (p_in < 1) {
                    double u = std::uniform_real_distribution<double>(0, 1)(rng);
                    advance(static_cast<std::size_t>(std::log1p(-u) / std::log1p(-p_in)));
                    if (r >= s - 1) break;
                }
                b.add_edge(static_cast<NodeId>(offset[a] + r),
                           static_cast<NodeId>(offset[a] + r + 1 + c));
                advance(1);
            }
        }
        for (std::size_t bb = a + 1; bb < sizes.size(); ++bb)
            bernoulli_grid(sizes[a], sizes[bb], p_out, rng, [&](std::size_t r, std::size_t c) {
                b.add_edge(static_cast<NodeId>(offset[a] + r),
                           static_cast<NodeId>(offset[bb] + c));
            });
    }
    return b.build();
}

}  // namespace spiky
