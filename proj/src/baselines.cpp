#include "spiky/baselines.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace spiky {

namespace {

// shared tail: build layers from per-node depths and the induced/burn edges
SampleResult assemble(const Graph& g, const std::vector<NodeId>& order,
                      const std::unordered_map<NodeId, std::size_t>& depth,
                      const std::vector<std::vector<EdgeRecord>>& edges_by_depth,
                      const std::vector<EdgeRecord>& graph_edges) {
    SampleResult res;
    res.layer_of = depth;
    std::size_t max_depth = 0;
    for (auto& [v, d] : depth) max_depth = std::max(max_depth, d);
    res.layers.assign(max_depth + 1, {});
    for (NodeId v : order) res.layers[depth.at(v)].push_back(v);
    for (auto& layer : res.layers) std::sort(layer.begin(), layer.end());
    res.edges_sampled = edges_by_depth;
    res.edges_in.assign(edges_by_depth.size(), {});

    NodeSet nodes(order);
    res.sampled_graph = build_subgraph(g, nodes, graph_edges, &res.graph_to_source);
    return res;
}

}  // namespace

SampleResult metropolis_hastings_rw(const Graph& g, NodeId start,
                                    std::size_t target_nodes, std::uint64_t seed) {
    if (!g.has_node(start)) throw std::invalid_argument("walk start outside graph");
    if (target_nodes == 0) throw std::invalid_argument("target_nodes must be positive");

    Rng rng(seed);
    std::uniform_real_distribution<double> u01(0, 1);
    const std::uint64_t step_cap = 1000 * static_cast<std::uint64_t>(target_nodes);

    std::vector<NodeId> order{start};
    std::unordered_map<NodeId, std::size_t> depth{{start, 0}};
    std::vector<std::vector<EdgeRecord>> moves(1);
    NodeId cur = start;
    std::uint64_t proposals = 0;
    bool cap_hit = false, stuck = false;

    while (depth.size() < target_nodes) {
        auto nbrs = g.neighbor_ids(cur);
        if (nbrs.empty()) {
            stuck = true;
            break;
        }
        if (proposals == step_cap) {
            cap_hit = true;
            break;
        }
        ++proposals;
        NodeId prop = nbrs[std::uniform_int_distribution<std::size_t>(0, nbrs.size() - 1)(rng)];
        double ratio = static_cast<double>(g.neighbor_count(cur)) /
                       static_cast<double>(g.neighbor_count(prop));
        if (ratio < 1 && u01(rng) >= ratio) continue;
        if (!depth.count(prop)) {
            depth[prop] = order.size();
            order.push_back(prop);
            moves.emplace_back();
            moves[depth[prop] - 1].push_back({cur, prop, g.edge_weight(cur, prop)});
        }
        cur = prop;
    }
    // induced subgraph over the visited set
    NodeSet visited(order);
    std::vector<EdgeRecord> induced;
    for (NodeId v : visited.sorted())
        for (auto [w, wt] : g.neighbors(v))
            if (v < w && visited.contains(w)) induced.push_back({v, w, wt});

    SampleResult res = assemble(g, order, depth, moves, induced);
    res.request_count = proposals;
    res.step_cap_hit = cap_hit;
    res.frontier_exhausted = stuck;
    return res;
}

std::size_t forest_fire_spread_count(double forward_prob, Rng& rng) {
    if (!(forward_prob >= 0 && forward_prob < 1))
        throw std::invalid_argument("forward probability must be in [0, 1)");
    if (forward_prob == 0) return 0;
    return std::geometric_distribution<std::size_t>(1 - forward_prob)(rng);
}

SampleResult forest_fire(const Graph& g, const NodeSet& seeds, double forward_prob,
                         std::size_t target_nodes, std::uint64_t seed) {
    if (seeds.empty()) throw std::invalid_argument("forest_fire: no seeds");
    if (target_nodes == 0) throw std::invalid_argument("target_nodes must be positive");
    if (!(forward_prob >= 0 && forward_prob < 1))
        throw std::invalid_argument("forward probability must be in [0, 1)");
    for (NodeId s : seeds)
        if (!g.has_node(s)) throw std::invalid_argument("seed outside graph");

    Rng rng(seed);
    std::vector<NodeId> order;
    std::unordered_map<NodeId, std::size_t> depth;
    std::vector<std::vector<EdgeRecord>> tree_edges;
    std::vector<EdgeRecord> all_edges;
    std::queue<NodeId> burning;
    std::uint64_t requests = 0;
    bool exhausted = false;

    auto burn = [&](NodeId v, std::size_t d) {
        depth[v] = d;
        order.push_back(v);
        burning.push(v);
    };
    for (NodeId s : seeds.sorted()) {
        if (order.size() == target_nodes) break;
        burn(s, 0);
    }

    while (order.size() < target_nodes) {
        if (burning.empty()) {
            // dead fire: restart at a uniform unburned node
            if (order.size() == g.node_count()) {
                exhausted = true;
                break;
            }
            std::uniform_int_distribution<NodeId> uni(0, static_cast<NodeId>(g.node_count() - 1));
            NodeId v;
            do {
                v = uni(rng);
            } while (depth.count(v));
            burn(v, 0);
            continue;
        }
        NodeId u = burning.front();
        burning.pop();
        ++requests;
        std::size_t x = forest_fire_spread_count(forward_prob, rng);
        if (x == 0) continue;
        std::vector<NodeId> cands;
        for (NodeId w : g.neighbor_ids(u))
            if (!depth.count(w)) cands.push_back(w);
        // uniform choice of min(x, available) spread targets
        std::size_t take = std::min(x, cands.size());
        for (std::size_t i = 0; i < take && order.size() < target_nodes; ++i) {
            std::size_t j =
                std::uniform_int_distribution<std::size_t>(i, cands.size() - 1)(rng);
            std::swap(cands[i], cands[j]);
            NodeId w = cands[i];
            std::size_t d = depth[u] + 1;
            burn(w, d);
            EdgeRecord e{u, w, g.edge_weight(u, w)};
            if (tree_edges.size() < d) tree_edges.resize(d);
            tree_edges[d - 1].push_back(e);
            all_edges.push_back(e);
        }
    }

    SampleResult res = assemble(g, order, depth, tree_edges, all_edges);
    res.request_count = requests;
    res.frontier_exhausted = exhausted;
    return res;
}

}  // namespace spiky
