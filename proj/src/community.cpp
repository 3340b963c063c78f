#include "spiky/community.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include "spiky/errors.hpp"
#include "spiky/rng.hpp"

namespace spiky {

std::uint32_t Partition::community_count() const {
    if (assignment.empty()) return 0;
    return *std::max_element(assignment.begin(), assignment.end()) + 1;
}

double modularity(const Graph& g, const std::vector<std::uint32_t>& assignment) {
    if (assignment.size() != g.node_count())
        throw std::invalid_argument("modularity: assignment size mismatch");
    if (g.edge_count() == 0) throw NumericError("modularity undefined on edgeless graph");

    std::uint32_t ncomm = *std::max_element(assignment.begin(), assignment.end()) + 1;
    std::vector<double> k_c(ncomm, 0.0);
    double two_w = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        double d = g.degree(v);
        k_c[assignment[v]] += d;
        two_w += d;
    }
    double intra = 0;
    for (const EdgeRecord& e : g.edges())
        if (assignment[e.source] == assignment[e.target]) intra += e.weight;
    double q = intra / (two_w / 2);
    for (double k : k_c) q -= (k / two_w) * (k / two_w);
    return q;
}

namespace {

// aggregated multigraph: parallel edges merged, intra-community weight kept
// as self-loops (a self-loop of weight w adds 2w to the degree)
struct LevelGraph {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
    std::vector<double> self_loop;
    std::vector<double> wdeg;
    double two_w = 0;

    std::size_t size() const { return adj.size(); }
};

LevelGraph from_graph(const Graph& g) {
    LevelGraph lg;
    std::size_t n = g.node_count();
    lg.adj.resize(n);
    lg.self_loop.assign(n, 0.0);
    lg.wdeg.assign(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
        auto ids = g.neighbor_ids(v);
        auto wts = g.neighbor_weights(v);
        lg.adj[v].reserve(ids.size());
        for (std::size_t i = 0; i < ids.size(); ++i)
            lg.adj[v].emplace_back(ids[i], wts[i]);
        lg.wdeg[v] = g.degree(v);
        lg.two_w += lg.wdeg[v];
    }
    return lg;
}

// one complete phase of local moves; comm must come in as the identity
bool local_move(const LevelGraph& lg, std::vector<std::uint32_t>& comm, Rng rng) {
    std::size_t n = lg.size();
    std::vector<double> tot(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) tot[comm[v]] += lg.wdeg[v];

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    bool any_move = false;
    for (int sweep = 0; sweep < 1000; ++sweep) {
        bool moved = false;
        for (std::uint32_t v : order) {
            std::uint32_t c_old = comm[v];
            tot[c_old] -= lg.wdeg[v];
            // weight from v into each adjacent community (self-loops excluded:
            // they move with v and cancel in the comparison)
            std::map<std::uint32_t, double> k_in;
            k_in[c_old];  // staying is always a candidate
            for (auto& [w, wt] : lg.adj[v]) k_in[comm[w]] += wt;
            std::uint32_t best = c_old;
            double best_gain = -1e300;
            for (auto& [c, kin] : k_in) {
                double gain = kin - lg.wdeg[v] * tot[c] / lg.two_w;
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best = c;
                }
            }
            tot[best] += lg.wdeg[v];
            if (best != c_old) {
                comm[v] = best;
                moved = true;
                any_move = true;
            }
        }
        if (!moved) break;
    }
    return any_move;
}

// renumber to contiguous ids by first appearance over node order
std::uint32_t renumber(std::vector<std::uint32_t>& comm) {
    std::map<std::uint32_t, std::uint32_t> remap;
    for (std::uint32_t& c : comm) {
        auto [it, fresh] = remap.try_emplace(c, static_cast<std::uint32_t>(remap.size()));
        c = it->second;
    }
    return static_cast<std::uint32_t>(remap.size());
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::uint32_t>& comm,
                     std::uint32_t ncomm) {
    LevelGraph out;
    out.adj.resize(ncomm);
    out.self_loop.assign(ncomm, 0.0);
    out.wdeg.assign(ncomm, 0.0);
    out.two_w = lg.two_w;
    std::vector<std::map<std::uint32_t, double>> acc(ncomm);
    for (std::size_t v = 0; v < lg.size(); ++v) {
        std::uint32_t cv = comm[v];
        out.self_loop[cv] += lg.self_loop[v];
        for (auto& [w, wt] : lg.adj[v]) {
            std::uint32_t cw = comm[w];
            if (cv == cw)
                out.self_loop[cv] += wt / 2;  // each intra edge seen twice
            else
                acc[cv][cw] += wt;
        }
    }
    for (std::uint32_t c = 0; c < ncomm; ++c) {
        out.adj[c].assign(acc[c].begin(), acc[c].end());
        double d = 2 * out.self_loop[c];
        for (auto& [w, wt] : out.adj[c]) d += wt;
        out.wdeg[c] = d;
    }
    return out;
}

// modularity of the level graph under `comm`
double level_q(const LevelGraph& lg, const std::vector<std::uint32_t>& comm,
               std::uint32_t ncomm) {
    std::vector<double> in_c(ncomm, 0.0), k_c(ncomm, 0.0);
    for (std::size_t v = 0; v < lg.size(); ++v) {
        in_c[comm[v]] += lg.self_loop[v];
        k_c[comm[v]] += lg.wdeg[v];
        for (auto& [w, wt] : lg.adj[v])
            if (comm[w] == comm[v]) in_c[comm[v]] += wt / 2;
    }
    double q = 0;
    for (std::uint32_t c = 0; c < ncomm; ++c)
        q += 2 * in_c[c] / lg.two_w - (k_c[c] / lg.two_w) * (k_c[c] / lg.two_w);
    return q;
}

}  // namespace

Partition louvain(const Graph& g, std::uint64_t seed) {
    if (g.edge_count() == 0) throw NumericError("louvain undefined on edgeless graph");

    std::size_t n = g.node_count();
    Partition part;
    part.assignment.resize(n);
    std::iota(part.assignment.begin(), part.assignment.end(), 0);

    LevelGraph lg = from_graph(g);
    for (std::uint64_t level = 0;; ++level) {
        std::vector<std::uint32_t> comm(lg.size());
        std::iota(comm.begin(), comm.end(), 0);
        bool moved = local_move(lg, comm, Rng(derive_seed(seed, level)));
        std::uint32_t ncomm = renumber(comm);
        for (std::uint32_t& a : part.assignment) a = comm[a];
        if (!moved || ncomm == lg.size()) {
            part.modularity = level_q(lg, comm, ncomm);
            break;
        }
        lg = aggregate(lg, comm, ncomm);
    }
    renumber(part.assignment);
    return part;
}

}  // namespace spiky
