#include "spiky/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "spiky/errors.hpp"

namespace spiky {

std::vector<NodeId> NodeSet::sorted() const {
    std::vector<NodeId> out(set_.begin(), set_.end());
    std::sort(out.begin(), out.end());
    return out;
}

void Graph::check_node(NodeId v) const {
    if (!has_node(v))
        throw std::invalid_argument("node id " + std::to_string(v) + " out of range");
}

double Graph::degree(NodeId v) const {
    check_node(v);
    double sum = 0;
    for (std::size_t i = offsets_[v]; i < offsets_[v + 1]; ++i) sum += nbr_wts_[i];
    return sum;
}

std::size_t Graph::neighbor_count(NodeId v) const {
    check_node(v);
    return offsets_[v + 1] - offsets_[v];
}

std::span<const NodeId> Graph::neighbor_ids(NodeId v) const {
    check_node(v);
    return {nbr_ids_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::span<const double> Graph::neighbor_weights(NodeId v) const {
    check_node(v);
    return {nbr_wts_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::vector<std::pair<NodeId, double>> Graph::neighbors(NodeId v) const {
    check_node(v);
    std::vector<std::pair<NodeId, double>> out;
    out.reserve(neighbor_count(v));
    for (std::size_t i = offsets_[v]; i < offsets_[v + 1]; ++i)
        out.emplace_back(nbr_ids_[i], nbr_wts_[i]);
    return out;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    auto ids = neighbor_ids(u);
    check_node(v);
    return std::binary_search(ids.begin(), ids.end(), v);
}

double Graph::edge_weight(NodeId u, NodeId v) const {
    auto ids = neighbor_ids(u);
    check_node(v);
    auto it = std::lower_bound(ids.begin(), ids.end(), v);
    if (it == ids.end() || *it != v) return 0.0;
    return nbr_wts_[offsets_[u] + static_cast<std::size_t>(it - ids.begin())];
}

std::string Graph::label(NodeId v) const {
    check_node(v);
    if (labels_.empty()) return std::to_string(v);
    return labels_[v];
}

std::optional<double> Graph::node_score(NodeId v) const {
    check_node(v);
    if (scores_.empty()) return std::nullopt;
    return scores_[v];
}

DegreeHistogram Graph::degree_histogram() const {
    DegreeHistogram h;
    for (NodeId v = 0; v < node_count(); ++v) ++h[neighbor_count(v)];
    return h;
}

DegreeHistogram Graph::degree_histogram(const NodeSet& restrict_to) const {
    DegreeHistogram h;
    for (NodeId v : restrict_to) ++h[neighbor_count(v)];
    return h;
}

std::vector<EdgeRecord> Graph::edges() const {
    std::vector<EdgeRecord> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < node_count(); ++u)
        for (std::size_t i = offsets_[u]; i < offsets_[u + 1]; ++i)
            if (u < nbr_ids_[i]) out.push_back({u, nbr_ids_[i], nbr_wts_[i]});
    return out;
}

NodeId GraphBuilder::add_node() {
    return static_cast<NodeId>(node_count_++);
}

void GraphBuilder::require_node_count(std::size_t n) {
    node_count_ = std::max(node_count_, n);
}

void GraphBuilder::add_edge(NodeId u, NodeId v, double weight) {
    if (!(weight > 0))
        throw std::invalid_argument("edge weight must be positive");
    if (u == v) {
        ++self_loops_;
        require_node_count(static_cast<std::size_t>(u) + 1);
        return;
    }
    if (u > v) std::swap(u, v);
    require_node_count(static_cast<std::size_t>(v) + 1);
    std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
    auto [it, fresh] = edges_.try_emplace(key, weight);
    if (!fresh) {
        it->second += weight;
        ++duplicates_;
    }
}

void GraphBuilder::set_label(NodeId v, std::string label) {
    require_node_count(static_cast<std::size_t>(v) + 1);
    labels_[v] = std::move(label);
}

void GraphBuilder::set_score(NodeId v, double score) {
    require_node_count(static_cast<std::size_t>(v) + 1);
    scores_[v] = score;
}

Graph GraphBuilder::build() {
    Graph g;
    std::size_t n = node_count_;
    std::vector<std::size_t> deg(n, 0);
    for (const auto& [key, w] : edges_) {
        ++deg[key >> 32];
        ++deg[key & 0xffffffffu];
    }
    g.offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
    g.nbr_ids_.resize(g.offsets_[n]);
    g.nbr_wts_.resize(g.offsets_[n]);
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    // edges_ iterates in (u,v) sorted order, so each node's list comes out
    // already sorted: u's slots fill with ascending v, v's with ascending u.
    for (const auto& [key, w] : edges_) {
        auto u = static_cast<NodeId>(key >> 32);
        auto v = static_cast<NodeId>(key & 0xffffffffu);
        g.nbr_ids_[cursor[u]] = v;
        g.nbr_wts_[cursor[u]++] = w;
        g.nbr_ids_[cursor[v]] = u;
        g.nbr_wts_[cursor[v]++] = w;
    }
    g.edge_count_ = edges_.size();
    if (!labels_.empty()) {
        g.labels_.resize(n);
        for (NodeId v = 0; v < n; ++v) g.labels_[v] = std::to_string(v);
        for (const auto& [v, s] : labels_) g.labels_[v] = s;
    }
    if (!scores_.empty()) {
        g.scores_.assign(n, 0.0);
        for (const auto& [v, s] : scores_) g.scores_[v] = s;
    }
    return g;
}

Graph build_subgraph(const Graph& g, const NodeSet& nodes,
                     const std::vector<EdgeRecord>& edges,
                     std::vector<NodeId>* new_to_old) {
    std::vector<NodeId> order = nodes.sorted();
    std::map<NodeId, NodeId> old_to_new;
    for (NodeId i = 0; i < order.size(); ++i) old_to_new[order[i]] = i;

    GraphBuilder b(order.size());
    for (const EdgeRecord& e : edges) {
        auto s = old_to_new.find(e.source);
        auto t = old_to_new.find(e.target);
        if (s == old_to_new.end() || t == old_to_new.end())
            throw std::invalid_argument("subgraph edge endpoint not in node set");
        b.add_edge(s->second, t->second, e.weight);
    }
    if (b.duplicates_merged() > 0)
        throw std::invalid_argument("duplicate edge passed to build_subgraph");
    for (NodeId i = 0; i < order.size(); ++i) b.set_label(i, g.label(order[i]));
    if (g.has_scores())
        for (NodeId i = 0; i < order.size(); ++i) b.set_score(i, *g.node_score(order[i]));
    Graph sub = b.build();
    if (new_to_old) *new_to_old = std::move(order);
    return sub;
}

Graph largest_connected_component(const Graph& g, std::vector<NodeId>* new_to_old) {
    std::size_t n = g.node_count();
    std::vector<std::uint32_t> comp(n, UINT32_MAX);
    std::uint32_t ncomp = 0;
    std::vector<std::size_t> comp_size;
    for (NodeId s = 0; s < n; ++s) {
        if (comp[s] != UINT32_MAX) continue;
        std::size_t size = 0;
        std::queue<NodeId> q;
        q.push(s);
        comp[s] = ncomp;
        while (!q.empty()) {
            NodeId v = q.front();
            q.pop();
            ++size;
            for (NodeId w : g.neighbor_ids(v)) {
                if (comp[w] == UINT32_MAX) {
                    comp[w] = ncomp;
                    q.push(w);
                }
            }
        }
        comp_size.push_back(size);
        ++ncomp;
    }
    if (n == 0) return Graph{};
    // ties break toward the component discovered first, i.e. lowest node id
    std::uint32_t best = static_cast<std::uint32_t>(
        std::max_element(comp_size.begin(), comp_size.end()) - comp_size.begin());

    NodeSet keep;
    for (NodeId v = 0; v < n; ++v)
        if (comp[v] == best) keep.insert(v);
    std::vector<EdgeRecord> edges;
    for (const EdgeRecord& e : g.edges())
        if (comp[e.source] == best && comp[e.target] == best) edges.push_back(e);
    return build_subgraph(g, keep, edges, new_to_old);
}

}  // namespace spiky
