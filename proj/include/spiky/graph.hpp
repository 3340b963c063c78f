#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace spiky {

using NodeId = std::uint32_t;

struct EdgeRecord {
    NodeId source = 0;
    NodeId target = 0;
    double weight = 1.0;

    friend bool operator==(const EdgeRecord& a, const EdgeRecord& b) {
        return a.source == b.source && a.target == b.target && a.weight == b.weight;
    }
};

// Unordered node membership set with a deterministic sorted view.
class NodeSet {
public:
    NodeSet() = default;
    NodeSet(std::initializer_list<NodeId> ids) { insert_all(ids); }
    explicit NodeSet(const std::vector<NodeId>& ids) { insert_all(ids); }

    bool contains(NodeId v) const { return set_.count(v) != 0; }
    bool insert(NodeId v) { return set_.insert(v).second; }
    template <typename Range>
    void insert_all(const Range& ids) {
        for (NodeId v : ids) set_.insert(v);
    }
    std::size_t size() const { return set_.size(); }
    bool empty() const { return set_.empty(); }
    std::vector<NodeId> sorted() const;

    auto begin() const { return set_.begin(); }
    auto end() const { return set_.end(); }

private:
    std::unordered_set<NodeId> set_;
};

// degree value -> number of nodes with that degree
using DegreeHistogram = std::map<std::size_t, std::size_t>;

// Undirected weighted graph over contiguous node ids [0, n), stored as CSR
// with neighbor lists sorted by id.  Immutable once built.
class Graph {
public:
    Graph() = default;

    std::size_t node_count() const { return offsets_.size() - 1; }
    std::size_t edge_count() const { return edge_count_; }
    bool has_node(NodeId v) const { return v < node_count(); }

    // weighted degree: sum of incident edge weights
    double degree(NodeId v) const;
    // unweighted degree: number of neighbors
    std::size_t neighbor_count(NodeId v) const;

    std::span<const NodeId> neighbor_ids(NodeId v) const;
    std::span<const double> neighbor_weights(NodeId v) const;
    std::vector<std::pair<NodeId, double>> neighbors(NodeId v) const;

    bool has_edge(NodeId u, NodeId v) const;
    // 0 when the edge is absent
    double edge_weight(NodeId u, NodeId v) const;

    bool has_labels() const { return !labels_.empty(); }
    // original external label; defaults to the decimal id when none were set
    std::string label(NodeId v) const;

    bool has_scores() const { return !scores_.empty(); }
    std::optional<double> node_score(NodeId v) const;

    DegreeHistogram degree_histogram() const;
    DegreeHistogram degree_histogram(const NodeSet& restrict_to) const;

    // all undirected edges, lower endpoint first, sorted
    std::vector<EdgeRecord> edges() const;

private:
    friend class GraphBuilder;
    void check_node(NodeId v) const;

    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> nbr_ids_;
    std::vector<double> nbr_wts_;
    std::size_t edge_count_ = 0;
    std::vector<std::string> labels_;
    std::vector<double> scores_;
};

// Accumulates edges, then builds the CSR graph.  Duplicate undirected edges
// are merged by summing weights; self-loops are dropped (both counted).
class GraphBuilder {
public:
    explicit GraphBuilder(std::size_t node_count = 0) : node_count_(node_count) {}

    NodeId add_node();
    void require_node_count(std::size_t n);
    std::size_t node_count() const { return node_count_; }

    void add_edge(NodeId u, NodeId v, double weight = 1.0);
    void set_label(NodeId v, std::string label);
    void set_score(NodeId v, double score);

    std::size_t self_loops_dropped() const { return self_loops_; }
    std::size_t duplicates_merged() const { return duplicates_; }

    Graph build();

private:
    std::size_t node_count_ = 0;
    std::map<std::uint64_t, double> edges_;
    std::map<NodeId, std::string> labels_;
    std::map<NodeId, double> scores_;
    std::size_t self_loops_ = 0;
    std::size_t duplicates_ = 0;
};

// Induced relabeling: nodes become [0, |nodes|) in ascending order of their
// old ids; labels carry over so external identity is preserved.  `edges` must
// reference nodes from the set only and contain each undirected pair once.
// Optional out-param receives new-id -> old-id.
Graph build_subgraph(const Graph& g, const NodeSet& nodes,
                     const std::vector<EdgeRecord>& edges,
                     std::vector<NodeId>* new_to_old = nullptr);

Graph largest_connected_component(const Graph& g,
                                  std::vector<NodeId>* new_to_old = nullptr);

}  // namespace spiky
