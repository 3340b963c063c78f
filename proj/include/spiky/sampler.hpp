#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "spiky/graph.hpp"
#include "spiky/rng.hpp"

namespace spiky {

// f(i): feature of the edge's source node (exponent alpha)
enum class SourceFeature { out_degree, node_score };
// h(j): feature of the candidate target node (exponent gamma).  in_degree is
// the number of frontier edges reaching j and costs nothing extra; out_degree
// needs the candidate's own neighborhood and therefore extra requests.
enum class TargetFeature { in_degree, out_degree, node_score };

struct NodeRatio {
    double ratio = 1.0;
};
struct FixedNodes {
    std::size_t count = 1;
};
// round(|L_k| * p/(1-p)) new nodes, the fireball growth rule
struct FireballBudget {
    double forward_prob = 0.5;
};
using BudgetRule = std::variant<NodeRatio, FixedNodes, FireballBudget>;

// expand exactly K layers: the K-hop ball when nothing else intervenes
struct MaxLayers {
    std::size_t count = 2;
};
// stop once the sampled set reaches this many nodes; the final layer is
// truncated highest-probability-first so the result has exactly
// min(count, reachable) nodes (seeds are never truncated)
struct TargetNodes {
    std::size_t count = 1;
};
using StopRule = std::variant<MaxLayers, TargetNodes>;

struct SamplerConfig {
    double alpha = 0.0;
    double beta = 1.0;
    double gamma = 0.0;
    SourceFeature source_feature = SourceFeature::out_degree;
    TargetFeature target_feature = TargetFeature::in_degree;
    BudgetRule budget = NodeRatio{1.0};
    StopRule stop = MaxLayers{2};
    std::optional<double> min_edge_weight;
    // fetch per-node info for every layer node even when no feature needs it
    // (doubles the request cost, mirroring crawlers that read profiles)
    bool fetch_node_info = false;
    std::uint64_t seed = 0;
};

// Access to the graph being explored.  Every fetch is one "request"; the
// counter stands in for API cost when crawling a remote network.
class GraphSource {
public:
    virtual ~GraphSource() = default;

    std::vector<EdgeRecord> fetch_neighbors(NodeId v) {
        ++requests_;
        return do_fetch_neighbors(v);
    }
    double fetch_node_score(NodeId v) {
        ++requests_;
        return do_fetch_node_score(v);
    }
    // external identity of a node; free (no request cost)
    virtual std::string node_label(NodeId v) const { return std::to_string(v); }
    std::uint64_t request_count() const { return requests_; }

protected:
    virtual std::vector<EdgeRecord> do_fetch_neighbors(NodeId v) = 0;
    virtual double do_fetch_node_score(NodeId v) = 0;

private:
    std::uint64_t requests_ = 0;
};

class InMemorySource final : public GraphSource {
public:
    explicit InMemorySource(const Graph& g) : g_(&g) {}
    const Graph& graph() const { return *g_; }
    std::string node_label(NodeId v) const override { return g_->label(v); }

protected:
    std::vector<EdgeRecord> do_fetch_neighbors(NodeId v) override;
    double do_fetch_node_score(NodeId v) override;

private:
    const Graph* g_;
};

// Everything edge_probabilities needs about the current layer.
struct LayerState {
    std::size_t layer_index = 0;
    std::vector<NodeId> layer_nodes;         // sorted
    const NodeSet* sampled_total = nullptr;  // nodes collected so far

    // d_i^out: weighted sum of i's frontier (outward) edges
    std::unordered_map<NodeId, double> out_degree;
    // d_j^in: number of frontier edges arriving at candidate j
    std::unordered_map<NodeId, double> in_degree;
    // populated only when the corresponding feature asks for them
    std::unordered_map<NodeId, double> source_score;
    std::unordered_map<NodeId, double> target_score;
    std::unordered_map<NodeId, double> target_out_degree;
};

// Splits a layer's fetched edges into those landing inside the sampled set
// (e_in) and those leaving it (e_out); edges under min_weight are dropped
// from both.
std::pair<std::vector<EdgeRecord>, std::vector<EdgeRecord>> filter_edges(
    const std::vector<EdgeRecord>& edges, const NodeSet& sampled,
    std::optional<double> min_weight = {});

// p(e) = f(src)^alpha * w^beta * h(tgt)^gamma, normalized over e_out.
// A zero feature with a negative exponent contributes zero mass; if every
// edge ends up with zero mass the distribution is degenerate -> NumericError.
std::vector<double> edge_probabilities(const std::vector<EdgeRecord>& e_out,
                                       const LayerState& state,
                                       const SamplerConfig& cfg);

// Number of distinct new nodes to admit this layer, clamped to
// [1, distinct targets].
std::size_t layer_budget(const std::vector<EdgeRecord>& e_out, const BudgetRule& rule,
                         std::size_t layer_size);

struct SampledEdges {
    NodeSet new_nodes;
    std::vector<EdgeRecord> chosen;  // in draw order
    std::vector<double> chosen_probs;
};

// Weighted sampling without replacement over e_out (exponential-key order),
// stopping once `budget` distinct targets are collected.  When the budget
// covers every distinct target, all edges are kept.
SampledEdges sample_edges(const std::vector<EdgeRecord>& e_out,
                          const std::vector<double>& probabilities,
                          std::size_t budget, Rng& rng);

struct SampleResult {
    Graph sampled_graph;                  // relabeled; labels preserve identity
    std::vector<NodeId> graph_to_source;  // sampled-graph id -> source id
    std::unordered_map<NodeId, std::size_t> layer_of;  // source id -> layer
    std::vector<std::vector<NodeId>> layers;           // each sorted
    std::vector<std::vector<EdgeRecord>> edges_in;     // per executed layer
    std::vector<std::vector<EdgeRecord>> edges_sampled;
    std::uint64_t request_count = 0;
    bool frontier_exhausted = false;
    bool step_cap_hit = false;  // used by the random-walk baseline

    NodeSet node_set() const;
    // deduplicated union of in-edges and sampled edges, in source ids
    std::vector<EdgeRecord> collected_edges() const;
};

using LayerCallback = std::function<void(const LayerState&, const std::vector<EdgeRecord>& e_out,
                                         const std::vector<double>& probabilities)>;

SampleResult spikyball(GraphSource& src, const NodeSet& seeds, const SamplerConfig& cfg);
SampleResult spikyball(GraphSource& src, const NodeSet& seeds, const SamplerConfig& cfg,
                       const LayerCallback& on_layer);

// named configurations; `weighted` switches beta from 0 to 1
SamplerConfig snowball_config(StopRule stop, std::uint64_t seed);
SamplerConfig uni_edge_config(BudgetRule budget, StopRule stop, std::uint64_t seed,
                              bool weighted = false);
SamplerConfig fireball_config(double forward_prob, StopRule stop, std::uint64_t seed,
                              bool weighted = false);
SamplerConfig hubball_config(double alpha, BudgetRule budget, StopRule stop,
                             std::uint64_t seed);
SamplerConfig coreball_config(double gamma, BudgetRule budget, StopRule stop,
                              std::uint64_t seed);
SamplerConfig expander_config(double gamma, BudgetRule budget, StopRule stop,
                              std::uint64_t seed);

}  // namespace spiky
