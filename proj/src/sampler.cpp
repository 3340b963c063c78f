#include "spiky/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "spiky/errors.hpp"

namespace spiky {

std::vector<EdgeRecord> InMemorySource::do_fetch_neighbors(NodeId v) {
    auto ids = g_->neighbor_ids(v);
    auto wts = g_->neighbor_weights(v);
    std::vector<EdgeRecord> out;
    out.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) out.push_back({v, ids[i], wts[i]});
    return out;
}

double InMemorySource::do_fetch_node_score(NodeId v) {
    auto s = g_->node_score(v);
    if (!s) throw std::invalid_argument("graph source provides no node scores");
    return *s;
}

NodeSet SampleResult::node_set() const {
    NodeSet out;
    for (const auto& layer : layers) out.insert_all(layer);
    return out;
}

namespace {

std::uint64_t edge_key(NodeId u, NodeId v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

}  // namespace

std::vector<EdgeRecord> SampleResult::collected_edges() const {
    std::map<std::uint64_t, double> acc;
    for (const auto& group : {edges_in, edges_sampled})
        for (const auto& layer : group)
            for (const EdgeRecord& e : layer) acc.try_emplace(edge_key(e.source, e.target), e.weight);
    std::vector<EdgeRecord> out;
    out.reserve(acc.size());
    for (const auto& [key, w] : acc)
        out.push_back({static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffu), w});
    return out;
}

std::pair<std::vector<EdgeRecord>, std::vector<EdgeRecord>> filter_edges(
    const std::vector<EdgeRecord>& edges, const NodeSet& sampled,
    std::optional<double> min_weight) {
    std::vector<EdgeRecord> e_in, e_out;
    for (const EdgeRecord& e : edges) {
        if (min_weight && e.weight < *min_weight) continue;
        (sampled.contains(e.target) ? e_in : e_out).push_back(e);
    }
    return {std::move(e_in), std::move(e_out)};
}

namespace {

// x^p with the sampling conventions: p == 0 always gives 1, a zero feature
// with any other exponent contributes zero mass
double feature_pow(double x, double p) {
    if (p == 0) return 1.0;
    if (x == 0) return 0.0;
    if (x < 0) throw NumericError("negative feature value in edge probability");
    return std::pow(x, p);
}

double lookup(const std::unordered_map<NodeId, double>& m, NodeId v, const char* what) {
    auto it = m.find(v);
    if (it == m.end())
        throw std::invalid_argument(std::string("layer state missing ") + what +
                                    " for node " + std::to_string(v));
    return it->second;
}

}  // namespace

std::vector<double> edge_probabilities(const std::vector<EdgeRecord>& e_out,
                                       const LayerState& state, const SamplerConfig& cfg) {
    if (e_out.empty()) throw std::invalid_argument("edge_probabilities: no edges");
    std::vector<double> mass(e_out.size());
    double total = 0;
    for (std::size_t i = 0; i < e_out.size(); ++i) {
        const EdgeRecord& e = e_out[i];
        double m = feature_pow(e.weight, cfg.beta);
        if (cfg.alpha != 0) {
            double f = cfg.source_feature == SourceFeature::out_degree
                           ? lookup(state.out_degree, e.source, "out degree")
                           : lookup(state.source_score, e.source, "score");
            m *= feature_pow(f, cfg.alpha);
        }
        if (cfg.gamma != 0) {
            double h = 0;
            switch (cfg.target_feature) {
                case TargetFeature::in_degree:
                    h = lookup(state.in_degree, e.target, "in degree");
                    break;
                case TargetFeature::out_degree:
                    h = lookup(state.target_out_degree, e.target, "out degree");
                    break;
                case TargetFeature::node_score:
                    h = lookup(state.target_score, e.target, "score");
                    break;
            }
            m *= feature_pow(h, cfg.gamma);
        }
        mass[i] = m;
        total += m;
    }
    if (!(total > 0)) throw NumericError("degenerate edge distribution: all masses zero");
    for (double& m : mass) m /= total;
    return mass;
}

std::size_t layer_budget(const std::vector<EdgeRecord>& e_out, const BudgetRule& rule,
                         std::size_t layer_size) {
    NodeSet targets;
    for (const EdgeRecord& e : e_out) targets.insert(e.target);
    std::size_t distinct = targets.size();
    if (distinct == 0) return 0;

    std::size_t want = 0;
    if (const auto* ratio = std::get_if<NodeRatio>(&rule)) {
        if (!(ratio->ratio > 0 && ratio->ratio <= 1))
            throw std::invalid_argument("node ratio must be in (0, 1]");
        want = static_cast<std::size_t>(std::ceil(ratio->ratio * static_cast<double>(distinct)));
    } else if (const auto* fixed = std::get_if<FixedNodes>(&rule)) {
        want = fixed->count;
    } else {
        const auto& fb = std::get<FireballBudget>(rule);
        if (!(fb.forward_prob > 0 && fb.forward_prob < 1))
            throw std::invalid_argument("fireball forward probability must be in (0, 1)");
        double growth = fb.forward_prob / (1 - fb.forward_prob);
        want = static_cast<std::size_t>(std::floor(layer_size * growth + 0.5));
    }
    return std::clamp<std::size_t>(want, 1, distinct);
}

SampledEdges sample_edges(const std::vector<EdgeRecord>& e_out,
                          const std::vector<double>& probabilities, std::size_t budget,
                          Rng& rng) {
    if (e_out.size() != probabilities.size())
        throw std::invalid_argument("sample_edges: size mismatch");
    if (budget == 0) throw std::invalid_argument("sample_edges: budget must be positive");

    SampledEdges out;
    NodeSet targets;
    for (const EdgeRecord& e : e_out) targets.insert(e.target);
    if (budget >= targets.size()) {
        out.new_nodes = std::move(targets);
        out.chosen = e_out;
        out.chosen_probs = probabilities;
        return out;
    }

    // exponential keys reproduce sequential draws without replacement; the
    // ascending-key prefix is consumed until the budget in distinct targets
    // is met (probability-zero edges can never be drawn)
    std::vector<std::pair<double, std::size_t>> keyed(e_out.size());
    std::exponential_distribution<double> exp1(1.0);
    for (std::size_t i = 0; i < e_out.size(); ++i) {
        double draw = exp1(rng);
        keyed[i] = {probabilities[i] > 0 ? draw / probabilities[i]
                                         : std::numeric_limits<double>::infinity(),
                    i};
    }
    std::sort(keyed.begin(), keyed.end());
    for (auto& [key, idx] : keyed) {
        if (std::isinf(key)) break;
        out.chosen.push_back(e_out[idx]);
        out.chosen_probs.push_back(probabilities[idx]);
        out.new_nodes.insert(e_out[idx].target);
        if (out.new_nodes.size() == budget) break;
    }
    return out;
}

namespace {

void validate_config(const SamplerConfig& cfg) {
    for (double x : {cfg.alpha, cfg.beta, cfg.gamma})
        if (!std::isfinite(x)) throw std::invalid_argument("exponent must be finite");
    if (const auto* r = std::get_if<NodeRatio>(&cfg.budget)) {
        if (!(r->ratio > 0 && r->ratio <= 1))
            throw std::invalid_argument("node ratio must be in (0, 1]");
    } else if (const auto* f = std::get_if<FixedNodes>(&cfg.budget)) {
        if (f->count == 0) throw std::invalid_argument("fixed node budget must be positive");
    } else if (const auto* fb = std::get_if<FireballBudget>(&cfg.budget)) {
        if (!(fb->forward_prob > 0 && fb->forward_prob < 1))
            throw std::invalid_argument("fireball forward probability must be in (0, 1)");
    }
    if (const auto* t = std::get_if<TargetNodes>(&cfg.stop))
        if (t->count == 0) throw std::invalid_argument("target node count must be positive");
    if (cfg.min_edge_weight && !(*cfg.min_edge_weight > 0))
        throw std::invalid_argument("min edge weight must be positive");
}

void add_edge_once(std::map<std::uint64_t, double>& acc, const EdgeRecord& e) {
    acc.try_emplace(edge_key(e.source, e.target), e.weight);
}

// truncate a layer's pick to `allowed` distinct targets, preferring targets
// reached by the highest-probability drawn edges
void truncate_pick(SampledEdges& picked, std::size_t allowed) {
    std::vector<std::size_t> order(picked.chosen.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return picked.chosen_probs[a] > picked.chosen_probs[b];
    });
    NodeSet keep;
    for (std::size_t idx : order) {
        NodeId t = picked.chosen[idx].target;
        if (keep.contains(t)) continue;
        if (keep.size() == allowed) continue;
        keep.insert(t);
    }
    SampledEdges reduced;
    for (std::size_t i = 0; i < picked.chosen.size(); ++i) {
        if (!keep.contains(picked.chosen[i].target)) continue;
        reduced.chosen.push_back(picked.chosen[i]);
        reduced.chosen_probs.push_back(picked.chosen_probs[i]);
    }
    reduced.new_nodes = std::move(keep);
    picked = std::move(reduced);
}

}  // namespace

SampleResult spikyball(GraphSource& src, const NodeSet& seeds, const SamplerConfig& cfg) {
    return spikyball(src, seeds, cfg, LayerCallback{});
}

SampleResult spikyball(GraphSource& src, const NodeSet& seeds, const SamplerConfig& cfg,
                       const LayerCallback& on_layer) {
    if (seeds.empty()) throw std::invalid_argument("spikyball: no seed nodes");
    validate_config(cfg);

    const std::uint64_t req0 = src.request_count();
    SampleResult res;
    res.layers.push_back(seeds.sorted());
    NodeSet total = seeds;
    for (NodeId s : res.layers[0]) res.layer_of[s] = 0;

    std::map<std::uint64_t, double> acc;
    Rng rng(cfg.seed);

    auto stop_reached = [&](std::size_t k) {
        if (const auto* m = std::get_if<MaxLayers>(&cfg.stop)) return k >= m->count;
        return total.size() >= std::get<TargetNodes>(cfg.stop).count;
    };
    const bool want_score = cfg.source_feature == SourceFeature::node_score || cfg.fetch_node_info;

    std::size_t k = 0;
    while (!stop_reached(k)) {
        const std::vector<NodeId>& layer = res.layers[k];
        LayerState state;
        state.layer_index = k;
        state.layer_nodes = layer;
        state.sampled_total = &total;

        if (want_score)
            for (NodeId v : layer) state.source_score[v] = src.fetch_node_score(v);
        std::vector<EdgeRecord> fetched;
        for (NodeId v : layer) {
            auto nb = src.fetch_neighbors(v);
            fetched.insert(fetched.end(), nb.begin(), nb.end());
        }

        auto [e_in, e_out] = filter_edges(fetched, total, cfg.min_edge_weight);
        res.edges_in.push_back(e_in);
        for (const EdgeRecord& e : e_in) add_edge_once(acc, e);

        if (e_out.empty()) {
            res.edges_sampled.emplace_back();
            res.frontier_exhausted = true;
            break;
        }

        for (const EdgeRecord& e : e_out) {
            state.out_degree[e.source] += e.weight;
            state.in_degree[e.target] += 1.0;
        }
        if (cfg.target_feature == TargetFeature::out_degree) {
            // needs each candidate's own neighborhood: one request per target
            NodeSet distinct;
            for (const EdgeRecord& e : e_out) distinct.insert(e.target);
            for (NodeId j : distinct.sorted()) {
                double outward = 0;
                for (const EdgeRecord& e : src.fetch_neighbors(j))
                    if (!total.contains(e.target)) outward += e.weight;
                state.target_out_degree[j] = outward;
            }
        } else if (cfg.target_feature == TargetFeature::node_score) {
            NodeSet distinct;
            for (const EdgeRecord& e : e_out) distinct.insert(e.target);
            for (NodeId j : distinct.sorted()) state.target_score[j] = src.fetch_node_score(j);
        }

        std::vector<double> probs = edge_probabilities(e_out, state, cfg);
        if (on_layer) on_layer(state, e_out, probs);

        std::size_t budget = layer_budget(e_out, cfg.budget, layer.size());
        SampledEdges picked = sample_edges(e_out, probs, budget, rng);
        if (const auto* t = std::get_if<TargetNodes>(&cfg.stop))
            if (total.size() + picked.new_nodes.size() > t->count)
                truncate_pick(picked, t->count - total.size());

        res.edges_sampled.push_back(picked.chosen);
        for (const EdgeRecord& e : picked.chosen) add_edge_once(acc, e);

        std::vector<NodeId> next = picked.new_nodes.sorted();
        for (NodeId v : next) {
            res.layer_of[v] = k + 1;
            total.insert(v);
        }
        res.layers.push_back(std::move(next));
        ++k;
        if (res.layers.back().empty()) {
            // zero-probability frontier: nothing drawable was left
            res.layers.pop_back();
            res.frontier_exhausted = true;
            break;
        }
    }

    std::vector<NodeId> nodes = total.sorted();
    std::map<NodeId, NodeId> to_new;
    for (NodeId i = 0; i < nodes.size(); ++i) to_new[nodes[i]] = i;
    GraphBuilder b(nodes.size());
    for (const auto& [key, w] : acc)
        b.add_edge(to_new[static_cast<NodeId>(key >> 32)],
                   to_new[static_cast<NodeId>(key & 0xffffffffu)], w);
    for (NodeId i = 0; i < nodes.size(); ++i) b.set_label(i, src.node_label(nodes[i]));
    res.sampled_graph = b.build();
    res.graph_to_source = std::move(nodes);
    res.request_count = src.request_count() - req0;
    return res;
}

SamplerConfig snowball_config(StopRule stop, std::uint64_t seed) {
    SamplerConfig c;
    c.alpha = 0;
    c.beta = 0;
    c.gamma = 0;
    c.budget = NodeRatio{1.0};
    c.stop = stop;
    c.seed = seed;
    return c;
}

SamplerConfig uni_edge_config(BudgetRule budget, StopRule stop, std::uint64_t seed,
                              bool weighted) {
    SamplerConfig c;
    c.alpha = 0;
    c.beta = weighted ? 1 : 0;
    c.gamma = 0;
    c.budget = budget;
    c.stop = stop;
    c.seed = seed;
    return c;
}

SamplerConfig fireball_config(double forward_prob, StopRule stop, std::uint64_t seed,
                              bool weighted) {
    SamplerConfig c;
    c.alpha = -1;
    c.beta = weighted ? 1 : 0;
    c.gamma = 0;
    c.budget = FireballBudget{forward_prob};
    c.stop = stop;
    c.seed = seed;
    return c;
}

SamplerConfig hubball_config(double alpha, BudgetRule budget, StopRule stop,
                             std::uint64_t seed) {
    SamplerConfig c;
    c.alpha = alpha;
    c.beta = 1;
    c.gamma = 0;
    c.budget = budget;
    c.stop = stop;
    c.seed = seed;
    return c;
}

SamplerConfig coreball_config(double gamma, BudgetRule budget, StopRule stop,
                              std::uint64_t seed) {
    SamplerConfig c;
    c.alpha = 0;
    c.beta = 1;
    c.gamma = gamma;
    c.target_feature = TargetFeature::in_degree;
    c.budget = budget;
    c.stop = stop;
    c.seed = seed;
    return c;
}

SamplerConfig expander_config(double gamma, BudgetRule budget, StopRule stop,
                              std::uint64_t seed) {
    SamplerConfig c;
    c.alpha = 0;
    c.beta = 0;
    c.gamma = gamma;
    c.target_feature = TargetFeature::out_degree;
    c.budget = budget;
    c.stop = stop;
    c.seed = seed;
    return c;
}

}  // namespace spiky
