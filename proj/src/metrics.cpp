#include "spiky/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spiky/errors.hpp"
#include "spiky/rng.hpp"

namespace spiky {

namespace {

// renormalized cdf over degrees >= min_degree (entire histogram when unset);
// empty result signalled by an empty map
std::map<std::size_t, double> truncated_cdf(const DegreeHistogram& h,
                                            std::optional<double> min_degree) {
    double total = 0;
    std::map<std::size_t, double> cdf;
    for (const auto& [d, c] : h) {
        if (min_degree && static_cast<double>(d) < *min_degree) continue;
        total += static_cast<double>(c);
        cdf[d] = total;
    }
    for (auto& [d, c] : cdf) c /= total;
    return cdf;
}

}  // namespace

double ks_statistic(const DegreeHistogram& a, const DegreeHistogram& b,
                    std::optional<double> min_degree) {
    auto ca = truncated_cdf(a, min_degree);
    auto cb = truncated_cdf(b, min_degree);
    // conditioning on the tail is impossible when only one side still has
    // mass there: report maximal discrepancy rather than failing the run
    if (ca.empty() && cb.empty()) throw NumericError("histograms empty after truncation");
    if (ca.empty() || cb.empty()) return 1.0;
    double ks = 0, fa = 0, fb = 0;
    auto ia = ca.begin();
    auto ib = cb.begin();
    while (ia != ca.end() || ib != cb.end()) {
        std::size_t d;
        if (ib == cb.end() || (ia != ca.end() && ia->first <= ib->first))
            d = ia->first;
        else
            d = ib->first;
        if (ia != ca.end() && ia->first == d) fa = (ia++)->second;
        if (ib != cb.end() && ib->first == d) fb = (ib++)->second;
        ks = std::max(ks, std::fabs(fa - fb));
    }
    return ks;
}

double mean_degree(const DegreeHistogram& h) {
    double total = 0, mass = 0;
    for (const auto& [d, c] : h) {
        total += static_cast<double>(d) * c;
        mass += static_cast<double>(c);
    }
    if (mass == 0) throw NumericError("mean of empty histogram");
    return total / mass;
}

double degree_percentile(const DegreeHistogram& h, double q) {
    if (!(q > 0 && q <= 1)) throw std::invalid_argument("percentile must be in (0, 1]");
    double mass = 0;
    for (const auto& [d, c] : h) mass += static_cast<double>(c);
    if (mass == 0) throw NumericError("percentile of empty histogram");
    double cum = 0;
    for (const auto& [d, c] : h) {
        cum += static_cast<double>(c);
        if (cum >= q * mass) return static_cast<double>(d);
    }
    return static_cast<double>(h.rbegin()->first);
}

std::vector<std::uint64_t> triangle_counts(const Graph& g) {
    std::size_t n = g.node_count();
    std::vector<std::uint64_t> t(n, 0);
    // sorted-adjacency intersection per edge; every triangle shows up at each
    // of its three edges, each time crediting the opposite node once
    for (NodeId u = 0; u < n; ++u) {
        auto nu = g.neighbor_ids(u);
        for (NodeId v : nu) {
            if (v <= u) continue;
            auto nv = g.neighbor_ids(v);
            auto a = nu.begin();
            auto b = nv.begin();
            while (a != nu.end() && b != nv.end()) {
                if (*a < *b)
                    ++a;
                else if (*b < *a)
                    ++b;
                else {
                    ++t[*a];
                    ++a;
                    ++b;
                }
            }
        }
    }
    return t;
}

double avg_clustering(const Graph& g) {
    std::size_t n = g.node_count();
    if (n == 0) return 0.0;
    auto tri = triangle_counts(g);
    double sum = 0;
    for (NodeId v = 0; v < n; ++v) {
        std::size_t d = g.neighbor_count(v);
        if (d < 2) continue;
        sum += 2.0 * static_cast<double>(tri[v]) / (static_cast<double>(d) * (d - 1));
    }
    return sum / static_cast<double>(n);
}

double transitivity(const Graph& g) {
    auto tri = triangle_counts(g);
    double triangles3 = 0;  // 3 * number of triangles
    for (auto t : tri) triangles3 += static_cast<double>(t);
    double wedges = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        double d = static_cast<double>(g.neighbor_count(v));
        wedges += d * (d - 1) / 2;
    }
    if (wedges == 0) return 0.0;
    return triangles3 / wedges;
}

std::vector<double> pagerank(const Graph& g, double damping, double tol,
                             std::size_t max_iter) {
    std::size_t n = g.node_count();
    if (n == 0) throw std::invalid_argument("pagerank on empty graph");
    if (!(damping >= 0 && damping < 1)) throw std::invalid_argument("damping must be in [0, 1)");

    std::vector<double> wdeg(n);
    for (NodeId v = 0; v < n; ++v) wdeg[v] = g.degree(v);

    std::vector<double> pr(n, 1.0 / n), next(n);
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        double dangling = 0;
        for (NodeId v = 0; v < n; ++v)
            if (wdeg[v] == 0) dangling += pr[v];
        double base = (1 - damping + damping * dangling) / n;
        std::fill(next.begin(), next.end(), base);
        for (NodeId u = 0; u < n; ++u) {
            if (wdeg[u] == 0) continue;
            double share = damping * pr[u] / wdeg[u];
            auto ids = g.neighbor_ids(u);
            auto wts = g.neighbor_weights(u);
            for (std::size_t i = 0; i < ids.size(); ++i) next[ids[i]] += share * wts[i];
        }
        double l1 = 0;
        for (NodeId v = 0; v < n; ++v) l1 += std::fabs(next[v] - pr[v]);
        pr.swap(next);
        if (l1 < tol) return pr;
    }
    throw NumericError("pagerank failed to converge");
}

double pagerank_ratio(const Graph& g, const NodeSet& sampled) {
    if (sampled.empty()) throw std::invalid_argument("pagerank_ratio of empty set");
    auto pr = pagerank(g);
    double sum = 0;
    for (NodeId v : sampled) {
        if (!g.has_node(v)) throw std::invalid_argument("sampled node outside graph");
        sum += pr[v];
    }
    double mean = sum / static_cast<double>(sampled.size());
    return mean * static_cast<double>(g.node_count());
}

double density(const Graph& g) {
    std::size_t n = g.node_count();
    if (n < 2) throw std::invalid_argument("density needs at least two nodes");
    return 2.0 * static_cast<double>(g.edge_count()) /
           (static_cast<double>(n) * static_cast<double>(n - 1));
}

double ivip_score(const Graph& g, const Partition& communities, double coverage,
                  const NodeSet& sampled) {
    if (communities.assignment.size() != g.node_count())
        throw std::invalid_argument("ivip: partition size mismatch");
    if (!(coverage > 0 && coverage <= 1))
        throw std::invalid_argument("ivip: coverage must be in (0, 1]");

    std::uint32_t ncomm = communities.community_count();
    std::vector<std::size_t> size(ncomm, 0);
    std::vector<double> wdeg(ncomm, 0.0), captured(ncomm, 0.0);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        std::uint32_t c = communities.assignment[v];
        ++size[c];
        double d = g.degree(v);
        wdeg[c] += d;
        if (sampled.contains(v)) captured[c] += d;
    }
    std::vector<std::uint32_t> order(ncomm);
    for (std::uint32_t c = 0; c < ncomm; ++c) order[c] = c;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (size[a] != size[b]) return size[a] > size[b];
        return a < b;
    });
    double num = 0, den = 0;
    std::size_t covered = 0;
    for (std::uint32_t c : order) {
        covered += size[c];
        num += captured[c];
        den += wdeg[c];
        if (static_cast<double>(covered) >= coverage * static_cast<double>(g.node_count()))
            break;
    }
    if (den == 0) throw NumericError("ivip: selected communities carry no edges");
    return num / den;
}

MetricReport compare_report(const Graph& original, const SampleResult& sample,
                            const Partition& communities, double ivip_coverage) {
    MetricReport r;
    r.original_degrees = original.degree_histogram();
    r.sampled_degrees = sample.sampled_graph.degree_histogram();

    r.values["ks_full"] = ks_statistic(r.original_degrees, r.sampled_degrees);
    r.values["ks_mean_trunc"] = ks_statistic(r.original_degrees, r.sampled_degrees,
                                             mean_degree(r.original_degrees));
    r.values["ks_p75_trunc"] = ks_statistic(r.original_degrees, r.sampled_degrees,
                                            degree_percentile(r.original_degrees, 0.75));

    auto rel_err = [](double sampled, double orig) {
        return orig != 0 ? std::fabs(sampled - orig) / std::fabs(orig)
                         : std::fabs(sampled - orig);
    };
    double c_orig = avg_clustering(original);
    double c_smp = avg_clustering(sample.sampled_graph);
    r.values["clustering"] = c_smp;
    r.values["clustering_rel_err"] = rel_err(c_smp, c_orig);
    double t_orig = transitivity(original);
    double t_smp = transitivity(sample.sampled_graph);
    r.values["transitivity"] = t_smp;
    r.values["transitivity_rel_err"] = rel_err(t_smp, t_orig);

    NodeSet nodes = sample.node_set();
    r.values["pagerank_ratio"] = pagerank_ratio(original, nodes);
    r.values["density"] = density(sample.sampled_graph);
    r.values["ivip"] = ivip_score(original, communities, ivip_coverage, nodes);
    return r;
}

VisitReport visit_probability(const Graph& g, const SamplerConfig& cfg, std::size_t runs,
                              std::size_t seeds_per_run, std::uint64_t master_seed) {
    if (runs == 0) throw std::invalid_argument("visit_probability: runs must be positive");
    if (seeds_per_run == 0 || seeds_per_run > g.node_count())
        throw std::invalid_argument("visit_probability: bad seeds_per_run");

    VisitReport report;
    report.runs = runs;
    report.visit_counts.assign(g.node_count(), 0);
    for (std::size_t r = 0; r < runs; ++r) {
        Rng pick(derive_seed(master_seed, 2 * r));
        NodeSet seeds;
        std::uniform_int_distribution<NodeId> uni(0, static_cast<NodeId>(g.node_count() - 1));
        while (seeds.size() < seeds_per_run) seeds.insert(uni(pick));
        SamplerConfig run_cfg = cfg;
        run_cfg.seed = derive_seed(master_seed, 2 * r + 1);
        InMemorySource src(g);
        SampleResult res = spikyball(src, seeds, run_cfg);
        for (NodeId v : res.node_set()) ++report.visit_counts[v];
    }

    // log-degree bins, 10 per decade; degree-0 nodes can never be visited and
    // are left out
    std::map<int, std::vector<std::uint32_t>> grouped;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        std::size_t d = g.neighbor_count(v);
        if (d == 0) continue;
        int bin = static_cast<int>(std::floor(10 * std::log10(static_cast<double>(d))));
        grouped[bin].push_back(report.visit_counts[v]);
    }
    for (auto& [bin, vals] : grouped) {
        VisitBin b;
        b.node_count = vals.size();
        double sum = 0;
        for (auto v : vals) sum += v;
        b.mean = sum / static_cast<double>(vals.size());
        if (vals.size() > 1) {
            double ss = 0;
            for (auto v : vals) ss += (v - b.mean) * (v - b.mean);
            double sd = std::sqrt(ss / static_cast<double>(vals.size() - 1));
            b.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(vals.size()));
        }
        report.bins[bin] = b;
    }
    return report;
}

}  // namespace spiky
