#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spiky/community.hpp"
#include "spiky/graph.hpp"
#include "spiky/sampler.hpp"

namespace spiky {

struct MetricReport {
    std::map<std::string, double> values;
    DegreeHistogram original_degrees;  // full original graph
    DegreeHistogram sampled_degrees;   // degrees within the sampled graph
};

// Kolmogorov-Smirnov sup distance between the two degree distributions,
// optionally restricted (and renormalized) to degrees >= min_degree.
double ks_statistic(const DegreeHistogram& a, const DegreeHistogram& b,
                    std::optional<double> min_degree = {});

double mean_degree(const DegreeHistogram& h);
// smallest degree d with cdf(d) >= q, q in (0, 1]
double degree_percentile(const DegreeHistogram& h, double q);

// per-node triangle membership counts (sorted-adjacency intersection)
std::vector<std::uint64_t> triangle_counts(const Graph& g);
// mean of local clustering coefficients; degree < 2 contributes 0
double avg_clustering(const Graph& g);
// 3 * triangles / wedges; 0 when the graph has no wedges
double transitivity(const Graph& g);

// Power iteration with uniform teleport and uniform dangling redistribution;
// throws NumericError if tol isn't reached within max_iter.
std::vector<double> pagerank(const Graph& g, double damping = 0.85,
                             double tol = 1e-10, std::size_t max_iter = 10000);

// mean pagerank of the sampled nodes divided by the uniform score 1/n
double pagerank_ratio(const Graph& g, const NodeSet& sampled);

// 2|E| / (n(n-1))
double density(const Graph& g);

// Fraction of weighted degree captured inside the largest communities (by
// node count, ties to lower id) that together cover >= coverage of all nodes:
// sum_k deg(C_k ∩ sampled) / sum_k deg(C_k).
double ivip_score(const Graph& g, const Partition& communities, double coverage,
                  const NodeSet& sampled);

MetricReport compare_report(const Graph& original, const SampleResult& sample,
                            const Partition& communities, double ivip_coverage = 0.8);

struct VisitBin {
    double mean = 0.0;
    double ci95 = 0.0;  // 1.96 * sd / sqrt(count), across nodes in the bin
    std::size_t node_count = 0;
};

struct VisitReport {
    // bin index floor(10*log10(degree)) -> stats over nodes in that bin
    std::map<int, VisitBin> bins;
    std::vector<std::uint32_t> visit_counts;  // per node of g
    std::size_t runs = 0;
};

// Repeats the sampler `runs` times with derived seeds and seeds_per_run
// uniformly drawn start nodes, then aggregates per-node visit counts into
// logarithmic degree bins (10 per decade).
VisitReport visit_probability(const Graph& g, const SamplerConfig& cfg,
                              std::size_t runs, std::size_t seeds_per_run,
                              std::uint64_t master_seed);

}  // namespace spiky
