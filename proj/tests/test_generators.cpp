#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "spiky/generators.hpp"
#include "testutil.hpp"

using namespace spiky;

TEST_CASE("er with all edges is the complete graph") {
    for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
        Graph g = erdos_renyi(4, 6, seed);
        CHECK(g.degree_histogram() == DegreeHistogram{{3, 4}});
    }
}

TEST_CASE("er exact edge count and mean degree") {
    Graph g = erdos_renyi(1000, 5000, 1);
    CHECK(g.node_count() == 1000);
    CHECK(g.edge_count() == 5000);
    std::size_t stubs = 0;
    for (auto& [d, c] : g.degree_histogram()) stubs += d * c;
    CHECK(stubs == 10000);
}

TEST_CASE("er determinism") {
    CHECK(erdos_renyi(200, 700, 5).edges() == erdos_renyi(200, 700, 5).edges());
    CHECK(erdos_renyi(200, 700, 5).edges() != erdos_renyi(200, 700, 6).edges());
}

TEST_CASE("er rejects impossible edge counts") {
    CHECK_THROWS_AS(erdos_renyi(4, 7, 0), std::invalid_argument);
    CHECK_THROWS_AS(erdos_renyi(0, 0, 0), std::invalid_argument);
}

TEST_CASE("er degrees follow poisson") {
    // n=50000, m=250000 -> mean degree 10; empirical degree cdf should hug
    // Poisson(10) (KS well under 0.02 at this size)
    Graph g = erdos_renyi(50000, 250000, 3);
    auto hist = g.degree_histogram();
    std::size_t max_deg = hist.rbegin()->first;
    double n = static_cast<double>(g.node_count());
    double lambda = 10.0;
    double ks = 0, emp = 0, pmf = std::exp(-lambda), theo = 0;
    auto it = hist.begin();
    for (std::size_t d = 0; d <= max_deg; ++d) {
        if (it != hist.end() && it->first == d) {
            emp += it->second / n;
            ++it;
        }
        theo += pmf;
        pmf *= lambda / (d + 1);
        ks = std::max(ks, std::fabs(emp - theo));
    }
    CHECK(ks <= 0.02);
}

TEST_CASE("ba smallest case is a clique") {
    Graph g = barabasi_albert(4, 3, 0);
    CHECK(g.degree_histogram() == DegreeHistogram{{3, 4}});
}

TEST_CASE("ba edge count and minimum degree") {
    std::size_t n = 2000, m = 3;
    Graph g = barabasi_albert(n, m, 17);
    CHECK(g.node_count() == n);
    CHECK(g.edge_count() == (m + 1) * m / 2 + (n - m - 1) * m);
    auto hist = g.degree_histogram();
    CHECK(hist.begin()->first >= m);
}

TEST_CASE("ba determinism") {
    CHECK(barabasi_albert(500, 2, 9).edges() == barabasi_albert(500, 2, 9).edges());
    CHECK(barabasi_albert(500, 2, 9).edges() != barabasi_albert(500, 2, 10).edges());
}

TEST_CASE("ba rejects bad parameters") {
    CHECK_THROWS_AS(barabasi_albert(3, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(barabasi_albert(3, 3, 0), std::invalid_argument);
}

TEST_CASE("ba degree distribution is heavy tailed with slope near -3") {
    Graph g = barabasi_albert(50000, 5, 7);
    auto hist = g.degree_histogram();
    // least squares on log-log points, restricted to well-populated degrees
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t k = 0;
    for (auto& [d, c] : hist) {
        if (d < 5 || c < 10) continue;
        double x = std::log(static_cast<double>(d));
        double y = std::log(static_cast<double>(c));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++k;
    }
    REQUIRE(k >= 10);
    double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    CHECK(slope >= -3.4);
    CHECK(slope <= -2.6);
}

TEST_CASE("sbm with p_in 1 and p_out 0 gives disjoint cliques") {
    Graph g = stochastic_block_model({3, 3}, 1.0, 0.0, 0);
    CHECK(g.node_count() == 6);
    CHECK(g.edge_count() == 6);
    CHECK(g.degree_histogram() == DegreeHistogram{{2, 6}});
    CHECK_FALSE(g.has_edge(0, 3));
}

TEST_CASE("sbm with equal probabilities matches the er edge budget") {
    // p_in == p_out == p makes every pair bernoulli(p); total edges should sit
    // within 4 sigma of p * C(n,2)
    Graph g = stochastic_block_model({500, 500}, 0.01, 0.01, 21);
    double pairs = 1000.0 * 999.0 / 2.0;
    double mean = 0.01 * pairs;
    double sd = std::sqrt(pairs * 0.01 * 0.99);
    CHECK(std::fabs(static_cast<double>(g.edge_count()) - mean) <= 4 * sd);
}

TEST_CASE("sbm block structure has dense diagonal") {
    Graph g = stochastic_block_model({200, 200}, 0.1, 0.01, 4);
    std::size_t within = 0, across = 0;
    for (const EdgeRecord& e : g.edges()) {
        bool same = (e.source < 200) == (e.target < 200);
        (same ? within : across) += 1;
    }
    // expectations: within ~ 2 * 0.1 * C(200,2) = 3980, across ~ 0.01 * 40000 = 400
    CHECK(within > 4 * across);
}

TEST_CASE("sbm determinism and validation") {
    CHECK(stochastic_block_model({50, 50}, 0.2, 0.02, 1).edges() ==
          stochastic_block_model({50, 50}, 0.2, 0.02, 1).edges());
    CHECK_THROWS_AS(stochastic_block_model({}, 0.5, 0.1, 0), std::invalid_argument);
    CHECK_THROWS_AS(stochastic_block_model({3, 0}, 0.5, 0.1, 0), std::invalid_argument);
    CHECK_THROWS_AS(stochastic_block_model({3, 3}, 0.1, 0.5, 0), std::invalid_argument);
    CHECK_THROWS_AS(stochastic_block_model({3, 3}, 1.5, 0.1, 0), std::invalid_argument);
}
