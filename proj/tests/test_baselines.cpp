#include <cmath>
#include <set>

#include "doctest.h"
#include "spiky/baselines.hpp"
#include "spiky/generators.hpp"
#include "testutil.hpp"

using namespace spiky;

TEST_CASE("mh walk visits exactly the target count") {
    Graph g = barabasi_albert(200, 3, 5);
    auto res = metropolis_hastings_rw(g, 0, 40, 7);
    CHECK(res.sampled_graph.node_count() == 40);
    CHECK(res.layer_of.size() == 40);
    CHECK_FALSE(res.step_cap_hit);
    CHECK(res.layers.size() == 40);  // discovery order, one node per layer
    for (const auto& layer : res.layers) CHECK(layer.size() == 1);
}

TEST_CASE("mh walk covers a small connected graph") {
    Graph g = barabasi_albert(30, 2, 11);
    auto res = metropolis_hastings_rw(g, 3, 30, 1);
    CHECK(res.sampled_graph.node_count() == 30);
    CHECK_FALSE(res.step_cap_hit);
}

TEST_CASE("leaving a star leaf takes about ten proposals") {
    // from a degree-1 leaf the center (degree 10) is accepted with p=1/10,
    // so proposals-to-move is Geometric(0.1) with mean 10
    Graph g = testutil::star(10);
    double total = 0;
    const int runs = 20000;
    for (int i = 0; i < runs; ++i) {
        auto res = metropolis_hastings_rw(g, 1, 2, 1000 + i);
        total += static_cast<double>(res.request_count);
    }
    CHECK(total / runs == doctest::Approx(10.0).epsilon(0.03));
}

TEST_CASE("mh sampled graph is induced on the visited set") {
    Graph g = erdos_renyi(60, 240, 9);
    auto res = metropolis_hastings_rw(g, 0, 25, 3);
    NodeSet visited = res.node_set();
    std::size_t expect = 0;
    for (const EdgeRecord& e : g.edges())
        if (visited.contains(e.source) && visited.contains(e.target)) ++expect;
    CHECK(res.sampled_graph.edge_count() == expect);
}

TEST_CASE("mh walk determinism and step cap") {
    Graph g = erdos_renyi(100, 300, 2);
    auto a = metropolis_hastings_rw(g, 5, 30, 77);
    auto b = metropolis_hastings_rw(g, 5, 30, 77);
    CHECK(a.layers == b.layers);
    CHECK(a.request_count == b.request_count);

    Graph two = stochastic_block_model({20, 20}, 0.4, 0.0, 3);
    auto capped = metropolis_hastings_rw(two, 0, 25, 5);  // component has 20 nodes
    CHECK(capped.step_cap_hit);
    CHECK(capped.request_count == 25000);
    CHECK(capped.sampled_graph.node_count() <= 20);

    GraphBuilder iso(3);
    iso.add_edge(1, 2);
    auto stuck = metropolis_hastings_rw(iso.build(), 0, 2, 0);
    CHECK(stuck.frontier_exhausted);
    CHECK(stuck.sampled_graph.node_count() == 1);

    CHECK_THROWS_AS(metropolis_hastings_rw(g, 500, 5, 0), std::invalid_argument);
    CHECK_THROWS_AS(metropolis_hastings_rw(g, 0, 0, 0), std::invalid_argument);
}

TEST_CASE("spread counts follow the stated geometric law") {
    Rng rng(12);
    for (double p : {0.4, 0.7}) {
        double total = 0;
        const int draws = 100000;
        for (int i = 0; i < draws; ++i)
            total += static_cast<double>(forest_fire_spread_count(p, rng));
        CHECK(total / draws == doctest::Approx(p / (1 - p)).epsilon(0.02));
    }
    CHECK(forest_fire_spread_count(0.0, rng) == 0);
    CHECK_THROWS_AS(forest_fire_spread_count(1.0, rng), std::invalid_argument);
}

TEST_CASE("fire burning three leaves stops at the target") {
    // find a seed whose first spread draw is exactly 3
    std::uint64_t seed = 0;
    for (;; ++seed) {
        Rng probe(seed);
        if (forest_fire_spread_count(0.7, probe) == 3) break;
    }
    Graph g = testutil::star(10);
    auto res = forest_fire(g, NodeSet{0}, 0.7, 4, seed);
    CHECK(res.sampled_graph.node_count() == 4);
    CHECK(res.sampled_graph.edge_count() == 3);
    CHECK(res.layers.size() == 2);
    CHECK(res.layers[0] == std::vector<NodeId>{0});
    CHECK(res.layers[1].size() == 3);
    CHECK(res.request_count == 1);
}

TEST_CASE("dead fire restarts until the target is met") {
    // leaves never spread back (center already burned), forcing restarts
    Graph g = testutil::star(10);
    auto res = forest_fire(g, NodeSet{0}, 0.5, 8, 4);
    CHECK(res.sampled_graph.node_count() == 8);
    for (NodeId v : res.layers[0]) CHECK(res.layer_of.at(v) == 0);
    CHECK(res.layers[0].size() >= 1);

    // zero forward probability degenerates to uniform restarts
    Graph er = erdos_renyi(50, 120, 6);
    auto cold = forest_fire(er, NodeSet{1}, 0.0, 12, 9);
    CHECK(cold.sampled_graph.node_count() == 12);
    CHECK(cold.sampled_graph.edge_count() == 0);
    CHECK(cold.layers.size() == 1);
    CHECK(cold.layers[0].size() == 12);
}

TEST_CASE("burn tree edges form a forest inside the graph") {
    Graph g = barabasi_albert(400, 4, 13);
    auto res = forest_fire(g, NodeSet{0, 1}, 0.6, 150, 21);
    CHECK(res.sampled_graph.node_count() == 150);
    // every burned non-root has exactly one burn edge
    CHECK(res.sampled_graph.edge_count() == 150 - res.layers[0].size());
    for (const EdgeRecord& e : res.collected_edges()) CHECK(g.has_edge(e.source, e.target));
}

TEST_CASE("forest fire consumes the whole graph at most") {
    Graph g = testutil::path(6);
    auto res = forest_fire(g, NodeSet{0}, 0.5, 10, 2);
    CHECK(res.sampled_graph.node_count() == 6);
    CHECK(res.frontier_exhausted);
}

TEST_CASE("forest fire determinism and validation") {
    Graph g = erdos_renyi(200, 800, 31);
    auto a = forest_fire(g, NodeSet{0}, 0.7, 80, 5);
    auto b = forest_fire(g, NodeSet{0}, 0.7, 80, 5);
    CHECK(a.layers == b.layers);
    CHECK(a.sampled_graph.edges() == b.sampled_graph.edges());
    auto c = forest_fire(g, NodeSet{0}, 0.7, 80, 6);
    CHECK(a.layers != c.layers);

    CHECK_THROWS_AS(forest_fire(g, NodeSet{}, 0.5, 5, 0), std::invalid_argument);
    CHECK_THROWS_AS(forest_fire(g, NodeSet{0}, 1.0, 5, 0), std::invalid_argument);
    CHECK_THROWS_AS(forest_fire(g, NodeSet{0}, -0.1, 5, 0), std::invalid_argument);
    CHECK_THROWS_AS(forest_fire(g, NodeSet{999}, 0.5, 5, 0), std::invalid_argument);
}

TEST_CASE("seed set larger than target burns only the first seeds") {
    Graph g = testutil::complete(6);
    auto res = forest_fire(g, NodeSet{0, 1, 2, 3, 4}, 0.5, 3, 0);
    CHECK(res.sampled_graph.node_count() == 3);
    CHECK(res.layers[0] == std::vector<NodeId>{0, 1, 2});
}
