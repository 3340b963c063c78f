#include <random>
#include <sstream>

#include "doctest.h"
#include "spiky/errors.hpp"
#include "spiky/io.hpp"
#include "spiky/metrics.hpp"
#include "testutil.hpp"

using namespace spiky;

TEST_CASE("load triangle from whitespace lines") {
    std::istringstream in("0 1\n1 2\n2 0\n");
    Graph g = load_edge_list(in);
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 3);
    CHECK(g.degree_histogram() == DegreeHistogram{{2, 3}});
}

TEST_CASE("comments and blank lines skipped") {
    std::istringstream in("# a comment\n\n  \na b\n# trailing\n");
    Graph g = load_edge_list(in);
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 1);
    CHECK(g.label(0) == "a");
    CHECK(g.label(1) == "b");
}

TEST_CASE("duplicate rows merge with summed weight") {
    std::istringstream in("x y\ny x\n");
    LoadStats stats;
    Graph g = load_edge_list(in, {}, &stats);
    CHECK(g.edge_count() == 1);
    CHECK(g.edge_weight(0, 1) == 2.0);
    CHECK(stats.duplicates_merged == 1);
}

TEST_CASE("self loops dropped with count") {
    std::istringstream in("a a\na b\n");
    LoadStats stats;
    Graph g = load_edge_list(in, {}, &stats);
    CHECK(stats.self_loops_dropped == 1);
    CHECK(g.edge_count() == 1);
}

TEST_CASE("comma format with weights") {
    std::istringstream in("u, v, 2.5\nv, w, 0.125\n");
    EdgeListFormat fmt{Delimiter::comma, true};
    Graph g = load_edge_list(in, fmt);
    CHECK(g.edge_count() == 2);
    CHECK(g.edge_weight(0, 1) == 2.5);
    CHECK(g.edge_weight(1, 2) == 0.125);
}

TEST_CASE("malformed lines raise ParseError with line number") {
    std::istringstream one_field("0 1\nmalformed\n");
    CHECK_THROWS_WITH_AS(load_edge_list(one_field), doctest::Contains("line 2"), ParseError);

    std::istringstream extra_field("0 1 7\n");
    CHECK_THROWS_AS(load_edge_list(extra_field), ParseError);

    std::istringstream bad_weight("0,1,heavy\n");
    EdgeListFormat fmt{Delimiter::comma, true};
    CHECK_THROWS_WITH_AS(load_edge_list(bad_weight, fmt), doctest::Contains("line 1"),
                         ParseError);

    std::istringstream neg_weight("0 1 -2\n");
    CHECK_THROWS_AS(load_edge_list(neg_weight, EdgeListFormat{Delimiter::whitespace, true}),
                    ParseError);
}

TEST_CASE("empty input raises") {
    std::istringstream in("# only a comment\n");
    CHECK_THROWS_AS(load_edge_list(in), ParseError);
    std::istringstream nothing("");
    CHECK_THROWS_AS(load_edge_list(nothing), ParseError);
}

TEST_CASE("nodes header pads isolated nodes") {
    std::istringstream in("# nodes 5\n0 1\n");
    Graph g = load_edge_list(in);
    CHECK(g.node_count() == 5);
    CHECK(g.edge_count() == 1);
}

TEST_CASE("write triangle produces header plus three sorted lines") {
    std::ostringstream out;
    write_edge_list(testutil::triangle(), out);
    CHECK(out.str() == "# nodes 3\n0 1\n0 2\n1 2\n");
}

TEST_CASE("write empty two-node graph emits header only") {
    GraphBuilder b(2);
    std::ostringstream out;
    write_edge_list(b.build(), out);
    CHECK(out.str() == "# nodes 2\n");
}

TEST_CASE("weighted comma writing round trips") {
    GraphBuilder b(3);
    b.add_edge(0, 1, 2.5);
    b.add_edge(1, 2, 0.1);
    Graph g = b.build();
    EdgeListFormat fmt{Delimiter::comma, true};
    std::ostringstream out;
    write_edge_list(g, out, fmt);
    CHECK(out.str() == "# nodes 3\n0,1,2.5\n1,2,0.1\n");
    std::istringstream in(out.str());
    Graph back = load_edge_list(in, fmt);
    CHECK(back.edge_weight(0, 1) == 2.5);
    CHECK(back.edge_weight(1, 2) == 0.1);
}

TEST_CASE("round trip preserves degree histogram including isolated nodes") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t n = 3 + rng() % 40;
        GraphBuilder b(n);
        for (std::size_t i = 0; i < n; ++i) {
            NodeId u = rng() % n, v = rng() % n;
            if (u != v) b.add_edge(u, v, 1.0 + (rng() % 8) * 0.25);
        }
        Graph g = b.build();
        for (auto fmt : {EdgeListFormat{Delimiter::whitespace, true},
                         EdgeListFormat{Delimiter::comma, true}}) {
            std::ostringstream out;
            write_edge_list(g, out, fmt);
            std::istringstream in(out.str());
            Graph back = load_edge_list(in, fmt);
            CHECK(back.degree_histogram() == g.degree_histogram());
            CHECK(back.node_count() == g.node_count());
            CHECK(back.edge_count() == g.edge_count());
        }
    }
}

TEST_CASE("labels with embedded delimiter refuse to write") {
    GraphBuilder b(2);
    b.add_edge(0, 1);
    b.set_label(0, "has space");
    Graph g = b.build();
    std::ostringstream out;
    CHECK_THROWS_AS(write_edge_list(g, out), std::invalid_argument);
}

TEST_CASE("metrics csv canonical form") {
    MetricReport empty;
    std::ostringstream out;
    write_metrics_csv(empty, out);
    CHECK(out.str() == "metric,value\n");

    MetricReport r;
    r.values["density"] = 0.5;
    r.values["clustering"] = 0.25;
    std::ostringstream out2;
    write_metrics_csv(r, out2);
    CHECK(out2.str() == "metric,value\nclustering,0.25\ndensity,0.5\n");
}

TEST_CASE("histogram csv") {
    std::ostringstream out;
    write_histogram_csv(DegreeHistogram{{1, 4}, {4, 1}}, out);
    CHECK(out.str() == "degree,count\n1,4\n4,1\n");
}

TEST_CASE("format_double round trips exactly") {
    for (double x : {0.5, 1.0, 6.7e-4, 1.0 / 3.0, 123456.789, 1e-12}) {
        std::string s = format_double(x);
        CHECK(std::stod(s) == x);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0) == "1");
}

TEST_CASE("missing file raises ParseError") {
    CHECK_THROWS_AS(load_edge_list_file("/nonexistent/path/graph.txt"), ParseError);
}
