#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "../tools/cli_app.hpp"
#include "doctest.h"
#include "json.hpp"
#include "spiky/io.hpp"
#include "testutil.hpp"

using namespace spiky;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    CliRun r;
    r.code = run_cli(std::move(args), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("spiky_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("generate er writes the complete graph") {
    fs::path dir = fresh_dir("gen_er");
    std::string out = (dir / "k4.txt").string();
    CliRun r = cli({"generate", "er", "--nodes", "4", "--edges", "6", "--out", out});
    CHECK(r.code == 0);
    CHECK(slurp(out) == "# nodes 4\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    auto echo = nlohmann::json::parse(slurp(out + ".run.json"));
    CHECK(echo.at("command") == "generate er");
    CHECK(echo.at("nodes") == 4);
    CHECK(echo.at("edges") == 6);
    CHECK(echo.at("seed") == 0);
}

TEST_CASE("generate ba twice is byte identical") {
    fs::path dir = fresh_dir("gen_ba");
    std::string a = (dir / "a.txt").string(), b = (dir / "b.txt").string();
    CHECK(cli({"generate", "ba", "--nodes", "300", "--attach", "4", "--seed", "7", "--out", a})
              .code == 0);
    CHECK(cli({"generate", "ba", "--nodes", "300", "--attach", "4", "--seed", "7", "--out", b})
              .code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).substr(0, 12) == "# nodes 300\n");
}

TEST_CASE("generate sbm block syntax") {
    fs::path dir = fresh_dir("gen_sbm");
    std::string out = (dir / "sbm.txt").string();
    CliRun r = cli({"generate", "sbm", "--sizes", "50x3,30", "--pin", "0.2", "--pout", "0.01",
                    "--seed", "3", "--out", out});
    CHECK(r.code == 0);
    CHECK(slurp(out).substr(0, 12) == "# nodes 180\n");
}

TEST_CASE("sample snowball covers the star") {
    fs::path dir = fresh_dir("sample_star");
    std::string graph = (dir / "star.txt").string();
    write_edge_list_file(testutil::star(10), graph);
    std::string out = (dir / "run").string();
    CliRun r = cli({"sample", "--input", graph, "--method", "snowball", "--layers", "2",
                    "--seeds", "0", "--out", out});
    CHECK(r.code == 0);
    CHECK(slurp(fs::path(out) / "sampled_edges.txt") ==
          "# nodes 11\n0 1\n0 2\n0 3\n0 4\n0 5\n0 6\n0 7\n0 8\n0 9\n0 10\n");
    std::string layers = slurp(fs::path(out) / "layers.csv");
    CHECK(layers.substr(0, 15) == "layer,node\n0,0\n");
    CHECK(layers.find("1,10\n") != std::string::npos);
    std::string summary = slurp(fs::path(out) / "summary.csv");
    CHECK(summary.find("nodes,11\n") != std::string::npos);
    CHECK(summary.find("frontier_exhausted,1\n") != std::string::npos);
}

TEST_CASE("sample respects target nodes and reruns byte identically") {
    fs::path dir = fresh_dir("sample_det");
    std::string graph = (dir / "g.txt").string();
    CHECK(cli({"generate", "ba", "--nodes", "500", "--attach", "3", "--seed", "2", "--out",
               graph}).code == 0);
    std::vector<std::string> args{"sample", "--input",  graph, "--method", "coreball:2",
                                  "--ratio",  "0.4",    "--target-nodes", "120",
                                  "--seed",   "11",     "--out", ""};
    std::string a = (dir / "a").string(), b = (dir / "b").string();
    args.back() = a;
    CHECK(cli(args).code == 0);
    args.back() = b;
    CHECK(cli(args).code == 0);
    for (const char* f : {"sampled_edges.txt", "layers.csv", "summary.csv"})
        CHECK(slurp(fs::path(a) / f) == slurp(fs::path(b) / f));
    std::string summary = slurp(fs::path(a) / "summary.csv");
    CHECK(summary.find("nodes,120\n") != std::string::npos);
}

TEST_CASE("config file values are used and flags override them") {
    fs::path dir = fresh_dir("config_merge");
    std::string graph = (dir / "path.txt").string();
    write_edge_list_file(testutil::path(5), graph);
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"input": ")" << graph
        << R"(", "method": "snowball", "layers": 1, "seeds": ["0"], "out": ")"
        << (dir / "from_cfg").string() << R"("})";
    cfg.close();

    CliRun file_only = cli({"sample", "--config", (dir / "cfg.json").string()});
    CHECK(file_only.code == 0);
    CHECK(slurp(dir / "from_cfg" / "summary.csv").find("nodes,2\n") != std::string::npos);

    CliRun overridden = cli({"sample", "--config", (dir / "cfg.json").string(), "--layers", "2",
                             "--out", (dir / "flag_wins").string()});
    CHECK(overridden.code == 0);
    CHECK(slurp(dir / "flag_wins" / "summary.csv").find("nodes,3\n") != std::string::npos);
}

TEST_CASE("rerunning from the echoed config reproduces outputs") {
    fs::path dir = fresh_dir("echo_rerun");
    std::string graph = (dir / "g.txt").string();
    CHECK(cli({"generate", "er", "--nodes", "120", "--edges", "480", "--seed", "5", "--out",
               graph}).code == 0);
    std::string first = (dir / "first").string();
    CHECK(cli({"sample", "--input", graph, "--method", "hubball:1", "--ratio", "0.5", "--layers",
               "3", "--seed", "21", "--out", first}).code == 0);
    std::string second = (dir / "second").string();
    CHECK(cli({"sample", "--config", first + "/config.json", "--out", second}).code == 0);
    for (const char* f : {"sampled_edges.txt", "layers.csv", "summary.csv"})
        CHECK(slurp(fs::path(first) / f) == slurp(fs::path(second) / f));
}

TEST_CASE("compare against itself scores ivip one") {
    fs::path dir = fresh_dir("compare_full");
    std::string graph = (dir / "g.txt").string();
    CHECK(cli({"generate", "ba", "--nodes", "200", "--attach", "3", "--seed", "9", "--out",
               graph}).code == 0);
    std::string out = (dir / "cmp").string();
    CliRun r = cli({"compare", "--input", graph, "--methods", "full,snowball", "--target-nodes",
                    "60", "--seed", "4", "--out", out});
    CHECK(r.code == 0);
    std::string csv = slurp(fs::path(out) / "metrics.csv");
    CHECK(csv.substr(0, csv.find('\n')) ==
          "method,nodes,edges,requests,clustering,clustering_rel_err,density,ivip,ks_full,"
          "ks_mean_trunc,ks_p75_trunc,pagerank_ratio,transitivity,transitivity_rel_err,"
          "ivip_mean,ivip_std");
    std::string full_row = csv.substr(csv.find("\nfull,") + 1);
    full_row = full_row.substr(0, full_row.find('\n'));
    CHECK(full_row.find(",1,") != std::string::npos);  // ivip column
    CHECK(fs::exists(fs::path(out) / "hist_original.csv"));
    CHECK(fs::exists(fs::path(out) / "hist_full.csv"));
    CHECK(fs::exists(fs::path(out) / "hist_snowball.csv"));
}

TEST_CASE("compare runs column and determinism") {
    fs::path dir = fresh_dir("compare_runs");
    std::string graph = (dir / "g.txt").string();
    CHECK(cli({"generate", "ba", "--nodes", "300", "--attach", "3", "--seed", "1", "--out",
               graph}).code == 0);
    std::vector<std::string> args{"compare", "--input", graph,  "--methods",
                                  "coreball:2,mhrw",    "--target-nodes", "80",
                                  "--runs", "3",        "--seed", "6",    "--out", ""};
    std::string a = (dir / "a").string(), b = (dir / "b").string();
    args.back() = a;
    CHECK(cli(args).code == 0);
    args.back() = b;
    CHECK(cli(args).code == 0);
    CHECK(slurp(fs::path(a) / "metrics.csv") == slurp(fs::path(b) / "metrics.csv"));
    // std column is last and must be a real spread over 3 runs
    std::string csv = slurp(fs::path(a) / "metrics.csv");
    std::string row = csv.substr(csv.find("\ncoreball:2,") + 1);
    row = row.substr(0, row.find('\n'));
    std::string std_field = row.substr(row.rfind(',') + 1);
    CHECK(std::stod(std_field) >= 0.0);
}

TEST_CASE("visits single run marks covered star bins at one") {
    fs::path dir = fresh_dir("visits_star");
    std::string graph = (dir / "star.txt").string();
    write_edge_list_file(testutil::star(10), graph);
    std::string out = (dir / "vis").string();
    CliRun r = cli({"visits", "--input", graph, "--method", "snowball", "--layers", "3", "--runs",
                    "1", "--seeds-per-run", "1", "--seed", "8", "--out", out});
    CHECK(r.code == 0);
    CHECK(slurp(fs::path(out) / "visits.csv") ==
          "degree_bin_low,mean_visits,ci95\n1,1,0\n10,1,0\n");
}

TEST_CASE("sweep writes a histogram pair per exponent") {
    fs::path dir = fresh_dir("sweep_pairs");
    std::string graph = (dir / "g.txt").string();
    CHECK(cli({"generate", "ba", "--nodes", "250", "--attach", "3", "--seed", "3", "--out",
               graph}).code == 0);
    std::string out = (dir / "sw").string();
    CliRun r = cli({"sweep", "--input", graph, "--family", "hubball", "--exponents=-2,-1,0,1,2",
                    "--ratio", "0.3", "--layers", "3", "--seed", "2", "--out", out});
    CHECK(r.code == 0);
    for (const char* tag : {"-2", "-1", "0", "1", "2"}) {
        CHECK(fs::exists(fs::path(out) / ("hubball_" + std::string(tag) + "_sampled.csv")));
        CHECK(fs::exists(fs::path(out) / ("hubball_" + std::string(tag) + "_original.csv")));
    }
    std::string hist = slurp(fs::path(out) / "hubball_0_sampled.csv");
    CHECK(hist.substr(0, 13) == "degree,count\n");
}

TEST_CASE("exit codes separate usage, data and parse failures") {
    fs::path dir = fresh_dir("exit_codes");
    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({}).code == 1);                              // missing subcommand
    CHECK(cli({"sample", "--bogus-flag"}).code == 1);      // unknown flag
    CHECK(cli({"sample", "--method", "snowball", "--out", (dir / "x").string()}).code == 1);
    CHECK(cli({"sample", "--input", (dir / "absent.txt").string(), "--method", "snowball",
               "--out", (dir / "y").string()}).code == 2);

    std::string graph = (dir / "g.txt").string();
    write_edge_list_file(testutil::star(4), graph);
    CHECK(cli({"sample", "--input", graph, "--method", "warpball", "--out",
               (dir / "z").string()}).code == 1);
    CHECK(cli({"sample", "--input", graph, "--method", "mhrw", "--layers", "2", "--out",
               (dir / "m").string()}).code == 1);  // mhrw needs --target-nodes
    CHECK(cli({"sample", "--input", graph, "--method", "snowball", "--seeds", "nope", "--out",
               (dir / "s").string()}).code == 2);  // label not in graph

    std::ofstream bad(dir / "bad.json");
    bad << R"({"command": "compare"})";
    bad.close();
    CHECK(cli({"sample", "--config", (dir / "bad.json").string()}).code == 2);
    std::ofstream unknown(dir / "unknown.json");
    unknown << R"({"no_such_key": 1})";
    unknown.close();
    CHECK(cli({"sample", "--config", (dir / "unknown.json").string()}).code == 2);
}
