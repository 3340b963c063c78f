#include "cli_app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spiky/baselines.hpp"
#include "spiky/community.hpp"
#include "spiky/errors.hpp"
#include "spiky/generators.hpp"
#include "spiky/io.hpp"
#include "spiky/metrics.hpp"
#include "spiky/rng.hpp"
#include "spiky/sampler.hpp"

namespace spiky {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// bad flag combinations and the like; exit code 1
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t end = s.find(sep, start);
        if (end == std::string::npos) end = s.size();
        if (end > start) out.push_back(s.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

double parse_number(const std::string& s) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("not a number: '" + s + "'");
}

std::size_t parse_count(const std::string& s) {
    try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(s, &used);
        if (used == s.size()) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw UsageError("not a count: '" + s + "'");
}

// "500x10" = ten blocks of 500; plain numbers are single blocks
std::vector<std::size_t> parse_sizes(const std::string& s) {
    std::vector<std::size_t> sizes;
    for (const std::string& tok : split_list(s, ',')) {
        std::size_t x = tok.find('x');
        if (x == std::string::npos) {
            sizes.push_back(parse_count(tok));
        } else {
            std::size_t block = parse_count(tok.substr(0, x));
            std::size_t repeat = parse_count(tok.substr(x + 1));
            sizes.insert(sizes.end(), repeat, block);
        }
    }
    return sizes;
}

// Values for options the user did not pass come from an optional json config
// file; flags always win.  Unknown keys are rejected so stale configs fail
// loudly instead of being silently ignored.
class ConfigFile {
public:
    void load(const CLI::Option* opt, const std::string& path, const std::string& command) {
        if (opt == nullptr || opt->count() == 0) return;
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open '" + path + "'");
        try {
            data_ = json::parse(in);
        } catch (const json::exception& e) {
            throw ParseError("bad config json: " + std::string(e.what()));
        }
        if (!data_.is_object()) throw std::invalid_argument("config root must be an object");
        if (auto it = data_.find("command"); it != data_.end()) {
            if (!it->is_string() || it->get<std::string>() != command)
                throw std::invalid_argument("config file is not for command '" + command + "'");
        }
    }

    template <typename T>
    void merge(const CLI::Option* opt, const std::string& key, T& value) {
        known_.insert(key);
        if (opt != nullptr && opt->count() > 0) return;
        auto it = data_.find(key);
        if (it == data_.end()) return;
        try {
            value = it->get<T>();
        } catch (const json::exception&) {
            throw std::invalid_argument("config key '" + key + "' has the wrong type");
        }
    }

    void finish() const {
        for (const auto& item : data_.items())
            if (known_.count(item.key()) == 0)
                throw std::invalid_argument("unknown config key: " + item.key());
    }

private:
    json data_ = json::object();
    std::set<std::string> known_{"command"};
};

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path.string() + "' for writing");
    out << content;
}

void write_config_echo(const fs::path& path, const json& resolved) {
    write_text_file(path, resolved.dump(2) + "\n");
}

std::string csv_safe_label(const Graph& g, NodeId v) {
    std::string l = g.label(v);
    if (l.find(',') != std::string::npos || l.find('\n') != std::string::npos)
        throw std::invalid_argument("node label '" + l + "' cannot be written to csv");
    return l;
}

NodeSet pick_nodes(const Graph& g, std::size_t count, std::uint64_t seed) {
    if (count == 0 || count > g.node_count())
        throw std::invalid_argument("seed node count must be in [1, node count]");
    Rng rng(seed);
    std::uniform_int_distribution<NodeId> uni(0, static_cast<NodeId>(g.node_count() - 1));
    NodeSet picked;
    while (picked.size() < count) picked.insert(uni(rng));
    return picked;
}

NodeSet lookup_seeds(const Graph& g, const std::vector<std::string>& labels) {
    std::unordered_map<std::string, NodeId> index;
    for (NodeId v = 0; v < g.node_count(); ++v) index.emplace(g.label(v), v);
    NodeSet seeds;
    for (const std::string& l : labels) {
        auto it = index.find(l);
        if (it == index.end()) throw std::invalid_argument("seed label not in graph: '" + l + "'");
        seeds.insert(it->second);
    }
    return seeds;
}

// "name" or "name:param", e.g. coreball:2 or fireball:0.7
struct MethodSpec {
    std::string name;
    std::optional<double> param;
    std::string file_tag;  // filename-safe form of the original spec
};

MethodSpec parse_method_spec(const std::string& s) {
    if (s.empty()) throw UsageError("--method is required");
    MethodSpec m;
    std::size_t colon = s.find(':');
    m.name = s.substr(0, colon);
    if (colon != std::string::npos) m.param = parse_number(s.substr(colon + 1));
    m.file_tag = s;
    std::replace(m.file_tag.begin(), m.file_tag.end(), ':', '_');
    return m;
}

double require_param(const MethodSpec& m, const std::string& what) {
    if (!m.param) throw UsageError("method '" + m.name + "' needs " + what +
                                   "; write " + m.name + ":<value>");
    return *m.param;
}

bool is_spikyball_method(const std::string& name) {
    static const std::set<std::string> names{"snowball", "uni_edge", "fireball",
                                             "hubball",  "coreball", "expander"};
    return names.count(name) != 0;
}

SamplerConfig make_spiky_config(const MethodSpec& m, const BudgetRule& budget,
                                const StopRule& stop, std::optional<double> min_weight,
                                bool weighted, bool fetch_info, std::uint64_t seed) {
    SamplerConfig cfg;
    if (m.name == "snowball")
        cfg = snowball_config(stop, seed);
    else if (m.name == "uni_edge")
        cfg = uni_edge_config(budget, stop, seed, weighted);
    else if (m.name == "fireball")
        cfg = fireball_config(require_param(m, "a forward probability"), stop, seed, weighted);
    else if (m.name == "hubball")
        cfg = hubball_config(require_param(m, "alpha"), budget, stop, seed);
    else if (m.name == "coreball")
        cfg = coreball_config(require_param(m, "gamma"), budget, stop, seed);
    else if (m.name == "expander")
        cfg = expander_config(require_param(m, "gamma"), budget, stop, seed);
    else
        throw UsageError("method '" + m.name + "' is not a spikyball sampler");
    cfg.min_edge_weight = min_weight;
    cfg.fetch_node_info = fetch_info;
    return cfg;
}

// the whole original presented as a sample; identity row for compare
SampleResult full_sample(const Graph& g) {
    SampleResult res;
    res.sampled_graph = g;
    res.graph_to_source.resize(g.node_count());
    std::iota(res.graph_to_source.begin(), res.graph_to_source.end(), NodeId{0});
    res.layers.push_back(res.graph_to_source);
    for (NodeId v = 0; v < g.node_count(); ++v) res.layer_of.emplace(v, 0);
    return res;
}

SampleResult run_method(const Graph& g, const MethodSpec& m, const NodeSet& starts,
                        const BudgetRule& budget, const StopRule& stop,
                        std::optional<double> min_weight, bool weighted, bool fetch_info,
                        std::uint64_t seed) {
    if (is_spikyball_method(m.name)) {
        SamplerConfig cfg = make_spiky_config(m, budget, stop, min_weight, weighted,
                                              fetch_info, seed);
        InMemorySource src(g);
        return spikyball(src, starts, cfg);
    }
    if (m.name == "mhrw") {
        const auto* target = std::get_if<TargetNodes>(&stop);
        if (target == nullptr) throw UsageError("mhrw needs --target-nodes");
        return metropolis_hastings_rw(g, starts.sorted().front(), target->count, seed);
    }
    if (m.name == "forestfire") {
        const auto* target = std::get_if<TargetNodes>(&stop);
        if (target == nullptr) throw UsageError("forestfire needs --target-nodes");
        return forest_fire(g, starts, require_param(m, "a forward probability"),
                           target->count, seed);
    }
    if (m.name == "full") return full_sample(g);
    throw UsageError("unknown method: '" + m.name + "'");
}

// ---- shared option blocks ----------------------------------------------

struct InputOpts {
    std::string input;
    bool comma = false;
    bool weighted = false;
    CLI::Option* input_opt = nullptr;
    CLI::Option* comma_opt = nullptr;
    CLI::Option* weighted_opt = nullptr;

    void add_to(CLI::App& cmd) {
        input_opt = cmd.add_option("--input", input, "edge list to load");
        comma_opt = cmd.add_flag("--comma", comma, "input is comma separated");
        weighted_opt = cmd.add_flag("--weighted", weighted, "input has a weight column");
    }
    void merge(ConfigFile& cfg) {
        cfg.merge(input_opt, "input", input);
        cfg.merge(comma_opt, "comma", comma);
        cfg.merge(weighted_opt, "weighted", weighted);
    }
    void echo(json& j) const {
        j["input"] = input;
        j["comma"] = comma;
        j["weighted"] = weighted;
    }
    EdgeListFormat format() const {
        EdgeListFormat fmt;
        fmt.delimiter = comma ? Delimiter::comma : Delimiter::whitespace;
        fmt.weighted = weighted;
        return fmt;
    }
    Graph load() const {
        if (input.empty()) throw UsageError("--input is required");
        return load_edge_list_file(input, format());
    }
};

struct KnobOpts {
    double ratio = 1.0;
    std::size_t budget_nodes = 0;  // 0 = use --ratio
    std::size_t layers = 2;
    std::size_t target_nodes = 0;  // 0 = use --layers
    double min_edge_weight = 0.0;  // 0 = keep everything
    CLI::Option* ratio_opt = nullptr;
    CLI::Option* budget_opt = nullptr;
    CLI::Option* layers_opt = nullptr;
    CLI::Option* target_opt = nullptr;
    CLI::Option* minw_opt = nullptr;

    void add_to(CLI::App& cmd) {
        ratio_opt = cmd.add_option("--ratio", ratio,
                                   "fraction of distinct frontier targets kept per layer");
        budget_opt = cmd.add_option("--budget-nodes", budget_nodes,
                                    "fixed new nodes per layer (overrides --ratio)");
        layers_opt = cmd.add_option("--layers", layers, "expansion layers to run");
        target_opt = cmd.add_option("--target-nodes", target_nodes,
                                    "stop at this many sampled nodes (overrides --layers)");
        minw_opt = cmd.add_option("--min-edge-weight", min_edge_weight,
                                  "ignore edges lighter than this");
    }
    void merge(ConfigFile& cfg) {
        cfg.merge(ratio_opt, "ratio", ratio);
        cfg.merge(budget_opt, "budget_nodes", budget_nodes);
        cfg.merge(layers_opt, "layers", layers);
        cfg.merge(target_opt, "target_nodes", target_nodes);
        cfg.merge(minw_opt, "min_edge_weight", min_edge_weight);
    }
    void echo(json& j) const {
        j["ratio"] = ratio;
        j["budget_nodes"] = budget_nodes;
        j["layers"] = layers;
        j["target_nodes"] = target_nodes;
        j["min_edge_weight"] = min_edge_weight;
    }
    BudgetRule budget() const {
        if (budget_nodes > 0) return FixedNodes{budget_nodes};
        return NodeRatio{ratio};
    }
    StopRule stop() const {
        if (target_nodes > 0) return TargetNodes{target_nodes};
        return MaxLayers{layers};
    }
    std::optional<double> min_weight() const {
        if (min_edge_weight < 0) throw std::invalid_argument("min edge weight must be >= 0");
        if (min_edge_weight > 0) return min_edge_weight;
        return std::nullopt;
    }
};

struct StartOpts {
    std::string seeds_flag;
    std::vector<std::string> seed_labels;
    std::size_t num_seeds = 1;
    CLI::Option* seeds_opt = nullptr;
    CLI::Option* num_opt = nullptr;

    void add_to(CLI::App& cmd) {
        seeds_opt = cmd.add_option("--seeds", seeds_flag, "comma list of start node labels");
        num_opt = cmd.add_option("--num-seeds", num_seeds,
                                 "random start nodes when --seeds is absent");
    }
    void merge(ConfigFile& cfg) {
        if (seeds_opt->count() > 0) seed_labels = split_list(seeds_flag, ',');
        cfg.merge(seeds_opt, "seeds", seed_labels);
        cfg.merge(num_opt, "num_seeds", num_seeds);
    }
    void echo(json& j) const {
        j["seeds"] = seed_labels;
        j["num_seeds"] = num_seeds;
    }
    NodeSet resolve(const Graph& g, std::uint64_t pick_seed) const {
        if (!seed_labels.empty()) return lookup_seeds(g, seed_labels);
        return pick_nodes(g, num_seeds, pick_seed);
    }
};

// ---- generate -----------------------------------------------------------

struct GenerateCmd {
    CLI::App* er = nullptr;
    CLI::App* ba = nullptr;
    CLI::App* sbm = nullptr;

    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t attach = 0;
    std::string sizes;
    double p_in = 0.0;
    double p_out = 0.0;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string config_path;

    struct Kind {
        CLI::Option* a = nullptr;
        CLI::Option* b = nullptr;
        CLI::Option* c = nullptr;
        CLI::Option* seed = nullptr;
        CLI::Option* out = nullptr;
        CLI::Option* config = nullptr;
    } er_opts, ba_opts, sbm_opts;

    void add_to(CLI::App& app) {
        CLI::App* gen = app.add_subcommand("generate", "write a synthetic graph");
        gen->require_subcommand(1);

        er = gen->add_subcommand("er", "Erdos-Renyi G(n,m)");
        er_opts.a = er->add_option("--nodes", nodes, "node count");
        er_opts.b = er->add_option("--edges", edges, "edge count");
        er_opts.seed = er->add_option("--seed", seed, "random seed");
        er_opts.out = er->add_option("--out", out_path, "output edge list path");
        er_opts.config = er->add_option("--config", config_path, "json config; flags override");

        ba = gen->add_subcommand("ba", "Barabasi-Albert preferential attachment");
        ba_opts.a = ba->add_option("--nodes", nodes, "node count");
        ba_opts.b = ba->add_option("--attach", attach, "edges per new node");
        ba_opts.seed = ba->add_option("--seed", seed, "random seed");
        ba_opts.out = ba->add_option("--out", out_path, "output edge list path");
        ba_opts.config = ba->add_option("--config", config_path, "json config; flags override");

        sbm = gen->add_subcommand("sbm", "stochastic block model");
        sbm_opts.a = sbm->add_option("--sizes", sizes, "block sizes, e.g. 500x10 or 100,200");
        sbm_opts.b = sbm->add_option("--pin", p_in, "within-block edge probability");
        sbm_opts.c = sbm->add_option("--pout", p_out, "cross-block edge probability");
        sbm_opts.seed = sbm->add_option("--seed", seed, "random seed");
        sbm_opts.out = sbm->add_option("--out", out_path, "output edge list path");
        sbm_opts.config = sbm->add_option("--config", config_path, "json config; flags override");
    }

    void run(std::ostream& out) {
        json echo;
        Graph g;
        if (*er) {
            ConfigFile cfg;
            cfg.load(er_opts.config, config_path, "generate er");
            cfg.merge(er_opts.a, "nodes", nodes);
            cfg.merge(er_opts.b, "edges", edges);
            cfg.merge(er_opts.seed, "seed", seed);
            cfg.merge(er_opts.out, "out", out_path);
            cfg.finish();
            echo["command"] = "generate er";
            echo["nodes"] = nodes;
            echo["edges"] = edges;
            g = erdos_renyi(nodes, edges, seed);
        } else if (*ba) {
            ConfigFile cfg;
            cfg.load(ba_opts.config, config_path, "generate ba");
            cfg.merge(ba_opts.a, "nodes", nodes);
            cfg.merge(ba_opts.b, "attach", attach);
            cfg.merge(ba_opts.seed, "seed", seed);
            cfg.merge(ba_opts.out, "out", out_path);
            cfg.finish();
            echo["command"] = "generate ba";
            echo["nodes"] = nodes;
            echo["attach"] = attach;
            g = barabasi_albert(nodes, attach, seed);
        } else {
            ConfigFile cfg;
            cfg.load(sbm_opts.config, config_path, "generate sbm");
            cfg.merge(sbm_opts.a, "sizes", sizes);
            cfg.merge(sbm_opts.b, "pin", p_in);
            cfg.merge(sbm_opts.c, "pout", p_out);
            cfg.merge(sbm_opts.seed, "seed", seed);
            cfg.merge(sbm_opts.out, "out", out_path);
            cfg.finish();
            echo["command"] = "generate sbm";
            echo["sizes"] = sizes;
            echo["pin"] = p_in;
            echo["pout"] = p_out;
            if (sizes.empty()) throw UsageError("--sizes is required");
            g = stochastic_block_model(parse_sizes(sizes), p_in, p_out, seed);
        }
        echo["seed"] = seed;
        echo["out"] = out_path;
        if (out_path.empty()) throw UsageError("--out is required");
        write_config_echo(out_path + ".run.json", echo);
        write_edge_list_file(g, out_path);
        out << "wrote " << out_path << ": " << g.node_count() << " nodes, " << g.edge_count()
            << " edges\n";
    }
};

// ---- sample ---------------------------------------------------------------

struct SampleCmd {
    CLI::App* cmd = nullptr;
    InputOpts in;
    KnobOpts knobs;
    StartOpts starts;
    std::string method;
    double alpha = 0.0;
    double gamma = 0.0;
    double forward_prob = 0.7;
    bool fetch_node_info = false;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string config_path;
    CLI::Option *method_opt, *alpha_opt, *gamma_opt, *fwd_opt, *fetch_opt, *seed_opt, *out_opt,
        *config_opt;

    void add_to(CLI::App& app) {
        cmd = app.add_subcommand("sample", "run one sampler and write the sampled graph");
        in.add_to(*cmd);
        method_opt = cmd->add_option(
            "--method", method,
            "snowball|uni_edge|fireball|hubball|coreball|expander|mhrw|forestfire");
        alpha_opt = cmd->add_option("--alpha", alpha, "source degree exponent (hubball)");
        gamma_opt = cmd->add_option("--gamma", gamma, "target feature exponent");
        fwd_opt = cmd->add_option("--forward-prob", forward_prob,
                                  "spread probability (fireball, forestfire)");
        knobs.add_to(*cmd);
        starts.add_to(*cmd);
        fetch_opt = cmd->add_flag("--fetch-node-info", fetch_node_info,
                                  "bill one extra request per expanded node");
        seed_opt = cmd->add_option("--seed", seed, "master random seed");
        out_opt = cmd->add_option("--out", out_dir, "output directory");
        config_opt = cmd->add_option("--config", config_path, "json config; flags override");
    }

    std::optional<double> flag_param(const std::string& name) const {
        if (name == "hubball") return alpha;
        if (name == "coreball" || name == "expander") return gamma;
        if (name == "fireball" || name == "forestfire") return forward_prob;
        return std::nullopt;
    }

    void run(std::ostream& out) {
        ConfigFile cfg;
        cfg.load(config_opt, config_path, "sample");
        in.merge(cfg);
        cfg.merge(method_opt, "method", method);
        cfg.merge(alpha_opt, "alpha", alpha);
        cfg.merge(gamma_opt, "gamma", gamma);
        cfg.merge(fwd_opt, "forward_prob", forward_prob);
        knobs.merge(cfg);
        starts.merge(cfg);
        cfg.merge(fetch_opt, "fetch_node_info", fetch_node_info);
        cfg.merge(seed_opt, "seed", seed);
        cfg.merge(out_opt, "out", out_dir);
        cfg.finish();
        if (out_dir.empty()) throw UsageError("--out is required");

        json echo;
        echo["command"] = "sample";
        in.echo(echo);
        echo["method"] = method;
        echo["alpha"] = alpha;
        echo["gamma"] = gamma;
        echo["forward_prob"] = forward_prob;
        knobs.echo(echo);
        starts.echo(echo);
        echo["fetch_node_info"] = fetch_node_info;
        echo["seed"] = seed;
        echo["out"] = out_dir;

        Graph g = in.load();
        fs::create_directories(out_dir);
        write_config_echo(fs::path(out_dir) / "config.json", echo);

        MethodSpec spec = parse_method_spec(method);
        if (!spec.param) spec.param = flag_param(spec.name);
        NodeSet start_set = starts.resolve(g, derive_seed(seed, 0));
        SampleResult res = run_method(g, spec, start_set, knobs.budget(), knobs.stop(),
                                      knobs.min_weight(), in.weighted, fetch_node_info,
                                      derive_seed(seed, 1));

        EdgeListFormat out_fmt;
        out_fmt.weighted = in.weighted;
        write_edge_list_file(res.sampled_graph, (fs::path(out_dir) / "sampled_edges.txt").string(),
                             out_fmt);

        std::string layer_rows = "layer,node\n";
        for (std::size_t k = 0; k < res.layers.size(); ++k)
            for (NodeId v : res.layers[k])
                layer_rows += std::to_string(k) + "," + csv_safe_label(g, v) + "\n";
        write_text_file(fs::path(out_dir) / "layers.csv", layer_rows);

        std::map<std::string, double> summary{
            {"edges", static_cast<double>(res.sampled_graph.edge_count())},
            {"frontier_exhausted", res.frontier_exhausted ? 1.0 : 0.0},
            {"layers", static_cast<double>(res.layers.size())},
            {"nodes", static_cast<double>(res.sampled_graph.node_count())},
            {"requests", static_cast<double>(res.request_count)},
            {"step_cap_hit", res.step_cap_hit ? 1.0 : 0.0},
        };
        std::string summary_rows = "metric,value\n";
        for (const auto& [k, v] : summary) summary_rows += k + "," + format_double(v) + "\n";
        write_text_file(fs::path(out_dir) / "summary.csv", summary_rows);

        out << method << ": " << res.sampled_graph.node_count() << " nodes, "
            << res.sampled_graph.edge_count() << " edges, " << res.request_count
            << " requests\n";
    }
};

// ---- compare ----------------------------------------------------------------

struct CompareCmd {
    CLI::App* cmd = nullptr;
    InputOpts in;
    KnobOpts knobs;
    StartOpts starts;
    std::string methods_flag;
    std::vector<std::string> methods;
    std::size_t runs = 1;
    double coverage = 0.8;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string config_path;
    CLI::Option *methods_opt, *runs_opt, *coverage_opt, *seed_opt, *out_opt, *config_opt;

    void add_to(CLI::App& app) {
        cmd = app.add_subcommand("compare", "evaluate samplers against the original graph");
        in.add_to(*cmd);
        methods_opt = cmd->add_option("--methods", methods_flag,
                                      "comma list, e.g. snowball,coreball:2,forestfire:0.7,full");
        knobs.add_to(*cmd);
        starts.add_to(*cmd);
        runs_opt = cmd->add_option("--runs", runs, "sampling repetitions for ivip mean/std");
        coverage_opt = cmd->add_option("--coverage", coverage,
                                       "fraction of nodes the largest communities must cover");
        seed_opt = cmd->add_option("--seed", seed, "master random seed");
        out_opt = cmd->add_option("--out", out_dir, "output directory");
        config_opt = cmd->add_option("--config", config_path, "json config; flags override");
    }

    void run(std::ostream& out) {
        ConfigFile cfg;
        cfg.load(config_opt, config_path, "compare");
        in.merge(cfg);
        if (methods_opt->count() > 0) methods = split_list(methods_flag, ',');
        cfg.merge(methods_opt, "methods", methods);
        knobs.merge(cfg);
        starts.merge(cfg);
        cfg.merge(runs_opt, "runs", runs);
        cfg.merge(coverage_opt, "coverage", coverage);
        cfg.merge(seed_opt, "seed", seed);
        cfg.merge(out_opt, "out", out_dir);
        cfg.finish();
        if (methods.empty()) throw UsageError("--methods is required");
        if (runs == 0) throw UsageError("--runs must be positive");
        if (out_dir.empty()) throw UsageError("--out is required");

        json echo;
        echo["command"] = "compare";
        in.echo(echo);
        echo["methods"] = methods;
        knobs.echo(echo);
        starts.echo(echo);
        echo["runs"] = runs;
        echo["coverage"] = coverage;
        echo["seed"] = seed;
        echo["out"] = out_dir;

        Graph g = in.load();
        fs::create_directories(out_dir);
        write_config_echo(fs::path(out_dir) / "config.json", echo);

        Partition communities = louvain(g, derive_seed(seed, 0));

        std::string table;
        {
            std::ostringstream os;
            write_histogram_csv(g.degree_histogram(), os);
            write_text_file(fs::path(out_dir) / "hist_original.csv", os.str());
        }

        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            MethodSpec spec = parse_method_spec(methods[mi]);
            std::vector<double> ivips;
            MetricReport first_report;
            std::size_t first_nodes = 0, first_edges = 0;
            std::uint64_t first_requests = 0;
            for (std::size_t r = 0; r < runs; ++r) {
                std::uint64_t run_master = derive_seed(seed, 1 + mi * runs + r);
                NodeSet start_set = starts.resolve(g, derive_seed(run_master, 0));
                SampleResult res =
                    run_method(g, spec, start_set, knobs.budget(), knobs.stop(),
                               knobs.min_weight(), in.weighted, false, derive_seed(run_master, 1));
                MetricReport report = compare_report(g, res, communities, coverage);
                ivips.push_back(report.values.at("ivip"));
                if (r == 0) {
                    first_report = report;
                    first_nodes = res.sampled_graph.node_count();
                    first_edges = res.sampled_graph.edge_count();
                    first_requests = res.request_count;
                }
            }
            double mean = std::accumulate(ivips.begin(), ivips.end(), 0.0) /
                          static_cast<double>(ivips.size());
            double sd = 0.0;
            if (ivips.size() > 1) {
                double ss = 0.0;
                for (double x : ivips) ss += (x - mean) * (x - mean);
                sd = std::sqrt(ss / static_cast<double>(ivips.size() - 1));
            }

            if (table.empty()) {
                table = "method,nodes,edges,requests";
                for (const auto& [key, value] : first_report.values) table += "," + key;
                table += ",ivip_mean,ivip_std\n";
            }
            table += methods[mi] + "," + std::to_string(first_nodes) + "," +
                     std::to_string(first_edges) + "," + std::to_string(first_requests);
            for (const auto& [key, value] : first_report.values) table += "," + format_double(value);
            table += "," + format_double(mean) + "," + format_double(sd) + "\n";

            std::ostringstream os;
            write_histogram_csv(first_report.sampled_degrees, os);
            write_text_file(fs::path(out_dir) / ("hist_" + spec.file_tag + ".csv"), os.str());

            out << methods[mi] << ": ivip_mean=" << format_double(mean)
                << " ivip_std=" << format_double(sd) << "\n";
        }
        write_text_file(fs::path(out_dir) / "metrics.csv", table);
    }
};

// ---- visits ----------------------------------------------------------------

struct VisitsCmd {
    CLI::App* cmd = nullptr;
    InputOpts in;
    KnobOpts knobs;
    std::string method;
    double alpha = 0.0;
    double gamma = 0.0;
    double forward_prob = 0.7;
    std::size_t runs = 10;
    std::size_t seeds_per_run = 1;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string config_path;
    CLI::Option *method_opt, *alpha_opt, *gamma_opt, *fwd_opt, *runs_opt, *spr_opt, *seed_opt,
        *out_opt, *config_opt;

    void add_to(CLI::App& app) {
        cmd = app.add_subcommand("visits",
                                 "visit probability per degree bin over repeated runs");
        in.add_to(*cmd);
        method_opt = cmd->add_option("--method", method, "spikyball method, e.g. hubball:0");
        alpha_opt = cmd->add_option("--alpha", alpha, "source degree exponent (hubball)");
        gamma_opt = cmd->add_option("--gamma", gamma, "target feature exponent");
        fwd_opt = cmd->add_option("--forward-prob", forward_prob, "spread probability (fireball)");
        knobs.add_to(*cmd);
        runs_opt = cmd->add_option("--runs", runs, "number of repetitions");
        spr_opt = cmd->add_option("--seeds-per-run", seeds_per_run, "random start nodes per run");
        seed_opt = cmd->add_option("--seed", seed, "master random seed");
        out_opt = cmd->add_option("--out", out_dir, "output directory");
        config_opt = cmd->add_option("--config", config_path, "json config; flags override");
    }

    void run(std::ostream& out) {
        ConfigFile cfg;
        cfg.load(config_opt, config_path, "visits");
        in.merge(cfg);
        cfg.merge(method_opt, "method", method);
        cfg.merge(alpha_opt, "alpha", alpha);
        cfg.merge(gamma_opt, "gamma", gamma);
        cfg.merge(fwd_opt, "forward_prob", forward_prob);
        knobs.merge(cfg);
        cfg.merge(runs_opt, "runs", runs);
        cfg.merge(spr_opt, "seeds_per_run", seeds_per_run);
        cfg.merge(seed_opt, "seed", seed);
        cfg.merge(out_opt, "out", out_dir);
        cfg.finish();
        if (out_dir.empty()) throw UsageError("--out is required");

        json echo;
        echo["command"] = "visits";
        in.echo(echo);
        echo["method"] = method;
        echo["alpha"] = alpha;
        echo["gamma"] = gamma;
        echo["forward_prob"] = forward_prob;
        knobs.echo(echo);
        echo["runs"] = runs;
        echo["seeds_per_run"] = seeds_per_run;
        echo["seed"] = seed;
        echo["out"] = out_dir;

        Graph g = in.load();
        fs::create_directories(out_dir);
        write_config_echo(fs::path(out_dir) / "config.json", echo);

        MethodSpec spec = parse_method_spec(method);
        if (!spec.param) {
            if (spec.name == "hubball") spec.param = alpha;
            if (spec.name == "coreball" || spec.name == "expander") spec.param = gamma;
            if (spec.name == "fireball") spec.param = forward_prob;
        }
        SamplerConfig run_cfg = make_spiky_config(spec, knobs.budget(), knobs.stop(),
                                                  knobs.min_weight(), in.weighted, false, seed);
        VisitReport report = visit_probability(g, run_cfg, runs, seeds_per_run, seed);

        // lowest integer degree falling in each populated bin
        std::map<int, std::size_t> bin_low;
        for (NodeId v = 0; v < g.node_count(); ++v) {
            std::size_t d = g.neighbor_count(v);
            if (d == 0) continue;
            int bin = static_cast<int>(std::floor(10 * std::log10(static_cast<double>(d))));
            auto it = bin_low.find(bin);
            if (it == bin_low.end() || d < it->second) bin_low[bin] = d;
        }
        std::string rows = "degree_bin_low,mean_visits,ci95\n";
        for (const auto& [bin, stats] : report.bins)
            rows += std::to_string(bin_low.at(bin)) + "," + format_double(stats.mean) + "," +
                    format_double(stats.ci95) + "\n";
        write_text_file(fs::path(out_dir) / "visits.csv", rows);
        out << "visits: " << report.bins.size() << " bins over " << runs << " runs\n";
    }
};

// ---- sweep ----------------------------------------------------------------

struct SweepCmd {
    CLI::App* cmd = nullptr;
    InputOpts in;
    KnobOpts knobs;
    StartOpts starts;
    std::string family;
    std::string exponents_flag;
    std::vector<double> exponents;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string config_path;
    CLI::Option *family_opt, *exp_opt, *seed_opt, *out_opt, *config_opt;

    void add_to(CLI::App& app) {
        cmd = app.add_subcommand("sweep", "degree histograms across an exponent range");
        in.add_to(*cmd);
        family_opt = cmd->add_option("--family", family, "hubball|coreball|expander");
        exp_opt = cmd->add_option("--exponents", exponents_flag,
                                  "comma list of exponents, e.g. --exponents=-2,-1,0,1,2");
        knobs.add_to(*cmd);
        starts.add_to(*cmd);
        seed_opt = cmd->add_option("--seed", seed, "master random seed");
        out_opt = cmd->add_option("--out", out_dir, "output directory");
        config_opt = cmd->add_option("--config", config_path, "json config; flags override");
    }

    void run(std::ostream& out) {
        ConfigFile cfg;
        cfg.load(config_opt, config_path, "sweep");
        in.merge(cfg);
        cfg.merge(family_opt, "family", family);
        if (exp_opt->count() > 0) {
            exponents.clear();
            for (const std::string& tok : split_list(exponents_flag, ','))
                exponents.push_back(parse_number(tok));
        }
        cfg.merge(exp_opt, "exponents", exponents);
        knobs.merge(cfg);
        starts.merge(cfg);
        cfg.merge(seed_opt, "seed", seed);
        cfg.merge(out_opt, "out", out_dir);
        cfg.finish();
        if (family != "hubball" && family != "coreball" && family != "expander")
            throw UsageError("--family must be hubball, coreball or expander");
        if (exponents.empty()) throw UsageError("--exponents is required");
        if (out_dir.empty()) throw UsageError("--out is required");

        json echo;
        echo["command"] = "sweep";
        in.echo(echo);
        echo["family"] = family;
        echo["exponents"] = exponents;
        knobs.echo(echo);
        starts.echo(echo);
        echo["seed"] = seed;
        echo["out"] = out_dir;

        Graph g = in.load();
        fs::create_directories(out_dir);
        write_config_echo(fs::path(out_dir) / "config.json", echo);

        // same start nodes for every exponent so the sweep isolates the knob
        NodeSet start_set = starts.resolve(g, derive_seed(seed, 0));
        for (std::size_t i = 0; i < exponents.size(); ++i) {
            MethodSpec spec{family, exponents[i], ""};
            SampleResult res =
                run_method(g, spec, start_set, knobs.budget(), knobs.stop(), knobs.min_weight(),
                           in.weighted, false, derive_seed(seed, 1 + i));
            std::string tag = family + "_" + format_double(exponents[i]);
            std::ostringstream sampled;
            write_histogram_csv(res.sampled_graph.degree_histogram(), sampled);
            write_text_file(fs::path(out_dir) / (tag + "_sampled.csv"), sampled.str());
            std::ostringstream original;
            write_histogram_csv(g.degree_histogram(res.node_set()), original);
            write_text_file(fs::path(out_dir) / (tag + "_original.csv"), original.str());
            out << tag << ": " << res.sampled_graph.node_count() << " nodes\n";
        }
    }
};

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"spikyball graph exploration sampling toolkit"};
    app.require_subcommand(1);

    GenerateCmd generate;
    SampleCmd sample;
    CompareCmd compare;
    VisitsCmd visits;
    SweepCmd sweep;
    generate.add_to(app);
    sample.add_to(app);
    compare.add_to(app);
    visits.add_to(app);
    sweep.add_to(app);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*generate.er || *generate.ba || *generate.sbm)
            generate.run(out);
        else if (*sample.cmd)
            sample.run(out);
        else if (*compare.cmd)
            compare.run(out);
        else if (*visits.cmd)
            visits.run(out);
        else if (*sweep.cmd)
            sweep.run(out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        // parse failures, bad labels, unwritable paths: data problems
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace spiky
