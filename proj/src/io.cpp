#include "spiky/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>
#include <unordered_map>

#include "spiky/errors.hpp"
#include "spiky/metrics.hpp"

namespace spiky {

std::string format_double(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return {};
    auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> tokenize(const std::string& line, const EdgeListFormat& fmt,
                                  std::size_t lineno) {
    std::vector<std::string> toks;
    if (fmt.delimiter == Delimiter::comma) {
        std::size_t pos = 0;
        while (true) {
            auto next = line.find(',', pos);
            std::string tok = trim(line.substr(pos, next - pos));
            if (tok.empty()) throw ParseError("empty field", lineno);
            toks.push_back(std::move(tok));
            if (next == std::string::npos) break;
            pos = next + 1;
        }
    } else {
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok) toks.push_back(tok);
    }
    return toks;
}

double parse_weight(const std::string& tok, std::size_t lineno) {
    double w = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), w);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError("bad weight '" + tok + "'", lineno);
    if (!(w > 0)) throw ParseError("weight must be positive, got '" + tok + "'", lineno);
    return w;
}

// recognizes "nodes N" in a comment body; anything else is ignored
void maybe_nodes_header(const std::string& body, GraphBuilder& b, std::size_t lineno) {
    std::istringstream ss(body);
    std::string word;
    if (!(ss >> word) || word != "nodes") return;
    std::string num;
    if (!(ss >> num)) return;
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), n);
    if (ec != std::errc{} || ptr != num.data() + num.size())
        throw ParseError("bad node count '" + num + "'", lineno);
    b.require_node_count(n);
}

}  // namespace

Graph load_edge_list(std::istream& in, const EdgeListFormat& fmt, LoadStats* stats) {
    GraphBuilder b;
    std::unordered_map<std::string, NodeId> ids;
    auto intern = [&](const std::string& tok) {
        auto [it, fresh] = ids.try_emplace(tok, static_cast<NodeId>(ids.size()));
        if (fresh) b.set_label(it->second, tok);
        return it->second;
    };

    std::string line;
    std::size_t lineno = 0;
    const std::size_t want = fmt.weighted ? 3 : 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        if (line[first] == fmt.comment_prefix) {
            maybe_nodes_header(line.substr(first + 1), b, lineno);
            continue;
        }
        auto toks = tokenize(line, fmt, lineno);
        if (toks.size() != want)
            throw ParseError("expected " + std::to_string(want) + " fields, got " +
                                 std::to_string(toks.size()),
                             lineno);
        NodeId u = intern(toks[0]);
        NodeId v = intern(toks[1]);
        double w = fmt.weighted ? parse_weight(toks[2], lineno) : 1.0;
        b.add_edge(u, v, w);
    }
    if (b.node_count() == 0) throw ParseError("empty input: no edges and no node count");
    if (stats) {
        stats->self_loops_dropped = b.self_loops_dropped();
        stats->duplicates_merged = b.duplicates_merged();
    }
    return b.build();
}

Graph load_edge_list_file(const std::string& path, const EdgeListFormat& fmt,
                          LoadStats* stats) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return load_edge_list(in, fmt, stats);
}

void write_edge_list(const Graph& g, std::ostream& out, const EdgeListFormat& fmt) {
    const char d = fmt.delimiter == Delimiter::comma ? ',' : ' ';
    out << fmt.comment_prefix << " nodes " << g.node_count() << "\n";
    for (const EdgeRecord& e : g.edges()) {
        std::string su = g.label(e.source), sv = g.label(e.target);
        for (const std::string& s : {su, sv})
            if (s.find_first_of({d, ' ', '\t', '\n'}) != std::string::npos ||
                (!s.empty() && s[0] == fmt.comment_prefix))
                throw std::invalid_argument("label '" + s + "' not writable in this format");
        out << su << d << sv;
        if (fmt.weighted) out << d << format_double(e.weight);
        out << "\n";
    }
}

void write_edge_list_file(const Graph& g, const std::string& path,
                          const EdgeListFormat& fmt) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    write_edge_list(g, out, fmt);
}

void write_metrics_csv(const MetricReport& report, std::ostream& out) {
    out << "metric,value\n";
    for (const auto& [name, value] : report.values)
        out << name << ',' << format_double(value) << "\n";
}

void write_histogram_csv(const DegreeHistogram& hist, std::ostream& out) {
    out << "degree,count\n";
    for (const auto& [degree, count] : hist) out << degree << ',' << count << "\n";
}

}  // namespace spiky
