#include "subcount/io.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

#include "subcount/errors.hpp"

namespace subcount {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw ParseError("line " + std::to_string(line) + ": " + what);
}

// Strips the comment tail and splits the rest into tokens.
std::vector<std::string> tokenize(const std::string& raw) {
    std::string body = raw.substr(0, raw.find('#'));
    std::istringstream ss(body);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

std::uint64_t parse_number(const std::string& tok, std::size_t line, const char* what,
                           std::uint64_t max) {
    std::uint64_t value = 0;
    if (tok.empty()) fail(line, std::string(what) + " is empty");
    for (char ch : tok) {
        if (ch < '0' || ch > '9') fail(line, std::string(what) + " is not a number: " + tok);
        value = value * 10 + static_cast<std::uint64_t>(ch - '0');
        if (value > max) fail(line, std::string(what) + " out of range: " + tok);
    }
    return value;
}

VertexId parse_vertex(const std::string& tok, std::size_t line) {
    return static_cast<VertexId>(parse_number(tok, line, "vertex id", (1u << 24) - 1));
}

Color parse_color(const std::string& tok, std::size_t line) {
    auto c = parse_number(tok, line, "color", std::numeric_limits<Color>::max());
    if (c == 0) fail(line, "color 0 is reserved");
    return static_cast<Color>(c);
}

// Runs fn(tokens, line) for every non-blank line.
template <typename Fn> void for_each_line(std::istream& in, Fn fn) {
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        auto toks = tokenize(raw);
        if (!toks.empty()) fn(toks, line);
    }
}

} // namespace

GraphFile read_graph_file(std::istream& in) {
    GraphFile gf;
    bool saw_header = false;
    for_each_line(in, [&](const std::vector<std::string>& t, std::size_t line) {
        if (!saw_header) {
            if (t[0] != "graph" || t.size() != 2) fail(line, "expected header `graph <k>`");
            gf.k = parse_color(t[1], line);
            saw_header = true;
            return;
        }
        if (t[0] == "v") {
            if (t.size() != 2) fail(line, "expected `v <id>`");
            VertexId id = parse_vertex(t[1], line);
            if (gf.graph.has_vertex(id)) fail(line, "duplicate vertex " + t[1]);
            gf.graph.add_vertex(id);
        } else if (t[0] == "e") {
            if (t.size() != 4) fail(line, "expected `e <u> <v> <color>`");
            VertexId u = parse_vertex(t[1], line), v = parse_vertex(t[2], line);
            Color c = parse_color(t[3], line);
            if (c > gf.k) fail(line, "color exceeds declared k");
            try {
                gf.graph.add_edge(u, v, c);
            } catch (const GraphError& e) {
                fail(line, e.what());
            }
        } else {
            fail(line, "unknown directive `" + t[0] + "`");
        }
    });
    if (!saw_header) throw ParseError("empty graph file: missing `graph <k>` header");
    return gf;
}

void write_graph_file(std::ostream& out, const ColoredGraph& g, Color k) {
    out << "graph " << k << "\n";
    for (VertexId v : g.vertices()) out << "v " << v << "\n";
    for (const auto& e : g.edges()) out << "e " << e.u << " " << e.v << " " << e.color << "\n";
}

std::vector<std::pair<std::string, Pattern>> read_pattern_file(std::istream& in) {
    std::vector<std::pair<std::string, Pattern>> out;
    bool open = false;
    std::string name;
    Pattern current;
    std::size_t header_line = 0;

    auto flush = [&]() {
        if (!open) return;
        std::sort(current.edges.begin(), current.edges.end());
        try {
            validate_pattern(current);
        } catch (const GraphError& e) {
            fail(header_line, "pattern `" + name + "`: " + e.what());
        }
        out.emplace_back(name, current);
        open = false;
    };

    for_each_line(in, [&](const std::vector<std::string>& t, std::size_t line) {
        if (t[0] == "pattern") {
            flush();
            if (t.size() != 3) fail(line, "expected `pattern <name> <n>`");
            name = t[1];
            auto n = parse_number(t[2], line, "vertex count", kMaxPatternVertices);
            if (n == 0) fail(line, "pattern needs at least one vertex");
            current = Pattern{static_cast<std::uint8_t>(n), {}};
            header_line = line;
            open = true;
        } else if (t[0] == "e") {
            if (!open) fail(line, "edge before any `pattern` header");
            if (t.size() != 4) fail(line, "expected `e <u> <v> <color>`");
            auto u = parse_number(t[1], line, "pattern vertex", current.n - 1);
            auto v = parse_number(t[2], line, "pattern vertex", current.n - 1);
            if (u == v) fail(line, "self-loop");
            if (u > v) std::swap(u, v);
            current.edges.push_back({static_cast<std::uint8_t>(u), static_cast<std::uint8_t>(v),
                                     parse_color(t[3], line)});
        } else {
            fail(line, "unknown directive `" + t[0] + "`");
        }
    });
    flush();
    if (out.empty()) throw ParseError("pattern file declares no patterns");
    return out;
}

std::vector<Op> read_op_script(std::istream& in) {
    std::vector<Op> ops;
    for_each_line(in, [&](const std::vector<std::string>& t, std::size_t line) {
        Op op;
        if (t[0] == "+") {
            if (t.size() != 4) fail(line, "expected `+ <u> <v> <color>`");
            op = {Op::Kind::AddEdge, parse_vertex(t[1], line), parse_vertex(t[2], line),
                  parse_color(t[3], line), {}};
        } else if (t[0] == "-") {
            if (t.size() != 3) fail(line, "expected `- <u> <v>`");
            op = {Op::Kind::RemoveEdge, parse_vertex(t[1], line), parse_vertex(t[2], line), 0, {}};
        } else if (t[0] == "c") {
            if (t.size() != 4) fail(line, "expected `c <u> <v> <color>`");
            op = {Op::Kind::Recolor, parse_vertex(t[1], line), parse_vertex(t[2], line),
                  parse_color(t[3], line), {}};
        } else if (t[0] == "+v") {
            if (t.size() != 2) fail(line, "expected `+v <id>`");
            op = {Op::Kind::AddVertex, parse_vertex(t[1], line), 0, 0, {}};
        } else if (t[0] == "-v") {
            if (t.size() != 2) fail(line, "expected `-v <id>`");
            op = {Op::Kind::RemoveVertex, parse_vertex(t[1], line), 0, 0, {}};
        } else if (t[0] == "q") {
            if (t.size() != 2) fail(line, "expected `q <name>`");
            op = {Op::Kind::Query, 0, 0, 0, t[1]};
        } else {
            fail(line, "unknown op `" + t[0] + "`");
        }
        ops.push_back(std::move(op));
    });
    return ops;
}

} // namespace subcount
