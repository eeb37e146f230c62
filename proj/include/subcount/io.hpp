#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "subcount/graph.hpp"
#include "subcount/pattern.hpp"

namespace subcount {

// Text formats. All files are line-oriented, whitespace-separated, with `#`
// starting a comment that runs to end of line. Parse failures throw
// ParseError naming the 1-based line.
//
// Graph file:     `graph <k>` header, then `v <id>` and `e <u> <v> <color>`.
// Pattern file:   `pattern <name> <n>` followed by `e <u> <v> <color>` lines.
// Op script:      `+ u v c` | `- u v` | `c u v c'` | `+v id` | `-v id` | `q name`.

struct GraphFile {
    Color k = 1;
    ColoredGraph graph;
};

GraphFile read_graph_file(std::istream& in);
void write_graph_file(std::ostream& out, const ColoredGraph& g, Color k);

std::vector<std::pair<std::string, Pattern>> read_pattern_file(std::istream& in);

struct Op {
    enum class Kind { AddEdge, RemoveEdge, Recolor, AddVertex, RemoveVertex, Query };
    Kind kind;
    VertexId u = 0, v = 0;
    Color c = 0;
    std::string name; // Query only
};

std::vector<Op> read_op_script(std::istream& in);

} // namespace subcount
