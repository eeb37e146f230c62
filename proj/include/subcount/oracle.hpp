#pragma once

#include <array>
#include <optional>
#include <vector>

#include "subcount/count.hpp"
#include "subcount/digraph.hpp"
#include "subcount/graph.hpp"
#include "subcount/pattern.hpp"

namespace subcount {

// Brute-force reference counters. These recount from scratch by backtracking
// and exist to independently check the incremental structures; they are
// exponential in the pattern size and should only run within the limits
// below unless a caller explicitly opts out.
struct OracleLimits {
    int max_pattern_vertices = 6;
    std::size_t max_host_vertices = 64;
    bool unchecked = false; // skip both limits (benchmark recounts)
};

// Number of color-preserving vertex maps of h into g (edges map to equal-
// colored edges; endpoints of an edge never collapse).
Count hom_count(const Pattern& h, const ColoredGraph& g, const OracleLimits& lim = {});
// Injective homomorphisms (vertex-distinguishing copies).
Count sub_count(const Pattern& h, const ColoredGraph& g, const OracleLimits& lim = {});
// Injective homomorphisms whose images induce no extra edges.
Count isub_count(const Pattern& h, const ColoredGraph& g, const OracleLimits& lim = {});

// Plain directed host for digraph-level checks; `level` fields are ignored.
struct DigraphData {
    std::vector<VertexId> vertices;
    std::vector<DirectedEdge> edges;
};

// Directed color-preserving homomorphism count, with optional per-pattern-
// vertex pins (pins[i] fixes the image of pattern vertex i).
Count dihom_count(const DirectedPattern& h, const DigraphData& g, const OracleLimits& lim = {});
Count dihom_count_pinned(const DirectedPattern& h, const DigraphData& g,
                         const std::array<std::optional<VertexId>, kMaxPatternVertices>& pins,
                         const OracleLimits& lim = {});

} // namespace subcount
