#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subcount/graph.hpp"

namespace subcount {

// Patterns are tiny fixed graphs (at most 8 vertices, ids 0..n-1), so vertex
// sets fit in one byte-sized bitmask throughout.
inline constexpr int kMaxPatternVertices = 8;

struct PatternEdge {
    std::uint8_t u, v; // u < v
    Color color;
    friend auto operator<=>(const PatternEdge&, const PatternEdge&) = default;
};

// Undirected edge-colored query pattern.
struct Pattern {
    std::uint8_t n = 0;
    std::vector<PatternEdge> edges; // sorted, unique pairs

    friend bool operator==(const Pattern&, const Pattern&) = default;
};

struct DirectedPatternEdge {
    std::uint8_t from, to;
    Color color;
    friend auto operator<=>(const DirectedPatternEdge&, const DirectedPatternEdge&) = default;
};

// Directed edge-colored pattern; at most one arc per unordered vertex pair
// (orientations and their fraternal closures never produce anti-parallel
// arcs, and quotients that would are rejected as unsatisfiable).
struct DirectedPattern {
    std::uint8_t n = 0;
    std::vector<DirectedPatternEdge> edges; // sorted by (from, to)

    friend bool operator==(const DirectedPattern&, const DirectedPattern&) = default;
};

// Throws GraphError on out-of-range ids, duplicate pairs, color-0 edges, or
// more than kMaxPatternVertices vertices.
void validate_pattern(const Pattern& p);

// adjacency_masks(p)[v] has bit w set iff {v, w} is an edge.
std::array<std::uint8_t, kMaxPatternVertices> adjacency_masks(const Pattern& p);
bool pattern_connected(const Pattern& p);
Color pattern_max_color(const Pattern& p);
// Vertex bitmasks of the connected components, ascending by lowest member.
std::vector<std::uint8_t> pattern_components(const Pattern& p);
// Induced sub-pattern on the masked vertices, relabeled to 0..popcount-1 in
// increasing original order.
Pattern induced_pattern(const Pattern& p, std::uint8_t mask);

struct DirectedMasks {
    std::array<std::uint8_t, kMaxPatternVertices> out{}, in{}, adj{};
};
DirectedMasks directed_masks(const DirectedPattern& d);

// Pairs (u, v), u < v, that are non-adjacent but have a common out-neighbor.
std::vector<std::pair<std::uint8_t, std::uint8_t>> fork_pairs(const DirectedPattern& d);
bool is_elder(const DirectedPattern& d);
bool weakly_connected(const DirectedPattern& d);

// Exact byte serialization of the labeled digraph (dedup key).
std::string serialize(const DirectedPattern& d);
// Serialization minimized over all vertex relabelings (isomorphism key).
std::string canonical_form(const DirectedPattern& d);

// Quotient by the given vertex partition (block_of[v] = block id, ids must be
// 0..block_count-1, each block non-empty). Blocks are relabeled in increasing
// order of their smallest member. Returns nothing when the quotient would
// need a loop, anti-parallel arcs, or two colors on one ordered pair.
std::optional<DirectedPattern> quotient(const DirectedPattern& d,
                                        const std::array<std::uint8_t, kMaxPatternVertices>& block_of,
                                        int block_count);

// Weakly connected components as vertex bitmasks, ascending by lowest member.
std::vector<std::uint8_t> directed_components(const DirectedPattern& d);
// Induced sub-digraph on the masked vertices, relabeled like induced_pattern.
DirectedPattern induced_digraph(const DirectedPattern& d, std::uint8_t mask);

} // namespace subcount
