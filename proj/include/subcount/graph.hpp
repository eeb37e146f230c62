#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "subcount/errors.hpp"

namespace subcount {

using VertexId = std::uint32_t;
using Color = std::uint16_t;

// Color 0 is reserved for edges manufactured by the maintenance layers; host
// graphs and patterns use colors 1..k.
inline constexpr Color kFraternalColor = 0;

inline std::uint64_t pair_key(VertexId a, VertexId b) {
    if (a > b) { VertexId t = a; a = b; b = t; }
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

inline std::uint64_t directed_key(VertexId from, VertexId to) {
    return (static_cast<std::uint64_t>(from) << 32) | to;
}

struct ColoredEdge {
    VertexId u, v; // u < v
    Color color;
    friend bool operator==(const ColoredEdge&, const ColoredEdge&) = default;
};

// Undirected edge-colored multigraph-free graph with stable dense vertex ids.
//
// Vertices are small integers; removed ids go on a free list and are recycled
// by add_vertex(), so long-lived instances stay array-indexable. Adjacency is
// stored as per-vertex vectors with O(1) amortized edge insertion/removal
// (positions are tracked per edge endpoint).
class ColoredGraph {
public:
    ColoredGraph() = default;

    // Allocates the smallest recycled id, or a fresh one.
    VertexId add_vertex();
    // Adds a vertex with a caller-chosen id (grows storage as needed).
    void add_vertex(VertexId id);
    // Removes an isolated vertex; throws GraphError if edges are incident.
    void remove_vertex(VertexId id);
    bool has_vertex(VertexId id) const;
    std::size_t vertex_count() const { return vertex_count_; }
    std::vector<VertexId> vertices() const; // sorted

    void add_edge(VertexId u, VertexId v, Color c);
    Color remove_edge(VertexId u, VertexId v);          // returns old color
    Color recolor_edge(VertexId u, VertexId v, Color c); // returns old color
    bool has_edge(VertexId u, VertexId v) const;
    std::optional<Color> edge_color(VertexId u, VertexId v) const;
    std::size_t edge_count() const { return edges_.size(); }
    std::vector<ColoredEdge> edges() const; // sorted by (u, v)

    struct Neighbor {
        VertexId id;
        Color color;
    };
    const std::vector<Neighbor>& neighbors(VertexId v) const;
    std::size_t degree(VertexId v) const;

    // Largest color appearing on any edge (0 when edgeless).
    Color max_color() const;

    // Smallest d such that every subgraph has a vertex of degree <= d,
    // computed by bucketed min-degree peeling in O(V + E).
    int degeneracy() const;

private:
    struct EdgeRec {
        Color color;
        std::uint32_t pos_u; // index of v in adj_[u]
        std::uint32_t pos_v; // index of u in adj_[v]
    };

    void check_vertex(VertexId v) const;
    void detach(VertexId owner, std::uint32_t pos);

    std::vector<std::vector<Neighbor>> adj_;
    std::vector<bool> alive_;
    std::vector<VertexId> free_;
    std::size_t vertex_count_ = 0;
    // key = pair_key(u, v); positions refer to min(u,v) as "u".
    std::unordered_map<std::uint64_t, EdgeRec> edges_;
};

} // namespace subcount
