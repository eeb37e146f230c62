#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "subcount/graph.hpp"

namespace subcount {

enum class ChangeKind : std::uint8_t { Insert, Delete };

// One directed-edge mutation of the maintained union digraph. A reorientation
// is always two changes: Delete of the old direction, then Insert of the new.
// `level` records which maintenance layer owns the edge (0 = host edges,
// which keep their host color; higher levels always carry color 0).
struct DirectedChange {
    ChangeKind kind;
    VertexId from, to;
    Color color;
    std::uint8_t level;
    friend bool operator==(const DirectedChange&, const DirectedChange&) = default;
};

struct DirectedEdge {
    VertexId from, to;
    Color color;
    std::uint8_t level;
    friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
};

// Union digraph keyed by (from, to, level), with per-vertex in-lists.
//
// Mid-update a vertex pair may briefly hold two edges on different levels
// (possibly anti-parallel); per (from, to, level) edges are always unique.
class LeveledDigraph {
public:
    struct InEntry {
        VertexId from;
        Color color;
        std::uint8_t level;
    };

    void add_edge(VertexId from, VertexId to, Color color, std::uint8_t level);
    // Returns the removed edge's color.
    Color remove_edge(VertexId from, VertexId to, std::uint8_t level);
    std::optional<Color> color_of(VertexId from, VertexId to, std::uint8_t level) const;
    std::span<const InEntry> in_list(VertexId v) const;
    std::size_t edge_count() const { return map_.size(); }
    int max_in_degree() const;
    std::vector<DirectedEdge> edges() const; // sorted by (from, to, level)

private:
    struct Slot {
        Color color;
        std::uint32_t pos; // index in in_[to]
    };
    static std::uint64_t key3(VertexId from, VertexId to, std::uint8_t level) {
        // Vertex ids are dense (< 2^24 by construction), so from/to/level pack
        // into 64 bits: 24 + 24 + 8.
        return (static_cast<std::uint64_t>(from) << 40) |
               (static_cast<std::uint64_t>(to) << 16) | level;
    }
    void ensure_vertex(VertexId v);

    std::vector<std::vector<InEntry>> in_;
    std::unordered_map<std::uint64_t, Slot> map_;
};

// Engine-facing digraph view keyed by (from, to, color), with per-vertex
// in-lists. Levels are irrelevant here: the change feed guarantees a
// (from, to, color) triple is never inserted twice without an intervening
// delete, so exact-key lookups suffice for homomorphism tests.
class ColoredDigraphView {
public:
    struct InEntry {
        VertexId from;
        Color color;
    };

    void apply(const DirectedChange& ch);
    bool has_edge(VertexId from, VertexId to, Color color) const;
    std::span<const InEntry> in_list(VertexId v) const;
    std::size_t edge_count() const { return map_.size(); }
    int max_in_degree() const;
    std::vector<DirectedEdge> edges() const; // sorted; level always 0

private:
    struct Slot {
        std::uint32_t pos;
    };
    static std::uint64_t keyc(VertexId from, VertexId to, Color color) {
        // 24 + 24 + 16 bits; ids are dense (< 2^24 by construction).
        return (static_cast<std::uint64_t>(from) << 40) |
               (static_cast<std::uint64_t>(to) << 16) | color;
    }
    void ensure_vertex(VertexId v);

    std::vector<std::vector<InEntry>> in_;
    std::unordered_map<std::uint64_t, Slot> map_;
};

} // namespace subcount
