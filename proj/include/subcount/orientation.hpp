#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "subcount/graph.hpp"

namespace subcount {

enum class OrientationEventKind : std::uint8_t { Added, Removed, Flipped };

// Added:   edge now oriented from -> to.
// Removed: edge was oriented from -> to and is gone.
// Flipped: edge was from -> to and is now to -> from.
struct OrientationEvent {
    OrientationEventKind kind;
    VertexId from, to;
    friend bool operator==(const OrientationEvent&, const OrientationEvent&) = default;
};

enum class CapPolicy : std::uint8_t {
    Adaptive, // on a stuck repair, double the cap and rebuild
    Strict,   // on a stuck repair, restore the pre-insert state and throw
};

// Dynamic edge orientation with a maintained maximum in-degree cap.
//
// Insertion orients the new edge toward the endpoint with smaller in-degree
// (seeded coin on ties) and then repairs any overfull vertex by flipping all
// of its in-edges, cascading as needed. Deletion removes exactly one oriented
// edge and never touches any other edge. Every mutation is reported through
// OrientationEvents in the exact order it was applied, so replaying an event
// stream reproduces the structure's oriented state.
class BoundedOrientation {
public:
    BoundedOrientation(int cap, std::uint64_t seed, CapPolicy policy = CapPolicy::Adaptive);

    // Appends the resulting events (one Added plus any repair Flipped) to out.
    void insert(VertexId u, VertexId v, std::vector<OrientationEvent>& out);
    OrientationEvent erase(VertexId u, VertexId v);
    // Re-orients every edge from scratch under a larger cap; emits Flipped
    // events only for edges whose direction changed.
    void rebuild(int new_cap, std::vector<OrientationEvent>& out);

    int cap() const { return cap_; }
    CapPolicy policy() const { return policy_; }
    std::size_t edge_count() const { return edges_.size(); }
    bool has_pair(VertexId u, VertexId v) const;
    // (from, to) for the stored orientation of {u, v}, if present.
    std::optional<std::pair<VertexId, VertexId>> orientation(VertexId u, VertexId v) const;
    int in_degree(VertexId v) const;
    std::span<const VertexId> in_neighbors(VertexId v) const;
    int max_in_degree() const;
    // Undirected pairs, sorted; oriented pairs (from, to) sorted by pair.
    std::vector<std::pair<VertexId, VertexId>> oriented_edges() const;

    std::uint64_t flip_count() const { return flips_; }
    std::uint32_t rebuild_count() const { return rebuilds_; }

private:
    struct Rec {
        VertexId from, to;
        std::uint32_t pos; // index of `from` in in_[to]
    };

    void ensure_vertex(VertexId v);
    void attach(VertexId from, VertexId to);
    void detach(const Rec& rec);
    // Flip-based repair starting from `start`; returns false if the flip
    // budget ran out before the cap was restored.
    bool repair(VertexId start, std::vector<OrientationEvent>& out);
    void rollback(std::vector<OrientationEvent>& out, std::size_t first);
    void rebuild_orientation(std::vector<OrientationEvent>& out);
    int peeling_degeneracy(std::vector<VertexId>& order_out) const;

    int cap_;
    CapPolicy policy_;
    std::mt19937_64 rng_;
    std::vector<std::vector<VertexId>> in_; // in_[v] = tails of edges into v
    std::unordered_map<std::uint64_t, Rec> edges_; // by pair_key
    std::uint64_t flips_ = 0;
    std::uint32_t rebuilds_ = 0;
};

} // namespace subcount
