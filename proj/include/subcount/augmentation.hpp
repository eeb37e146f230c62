#pragma once

#include <cstdint>
#include <vector>

#include "subcount/digraph.hpp"
#include "subcount/graph.hpp"
#include "subcount/orientation.hpp"

namespace subcount {

// Maintains the level-0 orientation of the host graph together with h rounds
// of fraternal-augmentation levels above it, as one union digraph.
//
// Level i >= 1 holds, as an oriented edge set, exactly the fork pairs of the
// union of levels 0..i-1: pairs of distinct non-adjacent vertices with a
// common out-neighbor there. Fork membership is tracked with sparse witness
// counters (per pair and witness level), so each directed change touches only
// the in-list of its head. Every union mutation is emitted as a
// DirectedChange; replaying a state's concatenated batches from empty
// reproduces its union digraph exactly.
//
// Host edges keep their host colors; level >= 1 edges carry color 0. A
// reorientation is emitted as Delete followed by Insert. Mid-batch a pair may
// transiently hold edges at two levels; batches are ordered so that a live
// (from, to, color) triple is never re-inserted.
class AugmentedState {
public:
    struct Stats {
        std::uint64_t fork_inserts = 0;   // undirected fork-edge insertions, levels >= 1
        std::uint64_t fork_deletes = 0;   // undirected fork-edge deletions, levels >= 1
        std::uint64_t witness_updates = 0;
        std::uint64_t flips() const { return flips_total; }
        std::uint64_t flips_total = 0;    // filled in by stats()
        std::uint32_t rebuilds_total = 0; // filled in by stats()
    };

    // extra_levels = number of augmentation rounds h (levels 0..h exist).
    AugmentedState(int extra_levels, int initial_cap, std::uint64_t seed,
                   CapPolicy policy = CapPolicy::Adaptive);

    // Host-edge operations; each returns the ordered batch of union changes.
    std::vector<DirectedChange> insert_edge(VertexId u, VertexId v, Color c);
    std::vector<DirectedChange> delete_edge(VertexId u, VertexId v);
    // Emits exactly Delete + Insert of the level-0 edge (same orientation,
    // new color); fork structure is colorblind, so no other level moves.
    std::vector<DirectedChange> recolor_edge(VertexId u, VertexId v, Color c);

    // Inserts every edge of g (sorted order) into this empty state and
    // returns the concatenated batch.
    std::vector<DirectedChange> init_from(const ColoredGraph& g);

    int level_count() const { return h_ + 1; }
    const LeveledDigraph& union_digraph() const { return union_; }

    // Number of common out-neighbors of u and v in the union of levels
    // 0..level-1 (the fork witness count c_level).
    std::uint64_t fork_witness_count(int level, VertexId u, VertexId v) const;

    int level_cap(int level) const { return levels_[level].cap(); }
    int level_max_in_degree(int level) const { return levels_[level].max_in_degree(); }
    std::vector<std::pair<VertexId, VertexId>> level_oriented_edges(int level) const {
        return levels_[level].oriented_edges();
    }
    // Sum of all level caps: bound on any vertex's union in-degree.
    int in_degree_budget() const;

    Stats stats() const;

private:
    struct PairRec {
        std::uint32_t witness_mask = 0; // levels with a positive witness count
        std::uint32_t level_mask = 0;   // levels where this pair is a union edge
        std::uint32_t queued_mask = 0;  // levels whose queue holds this pair
    };

    void apply_insert_change(VertexId from, VertexId to, Color color, std::uint8_t level);
    void apply_delete_change(VertexId from, VertexId to, std::uint8_t level);
    void bump_witness(std::uint64_t pair, int lvl, int delta);
    void recheck(std::uint64_t pair);
    void run_cascade();
    void process_reconcile(std::uint64_t pair, int lvl);
    void emit_erase_level(int lvl, VertexId a, VertexId b);
    void emit_insert_level(int lvl, VertexId a, VertexId b);
    void convert_events(int lvl, Color added_color);

    static std::uint64_t witness_key(std::uint64_t pair, int lvl) {
        // pair_key uses 24-bit ids, so pair < 2^56 and 5 level bits fit.
        return (pair << 5) | static_cast<std::uint64_t>(lvl);
    }

    int h_;
    std::vector<BoundedOrientation> levels_;
    LeveledDigraph union_;
    std::unordered_map<std::uint64_t, PairRec> pairs_;
    std::unordered_map<std::uint64_t, std::uint32_t> witness_;
    std::vector<std::vector<std::uint64_t>> queue_;
    std::vector<DirectedChange> batch_;
    std::vector<OrientationEvent> ev_buf_;
    int current_pass_ = 0;
    Stats stats_;
};

} // namespace subcount
