#include "subcount/augmentation.hpp"

#include <algorithm>
#include <bit>
#include <cassert>

#include "subcount/errors.hpp"

namespace subcount {

AugmentedState::AugmentedState(int extra_levels, int initial_cap, std::uint64_t seed,
                               CapPolicy policy)
    : h_(extra_levels) {
    if (h_ < 0 || h_ > 31)
        throw GraphError("augmentation level count out of range (0..31): " +
                         std::to_string(extra_levels));
    levels_.reserve(static_cast<std::size_t>(h_) + 1);
    for (int i = 0; i <= h_; ++i) {
        // Distinct seeds so tie coins are independent across levels.
        levels_.emplace_back(initial_cap, seed + 0x9e3779b97f4a7c15ull * (i + 1), policy);
    }
    queue_.resize(static_cast<std::size_t>(h_) + 1);
}

std::vector<DirectedChange> AugmentedState::insert_edge(VertexId u, VertexId v, Color c) {
    if (c == kFraternalColor)
        throw GraphError("host edge color must be >= 1");
    if (u == v)
        throw GraphError("self-loop rejected: " + std::to_string(u));
    if (levels_[0].has_pair(u, v))
        throw GraphError("edge already present: " + std::to_string(u) + "-" + std::to_string(v));
    batch_.clear();
    ev_buf_.clear();
    levels_[0].insert(u, v, ev_buf_);
    convert_events(0, c);
    run_cascade();
    return std::move(batch_);
}

std::vector<DirectedChange> AugmentedState::delete_edge(VertexId u, VertexId v) {
    if (!levels_[0].has_pair(u, v))
        throw GraphError("edge not present: " + std::to_string(u) + "-" + std::to_string(v));
    batch_.clear();
    OrientationEvent ev = levels_[0].erase(u, v);
    apply_delete_change(ev.from, ev.to, 0);
    run_cascade();
    return std::move(batch_);
}

std::vector<DirectedChange> AugmentedState::recolor_edge(VertexId u, VertexId v, Color c) {
    if (c == kFraternalColor)
        throw GraphError("host edge color must be >= 1");
    auto dir = levels_[0].orientation(u, v);
    if (!dir)
        throw GraphError("edge not present: " + std::to_string(u) + "-" + std::to_string(v));
    auto [from, to] = *dir;
    // Fork structure ignores colors, so only the level-0 edge record changes;
    // no witness or queue work is needed.
    Color old = union_.remove_edge(from, to, 0);
    union_.add_edge(from, to, c, 0);
    batch_.clear();
    batch_.push_back({ChangeKind::Delete, from, to, old, 0});
    batch_.push_back({ChangeKind::Insert, from, to, c, 0});
    return std::move(batch_);
}

std::vector<DirectedChange> AugmentedState::init_from(const ColoredGraph& g) {
    if (union_.edge_count() != 0)
        throw GraphError("init_from requires an empty state");
    std::vector<DirectedChange> all;
    for (const ColoredEdge& e : g.edges()) {
        auto part = insert_edge(e.u, e.v, e.color);
        all.insert(all.end(), part.begin(), part.end());
    }
    return all;
}

std::uint64_t AugmentedState::fork_witness_count(int level, VertexId u, VertexId v) const {
    assert(level >= 1 && level <= h_);
    const std::uint64_t pair = pair_key(u, v);
    std::uint64_t total = 0;
    for (int l = 0; l < level; ++l) {
        auto it = witness_.find(witness_key(pair, l));
        if (it != witness_.end()) total += it->second;
    }
    return total;
}

int AugmentedState::in_degree_budget() const {
    int total = 0;
    for (const auto& o : levels_) total += o.cap();
    return total;
}

AugmentedState::Stats AugmentedState::stats() const {
    Stats s = stats_;
    for (const auto& o : levels_) {
        s.flips_total += o.flip_count();
        s.rebuilds_total += o.rebuild_count();
    }
    return s;
}

void AugmentedState::apply_insert_change(VertexId from, VertexId to, Color color,
                                         std::uint8_t level) {
    // New common-out-neighbor witnesses pair `from` with every existing
    // in-neighbor of `to`; walk the in-list before the edge joins it.
    for (const auto& e : union_.in_list(to)) {
        if (e.from == from) continue;
        const int m = std::max<int>(e.level, level);
        if (m + 1 <= h_) bump_witness(pair_key(from, e.from), m, +1);
    }
    union_.add_edge(from, to, color, level);
    pairs_[pair_key(from, to)].level_mask |= 1u << level;
    recheck(pair_key(from, to));
    batch_.push_back({ChangeKind::Insert, from, to, color, level});
}

void AugmentedState::apply_delete_change(VertexId from, VertexId to, std::uint8_t level) {
    const Color color = union_.remove_edge(from, to, level);
    for (const auto& e : union_.in_list(to)) {
        if (e.from == from) continue;
        const int m = std::max<int>(e.level, level);
        if (m + 1 <= h_) bump_witness(pair_key(from, e.from), m, -1);
    }
    auto it = pairs_.find(pair_key(from, to));
    assert(it != pairs_.end());
    it->second.level_mask &= ~(1u << level);
    recheck(pair_key(from, to));
    batch_.push_back({ChangeKind::Delete, from, to, color, level});
}

void AugmentedState::bump_witness(std::uint64_t pair, int lvl, int delta) {
    ++stats_.witness_updates;
    const std::uint64_t key = witness_key(pair, lvl);
    if (delta > 0) {
        if (++witness_[key] == 1) {
            pairs_[pair].witness_mask |= 1u << lvl;
            recheck(pair);
        }
    } else {
        auto it = witness_.find(key);
        assert(it != witness_.end() && it->second > 0);
        if (--it->second == 0) {
            witness_.erase(it);
            auto pit = pairs_.find(pair);
            assert(pit != pairs_.end());
            pit->second.witness_mask &= ~(1u << lvl);
            recheck(pair);
        }
    }
}

void AugmentedState::recheck(std::uint64_t pair) {
    auto it = pairs_.find(pair);
    assert(it != pairs_.end());
    PairRec& rec = it->second;
    const std::uint32_t fork_mask = rec.level_mask & ~1u;
    std::uint32_t target = 0;
    // A pair is a fork exactly when it is not host-adjacent and has a
    // witness; its level is one past the lowest witness level.
    if (!(rec.level_mask & 1u) && rec.witness_mask != 0) {
        const int l = std::countr_zero(rec.witness_mask);
        if (l + 1 <= h_) target = 1u << (l + 1);
    }
    std::uint32_t need = (fork_mask ^ target) & ~rec.queued_mask;
    while (need != 0) {
        const int lvl = std::countr_zero(need);
        need &= need - 1;
        assert(lvl >= current_pass_);
        rec.queued_mask |= 1u << lvl;
        queue_[lvl].push_back(pair);
    }
    if (rec.level_mask == 0 && rec.witness_mask == 0 && rec.queued_mask == 0)
        pairs_.erase(it);
}

void AugmentedState::run_cascade() {
    for (current_pass_ = 1; current_pass_ <= h_; ++current_pass_) {
        auto& q = queue_[current_pass_];
        // Reorientation transients may append to the live pass's queue; the
        // index loop picks those entries up, and they settle as no-ops.
        for (std::size_t i = 0; i < q.size(); ++i)
            process_reconcile(q[i], current_pass_);
        q.clear();
    }
    current_pass_ = 0;
#ifndef NDEBUG
    for (const auto& q : queue_) assert(q.empty());
#endif
}

void AugmentedState::process_reconcile(std::uint64_t pair, int lvl) {
    auto it = pairs_.find(pair);
    if (it == pairs_.end()) return; // settled and reclaimed earlier this pass
    it->second.queued_mask &= ~(1u << lvl);
    const PairRec rec = it->second; // copy: emits below may rehash pairs_
    const std::uint32_t fork_mask = rec.level_mask & ~1u;
    int desired = 0; // 0 = no fork edge wanted
    if (!(rec.level_mask & 1u) && rec.witness_mask != 0) {
        const int l = std::countr_zero(rec.witness_mask);
        if (l + 1 <= h_) desired = l + 1;
    }
    const auto a = static_cast<VertexId>(pair >> 32);
    const auto b = static_cast<VertexId>(pair & 0xffffffffu);
    if ((fork_mask >> lvl) & 1u) {
        if (desired != lvl) emit_erase_level(lvl, a, b);
    } else if (desired == lvl) {
        // A fork edge migrating down arrives here before the stale copy's
        // own pass; delete the stale copies first so the change feed never
        // re-inserts a live triple.
        std::uint32_t stale = fork_mask;
        while (stale != 0) {
            const int t = std::countr_zero(stale);
            stale &= stale - 1;
            assert(t > lvl);
            emit_erase_level(t, a, b);
        }
        emit_insert_level(lvl, a, b);
    }
    auto pit = pairs_.find(pair);
    if (pit != pairs_.end() && pit->second.level_mask == 0 &&
        pit->second.witness_mask == 0 && pit->second.queued_mask == 0)
        pairs_.erase(pit);
}

void AugmentedState::emit_erase_level(int lvl, VertexId a, VertexId b) {
    OrientationEvent ev = levels_[lvl].erase(a, b);
    assert(ev.kind == OrientationEventKind::Removed);
    ++stats_.fork_deletes;
    apply_delete_change(ev.from, ev.to, static_cast<std::uint8_t>(lvl));
}

void AugmentedState::emit_insert_level(int lvl, VertexId a, VertexId b) {
    ev_buf_.clear();
    levels_[lvl].insert(a, b, ev_buf_);
    ++stats_.fork_inserts;
    convert_events(lvl, kFraternalColor);
}

void AugmentedState::convert_events(int lvl, Color added_color) {
    const auto level = static_cast<std::uint8_t>(lvl);
    for (const OrientationEvent& ev : ev_buf_) {
        switch (ev.kind) {
        case OrientationEventKind::Added:
            apply_insert_change(ev.from, ev.to, added_color, level);
            break;
        case OrientationEventKind::Flipped: {
            auto stored = union_.color_of(ev.from, ev.to, level);
            if (!stored) throw InternalError("flip of an edge missing from the union digraph");
            const Color c = *stored;
            apply_delete_change(ev.from, ev.to, level);
            apply_insert_change(ev.to, ev.from, c, level);
            break;
        }
        case OrientationEventKind::Removed:
            // insert() never reports removals.
            throw InternalError("unexpected removal event during insert");
        }
    }
}

} // namespace subcount
