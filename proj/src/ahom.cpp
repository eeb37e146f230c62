#include "subcount/ahom.hpp"

#include <exception>

#include "subcount/errors.hpp"

namespace subcount {

AHomEngine::AHomEngine(std::shared_ptr<const CompiledPattern> cp) : cp_(std::move(cp)) {
    tables_.resize(cp_->clans.size());
}

Count AHomEngine::root_count(VertexId v) const {
    auto it = roots_.find(v);
    return it == roots_.end() ? Count(0) : it->second;
}

void AHomEngine::process(const ColoredDigraphView& view, const DirectedChange& ch) {
    bool insert = ch.kind == ChangeKind::Insert;
    // Insertions update enclosing clans before the sub-clans their deltas
    // read; deletions the other way around. The clan list is sorted largest
    // first, so this is a forward or backward sweep.
    if (insert) {
        for (const auto& clan : cp_->clans) {
            auto it = clan.skeletons.find(ch.color);
            if (it == clan.skeletons.end()) continue;
            for (const auto& sk : it->second) run_skeleton(view, clan, sk, ch.from, ch.to, true);
        }
    } else {
        for (auto rit = cp_->clans.rbegin(); rit != cp_->clans.rend(); ++rit) {
            auto it = rit->skeletons.find(ch.color);
            if (it == rit->skeletons.end()) continue;
            for (const auto& sk : it->second) run_skeleton(view, *rit, sk, ch.from, ch.to, false);
        }
    }
}

void AHomEngine::run_skeleton(const ColoredDigraphView& view, const CompiledClan& clan,
                              const UpdateSkeleton& sk, VertexId x, VertexId y, bool insert) {
    std::array<VertexId, kMaxPatternVertices> img{};
    for (const auto& chk : sk.pinned_checks) {
        VertexId rf = resolve(chk.from, x, y, img);
        VertexId rt = resolve(chk.to, x, y, img);
        if (!view.has_edge(rf, rt, chk.color)) return;
        if (chk.forbid_changed_pair && rf == x && rt == y) return;
    }
    dfs(view, clan, sk, 0, x, y, insert, img);
}

void AHomEngine::dfs(const ColoredDigraphView& view, const CompiledClan& clan,
                     const UpdateSkeleton& sk, std::size_t step, VertexId x, VertexId y,
                     bool insert, std::array<VertexId, kMaxPatternVertices>& img) {
    if (step == sk.steps.size()) {
        leaf(clan, sk, x, y, insert, img);
        return;
    }
    const EnumStep& st = sk.steps[step];
    VertexId anchor = resolve(st.anchor, x, y, img);
    for (const auto& entry : view.in_list(anchor)) {
        ++enum_steps_;
        if (entry.color != st.arc_color) continue;
        VertexId z = entry.from;
        if (st.anchor_forbid && z == x && anchor == y) continue;
        img[step] = z;
        bool ok = true;
        for (const auto& chk : st.checks) {
            VertexId rf = resolve(chk.from, x, y, img);
            VertexId rt = resolve(chk.to, x, y, img);
            if (!view.has_edge(rf, rt, chk.color) ||
                (chk.forbid_changed_pair && rf == x && rt == y)) {
                ok = false;
                break;
            }
        }
        if (ok) dfs(view, clan, sk, step + 1, x, y, insert, img);
    }
}

void AHomEngine::leaf(const CompiledClan& clan, const UpdateSkeleton& sk, VertexId x, VertexId y,
                      bool insert, const std::array<VertexId, kMaxPatternVertices>& img) {
    Count delta(1);
    for (const auto& child : sk.children) {
        GhostKey key;
        key.len = static_cast<std::uint8_t>(child.ghost_slots.size());
        for (std::size_t i = 0; i < child.ghost_slots.size(); ++i)
            key.w[i] = resolve(child.ghost_slots[i], x, y, img);
        const ClanTable& table = tables_[child.clan_index];
        auto it = table.find(key);
        if (it == table.end()) return; // zero factor: nothing to add or remove
        delta *= it->second;
    }
    if (clan.full) {
        VertexId r = resolve(sk.root_slot, x, y, img);
        if (insert) {
            roots_[r] += delta;
            total_ += delta;
            if (roots_[r] == Count(0)) roots_.erase(r);
        } else {
            roots_[r] -= delta;
            total_ -= delta;
            if (roots_[r] == Count(0)) roots_.erase(r);
        }
        return;
    }
    GhostKey key;
    key.len = static_cast<std::uint8_t>(sk.ghost_slots.size());
    for (std::size_t i = 0; i < sk.ghost_slots.size(); ++i)
        key.w[i] = resolve(sk.ghost_slots[i], x, y, img);
    std::size_t clan_index = static_cast<std::size_t>(&clan - cp_->clans.data());
    ClanTable& table = tables_[clan_index];
    Count& slot = table[key];
    slot = insert ? slot + delta : slot - delta;
    if (slot == Count(0)) table.erase(key);
}

// ---------------------------------------------------------------------------

std::size_t EnginePool::add_engine(std::shared_ptr<const CompiledPattern> cp) {
    if (view_.edge_count() != 0)
        throw InternalError("engine pool: engines must be added before any change is applied");
    engines_.emplace_back(std::move(cp));
    return engines_.size() - 1;
}

void EnginePool::apply(const DirectedChange& ch) {
    if (ch.kind == ChangeKind::Insert) {
        view_.apply(ch);
        run_engines(ch);
    } else {
        run_engines(ch);
        view_.apply(ch);
    }
}

void EnginePool::run_engines(const DirectedChange& ch) {
    std::exception_ptr failure = nullptr;
#if defined(SUBCOUNT_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < engines_.size(); ++i) {
        try {
            engines_[i].process(view_, ch);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
#else
    for (std::size_t i = 0; i < engines_.size(); ++i) {
        try {
            engines_[i].process(view_, ch);
        } catch (...) {
            if (!failure) failure = std::current_exception();
        }
    }
#endif
    if (failure) std::rethrow_exception(failure);
}

std::uint64_t EnginePool::enum_steps() const {
    std::uint64_t sum = 0;
    for (const auto& e : engines_) sum += e.enum_steps();
    return sum;
}

} // namespace subcount
