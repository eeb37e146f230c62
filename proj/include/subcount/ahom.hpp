#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "subcount/compiler.hpp"
#include "subcount/count.hpp"
#include "subcount/digraph.hpp"

namespace subcount {

// Key of a proper clan's table entry: the images of its ghosts, in order.
struct GhostKey {
    std::array<VertexId, kMaxPatternVertices - 1> w{};
    std::uint8_t len = 0;
    friend bool operator==(const GhostKey&, const GhostKey&) = default;
};

struct GhostKeyHash {
    std::size_t operator()(const GhostKey& k) const {
        std::uint64_t h = 1469598103934665603ull;
        for (int i = 0; i < k.len; ++i) {
            h ^= k.w[i];
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h ^ k.len);
    }
};

using ClanTable = std::unordered_map<GhostKey, Count, GhostKeyHash>;

// Incremental directed-homomorphism counter for one compiled pattern.
//
// For every proper clan C of the pattern's spine, table(C) maps ghost images
// to the number of homomorphisms of C's ghost extension that realize them;
// roots() maps host vertices to the homomorphisms of the full pattern rooted
// there, and total() is their sum. Every change to the shared view is pushed
// through the clan skeletons: insertions walk clans largest first (split-off
// sub-clan tables still hold pre-change values), deletions smallest first
// (they already hold post-change values), exactly mirroring each other so an
// insert followed by its delete restores every table bit for bit. Zero
// entries are erased, keeping tables proportional to realized images.
class AHomEngine {
public:
    explicit AHomEngine(std::shared_ptr<const CompiledPattern> cp);

    // Applies one union-digraph change. The pool guarantees the view already
    // contains an inserted arc and still contains a deleted one.
    void process(const ColoredDigraphView& view, const DirectedChange& ch);

    const Count& total() const { return total_; }
    Count root_count(VertexId v) const;
    const std::unordered_map<VertexId, Count>& roots() const { return roots_; }
    const ClanTable& table(std::size_t clan_index) const { return tables_[clan_index]; }
    const CompiledPattern& blueprint() const { return *cp_; }

    // Candidate images examined since construction (work instrumentation).
    std::uint64_t enum_steps() const { return enum_steps_; }

    // Bit-exact state comparison: tables, roots and total (not instrumentation).
    friend bool operator==(const AHomEngine& a, const AHomEngine& b) {
        return a.tables_ == b.tables_ && a.roots_ == b.roots_ && a.total_ == b.total_;
    }

private:
    void run_skeleton(const ColoredDigraphView& view, const CompiledClan& clan,
                      const UpdateSkeleton& sk, VertexId x, VertexId y, bool insert);
    void dfs(const ColoredDigraphView& view, const CompiledClan& clan, const UpdateSkeleton& sk,
             std::size_t step, VertexId x, VertexId y, bool insert,
             std::array<VertexId, kMaxPatternVertices>& img);
    void leaf(const CompiledClan& clan, const UpdateSkeleton& sk, VertexId x, VertexId y,
              bool insert, const std::array<VertexId, kMaxPatternVertices>& img);
    VertexId resolve(SlotRef ref, VertexId x, VertexId y,
                     const std::array<VertexId, kMaxPatternVertices>& img) const {
        if (ref.kind == SlotRef::X) return x;
        if (ref.kind == SlotRef::Y) return y;
        return img[ref.idx];
    }

    std::shared_ptr<const CompiledPattern> cp_;
    std::vector<ClanTable> tables_; // indexed like cp_->clans; full clan unused
    std::unordered_map<VertexId, Count> roots_;
    Count total_;
    std::uint64_t enum_steps_ = 0;
};

// Owns the shared engine view and fans every change out to all engines.
// Engines only read the view while processing, so they run in parallel.
class EnginePool {
public:
    std::size_t add_engine(std::shared_ptr<const CompiledPattern> cp);

    // Applies the change to the view and all engines, in the order the
    // engines' update rule requires (view first on insert, last on delete).
    void apply(const DirectedChange& ch);

    const ColoredDigraphView& view() const { return view_; }
    std::size_t size() const { return engines_.size(); }
    AHomEngine& engine(std::size_t i) { return engines_[i]; }
    const AHomEngine& engine(std::size_t i) const { return engines_[i]; }
    std::uint64_t enum_steps() const;

private:
    void run_engines(const DirectedChange& ch);

    ColoredDigraphView view_;
    std::vector<AHomEngine> engines_;
};

} // namespace subcount
