#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "subcount/pattern.hpp"

namespace subcount {

// Compilation limits. Pattern counting machinery is exponential in pattern
// size by nature; these bounds turn runaway inputs into clean errors.
struct CompileLimits {
    int max_pattern_vertices = 5;
    std::size_t max_generated_members = 1'000'000;
};

// ---------------------------------------------------------------------------
// Induced-subgraph -> subgraph: inclusion-exclusion over colored supergraphs.
// isub(P, G) = sum over terms of sign * sub(term, G), where the terms range
// over all ways of adding a set of missing edges with any of colors 1..k.
struct SupergraphTerm {
    Pattern graph;
    std::int64_t sign; // (-1)^(number of added edges)
};
std::vector<SupergraphTerm> induced_to_sub_terms(const Pattern& p, Color k);

// ---------------------------------------------------------------------------
// Subgraph -> homomorphism: signed sum over the poset of partitions whose
// parts are independent and pairwise color-consistent.
// sub(P, G) = sum over terms of coeff * hom(term, G).
struct ProjectionTerm {
    Pattern graph;
    std::int64_t coeff;
};
std::vector<ProjectionTerm> sub_to_hom_terms(const Pattern& p);

// ---------------------------------------------------------------------------
// Homomorphism classes of a connected pattern.
//
// hom(F, G) equals the sum over every distinct contracted recolored depth-h
// orientation closure of F (h = C(|V(F)|, 2) - 2 fraternal rounds, which
// reaches the closure fixed point) of the directed homomorphism count of that
// member into the maintained union digraph. Members are grouped into
// isomorphism classes; each class contributes multiplicity * dihom(rep).
struct MemberClass {
    DirectedPattern rep;
    std::int64_t multiplicity;
    std::string canonical; // isomorphism key of rep
};
// rounds = -1 uses the fixed-point depth for f.n; tests may pass other depths.
std::vector<MemberClass> member_classes(const Pattern& f, Color k,
                                        std::size_t member_guard, int rounds = -1);

// ---------------------------------------------------------------------------
// Engine blueprints: spine tree, clans, and per-change update skeletons.

// Where a mapped pattern vertex's host image comes from during an update:
// the changed arc's tail (X) or head (Y), or a backtracking step's image.
struct SlotRef {
    enum Kind : std::uint8_t { X, Y, Step };
    Kind kind = X;
    std::uint8_t idx = 0; // step index when kind == Step
};

// Runtime test "the view must contain (resolve(from), resolve(to), color)";
// when forbid_changed_pair is set the arc must additionally not land on the
// changed pair itself (those maps are handled by the X-subsets that own them).
struct ArcCheck {
    SlotRef from, to;
    Color color;
    bool forbid_changed_pair;
};

// One backtracking step: candidates are tails of view in-edges of the
// resolved anchor image with the matching color.
struct EnumStep {
    std::uint8_t vertex; // pattern vertex placed by this step (diagnostics)
    SlotRef anchor;
    Color arc_color;
    bool anchor_forbid; // anchor arc has the changed color (never part of X)
    std::vector<ArcCheck> checks;
};

// A sub-clan split off by the update; its table entry is looked up with the
// ghost images resolved from the enumeration.
struct ChildRef {
    std::uint32_t clan_index;
    std::vector<SlotRef> ghost_slots;
};

struct UpdateSkeleton {
    std::vector<ArcCheck> pinned_checks; // checks between pinned vertices
    std::vector<EnumStep> steps;
    std::vector<ChildRef> children;
    std::vector<SlotRef> ghost_slots; // proper clan: key of the updated entry
    SlotRef root_slot;                // full clan: image of the spine root
};

struct CompiledClan {
    std::uint8_t members = 0; // vertex bitmask
    std::uint8_t root = 0;
    bool full = false;
    std::vector<std::uint8_t> ghosts; // ordered, tree parent of root first
    std::vector<DirectedPatternEdge> star_arcs;
    // Skeletons keyed by the changed arc's color.
    std::unordered_map<Color, std::vector<UpdateSkeleton>> skeletons;
};

// A member-class representative compiled for incremental maintenance:
// spine tree, clan table (decreasing size, full clan first), and skeletons.
struct CompiledPattern {
    DirectedPattern h;
    std::array<std::int8_t, kMaxPatternVertices> tree_parent{}; // -1 at root
    std::uint8_t root = 0;
    std::vector<CompiledClan> clans;
};

// Builds the spine tree and validates that every arc's endpoints are
// comparable in it; throws InternalError when h is not elder/connected or a
// structural self-check fails.
std::shared_ptr<const CompiledPattern> compile_directed(const DirectedPattern& h);

// ---------------------------------------------------------------------------
// Full query compilation against a process-wide cache.

// value = n^vertex_power * product over factors of
//         (sum over (engine, mult) pairs of mult * engine_total).
struct HomPlan {
    int vertex_power = 0;
    std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> factors;
};

struct LinearPlan {
    std::vector<std::pair<std::int64_t, HomPlan>> terms;
};

// Deduplicates compiled member classes by isomorphism key and hands out
// dense engine indices; one engine instance per distinct class.
class ClassInterner {
public:
    std::size_t intern(const std::string& canonical,
                       std::shared_ptr<const CompiledPattern> compiled);
    const std::vector<std::shared_ptr<const CompiledPattern>>& entries() const {
        return entries_;
    }

private:
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::shared_ptr<const CompiledPattern>> entries_;
};

// Compiled plans for one named query pattern.
struct PatternPlans {
    LinearPlan induced, sub, hom;
};

// Compiles the three plans for p with colors 1..k, interning every needed
// engine into `interner`. Expensive per-component work (member classes and
// their compiled blueprints) is cached process-wide, keyed by canonical
// component and k.
PatternPlans compile_pattern(const Pattern& p, Color k, ClassInterner& interner,
                             const CompileLimits& limits);

// Fixed-point augmentation depth needed by a pattern with n vertices.
int augmentation_depth(int n);

// Serialization of an undirected pattern minimized over relabelings.
std::string canonical_form(const Pattern& p);

} // namespace subcount
