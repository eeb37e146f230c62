#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "subcount/ahom.hpp"
#include "subcount/augmentation.hpp"
#include "subcount/compiler.hpp"
#include "subcount/count.hpp"
#include "subcount/graph.hpp"

namespace subcount {

struct IndexOptions {
    std::uint64_t seed = 0x5eed;
    // Strict mode refuses updates that would exceed the current in-degree
    // caps (SparsityError) instead of widening them; a refusal mid-cascade
    // invalidates the index.
    bool strict = false;
    std::uint8_t max_pattern_vertices = 5;
    std::size_t max_generated_members = 1'000'000;
};

// Dynamic exact counts of small colored patterns in a sparse host graph.
//
// Owns the host graph, its augmentation cascade, and one incremental
// counting engine per distinct compiled pattern class. Updates are O(poly
// log) amortized on sparse hosts; every count_* query is pure arithmetic
// over stored engine totals and the vertex count.
class ISubIndex {
public:
    // Registers all patterns up front (they fix the cascade depth), then
    // replays g edge by edge. Colors used anywhere must lie in 1..k.
    ISubIndex(const ColoredGraph& g, const std::vector<std::pair<std::string, Pattern>>& patterns,
              Color k, IndexOptions opts = {});

    void add_edge(VertexId u, VertexId v, Color c);
    void remove_edge(VertexId u, VertexId v);
    void recolor_edge(VertexId u, VertexId v, Color c);
    void add_vertex(VertexId id);
    void remove_isolated_vertex(VertexId id);

    Count count_induced(const std::string& name) const;
    Count count_sub(const std::string& name) const;
    Count count_hom(const std::string& name) const;

    const ColoredGraph& host() const { return host_; }
    const AugmentedState& cascade() const { return aug_; }
    Color color_count() const { return k_; }
    std::size_t engine_count() const { return pool_.size(); }
    bool has_pattern(const std::string& name) const { return plans_.count(name) != 0; }
    std::vector<std::string> pattern_names() const;

    // Instrumented work counters for update-cost measurements.
    struct WorkStats {
        std::uint64_t flips = 0;
        std::uint64_t fork_inserts = 0;
        std::uint64_t fork_deletes = 0;
        std::uint64_t enum_steps = 0;
        std::uint64_t total() const { return flips + fork_inserts + fork_deletes + enum_steps; }
    };
    WorkStats work() const;

private:
    const PatternPlans& plans_for(const std::string& name) const;
    Count evaluate(const LinearPlan& plan) const;
    void feed(const std::vector<DirectedChange>& batch);
    void check_live() const;

    Color k_;
    IndexOptions opts_;
    ColoredGraph host_;
    AugmentedState aug_;
    EnginePool pool_;
    std::unordered_map<std::string, PatternPlans> plans_;
    bool poisoned_ = false;
};

} // namespace subcount
