#include "subcount/isub_index.hpp"

#include <algorithm>
#include <bit>

#include "subcount/errors.hpp"
#include "subcount/pattern.hpp"

namespace subcount {

namespace {

// The cascade must be at least as deep as the closure depth of the largest
// pattern component; deeper levels are harmless (the generated class pool is
// stable past each component's own depth).
int required_depth(const std::vector<std::pair<std::string, Pattern>>& patterns) {
    int h = 0;
    for (const auto& [name, p] : patterns) {
        validate_pattern(p);
        for (std::uint8_t mask : pattern_components(p))
            h = std::max(h, augmentation_depth(std::popcount(mask)));
    }
    return h;
}

int initial_cap(const ColoredGraph& g) { return std::max(4, 4 * g.degeneracy()); }

} // namespace

ISubIndex::ISubIndex(const ColoredGraph& g,
                     const std::vector<std::pair<std::string, Pattern>>& patterns, Color k,
                     IndexOptions opts)
    : k_(k), opts_(opts),
      aug_(required_depth(patterns), initial_cap(g), opts.seed,
           opts.strict ? CapPolicy::Strict : CapPolicy::Adaptive) {
    if (k_ == 0) throw GraphError("color count must be at least 1");
    CompileLimits limits;
    limits.max_pattern_vertices = opts.max_pattern_vertices;
    limits.max_generated_members = opts.max_generated_members;
    ClassInterner interner;
    for (const auto& [name, p] : patterns) {
        if (name.empty()) throw GraphError("pattern name must be non-empty");
        if (plans_.count(name)) throw GraphError("duplicate pattern name: " + name);
        plans_.emplace(name, compile_pattern(p, k_, interner, limits));
    }
    for (const auto& compiled : interner.entries()) (void)pool_.add_engine(compiled);

    for (const auto& e : g.edges())
        if (e.color > k_)
            throw GraphError("host edge color " + std::to_string(e.color) +
                             " exceeds declared color count " + std::to_string(k_));
    host_ = g;
    feed(aug_.init_from(host_));
}

void ISubIndex::check_live() const {
    if (poisoned_)
        throw InternalError("index invalidated by an earlier strict-mode sparsity failure");
}

void ISubIndex::feed(const std::vector<DirectedChange>& batch) {
    for (const auto& ch : batch) pool_.apply(ch);
}

void ISubIndex::add_edge(VertexId u, VertexId v, Color c) {
    check_live();
    if (c < 1 || c > k_)
        throw GraphError("edge color " + std::to_string(c) + " out of range 1.." +
                         std::to_string(k_));
    host_.add_edge(u, v, c);
    try {
        feed(aug_.insert_edge(u, v, c));
    } catch (const SparsityError&) {
        // The cascade may have partially advanced; only the host mirror can
        // be rolled back safely.
        host_.remove_edge(u, v);
        poisoned_ = true;
        throw;
    }
}

void ISubIndex::remove_edge(VertexId u, VertexId v) {
    check_live();
    host_.remove_edge(u, v);
    feed(aug_.delete_edge(u, v));
}

void ISubIndex::recolor_edge(VertexId u, VertexId v, Color c) {
    check_live();
    if (c < 1 || c > k_)
        throw GraphError("edge color " + std::to_string(c) + " out of range 1.." +
                         std::to_string(k_));
    Color old = host_.recolor_edge(u, v, c);
    if (old == c) return;
    feed(aug_.recolor_edge(u, v, c));
}

void ISubIndex::add_vertex(VertexId id) {
    check_live();
    host_.add_vertex(id);
}

void ISubIndex::remove_isolated_vertex(VertexId id) {
    check_live();
    host_.remove_vertex(id);
}

const PatternPlans& ISubIndex::plans_for(const std::string& name) const {
    check_live();
    auto it = plans_.find(name);
    if (it == plans_.end()) throw GraphError("unknown pattern name: " + name);
    return it->second;
}

Count ISubIndex::count_induced(const std::string& name) const {
    return evaluate(plans_for(name).induced);
}

Count ISubIndex::count_sub(const std::string& name) const {
    return evaluate(plans_for(name).sub);
}

Count ISubIndex::count_hom(const std::string& name) const {
    return evaluate(plans_for(name).hom);
}

Count ISubIndex::evaluate(const LinearPlan& plan) const {
    Count total(0);
    const Count nv(static_cast<long long>(host_.vertex_count()));
    for (const auto& [coeff, hp] : plan.terms) {
        Count term = Count::pow(nv, hp.vertex_power);
        for (const auto& factor : hp.factors) {
            Count s(0);
            for (const auto& [engine, mult] : factor)
                s += Count(static_cast<long long>(mult)) * pool_.engine(engine).total();
            term = term * s;
        }
        total += Count(static_cast<long long>(coeff)) * term;
    }
    return total;
}

std::vector<std::string> ISubIndex::pattern_names() const {
    std::vector<std::string> names;
    names.reserve(plans_.size());
    for (const auto& [name, plans] : plans_) names.push_back(name);
    std::sort(names.begin(), names.end());
    return names;
}

ISubIndex::WorkStats ISubIndex::work() const {
    auto s = aug_.stats();
    WorkStats w;
    w.flips = s.flips();
    w.fork_inserts = s.fork_inserts;
    w.fork_deletes = s.fork_deletes;
    w.enum_steps = pool_.enum_steps();
    return w;
}

} // namespace subcount
