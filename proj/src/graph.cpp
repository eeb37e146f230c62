#include "subcount/graph.hpp"

#include <algorithm>
#include <functional>
#include <tuple>

namespace subcount {

namespace {

std::string vertex_str(VertexId v) { return std::to_string(v); }

std::string edge_str(VertexId u, VertexId v) {
    return "(" + std::to_string(u) + "," + std::to_string(v) + ")";
}

} // namespace

VertexId ColoredGraph::add_vertex() {
    if (!free_.empty()) {
        // Free ids are kept as a min-heap so the smallest id is recycled first.
        std::pop_heap(free_.begin(), free_.end(), std::greater<VertexId>());
        VertexId id = free_.back();
        free_.pop_back();
        alive_[id] = true;
        ++vertex_count_;
        return id;
    }
    VertexId id = static_cast<VertexId>(adj_.size());
    adj_.emplace_back();
    alive_.push_back(true);
    ++vertex_count_;
    return id;
}

void ColoredGraph::add_vertex(VertexId id) {
    // Ids index arrays directly and must pack into 24 bits for edge keys.
    if (id >= (1u << 24))
        throw GraphError("vertex id " + vertex_str(id) + " too large (ids must be dense)");
    if (id < alive_.size() && alive_[id])
        throw GraphError("duplicate vertex " + vertex_str(id));
    if (id >= alive_.size()) {
        for (VertexId gap = static_cast<VertexId>(alive_.size()); gap < id; ++gap)
            free_.push_back(gap);
        std::make_heap(free_.begin(), free_.end(), std::greater<VertexId>());
        adj_.resize(id + 1);
        alive_.resize(id + 1, false);
    } else {
        // id is on the free list; drop it from there.
        auto it = std::find(free_.begin(), free_.end(), id);
        free_.erase(it);
        std::make_heap(free_.begin(), free_.end(), std::greater<VertexId>());
    }
    alive_[id] = true;
    ++vertex_count_;
}

void ColoredGraph::remove_vertex(VertexId id) {
    check_vertex(id);
    if (!adj_[id].empty())
        throw GraphError("vertex " + vertex_str(id) + " is not isolated");
    alive_[id] = false;
    free_.push_back(id);
    std::push_heap(free_.begin(), free_.end(), std::greater<VertexId>());
    --vertex_count_;
}

bool ColoredGraph::has_vertex(VertexId id) const {
    return id < alive_.size() && alive_[id];
}

std::vector<VertexId> ColoredGraph::vertices() const {
    std::vector<VertexId> out;
    out.reserve(vertex_count_);
    for (VertexId v = 0; v < alive_.size(); ++v)
        if (alive_[v]) out.push_back(v);
    return out;
}

void ColoredGraph::check_vertex(VertexId v) const {
    if (!has_vertex(v)) throw GraphError("unknown vertex " + vertex_str(v));
}

void ColoredGraph::add_edge(VertexId u, VertexId v, Color c) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw GraphError("loop on vertex " + vertex_str(u));
    if (c == kFraternalColor) throw GraphError("color 0 is reserved");
    std::uint64_t key = pair_key(u, v);
    if (edges_.count(key)) throw GraphError("duplicate edge " + edge_str(u, v));
    VertexId a = std::min(u, v), b = std::max(u, v);
    EdgeRec rec;
    rec.color = c;
    rec.pos_u = static_cast<std::uint32_t>(adj_[a].size());
    rec.pos_v = static_cast<std::uint32_t>(adj_[b].size());
    adj_[a].push_back({b, c});
    adj_[b].push_back({a, c});
    edges_.emplace(key, rec);
}

void ColoredGraph::detach(VertexId owner, std::uint32_t pos) {
    auto& list = adj_[owner];
    VertexId moved = list.back().id;
    if (pos + 1 != list.size()) {
        list[pos] = list.back();
        auto& mrec = edges_.at(pair_key(owner, moved));
        if (owner < moved)
            mrec.pos_u = pos;
        else
            mrec.pos_v = pos;
    }
    list.pop_back();
}

Color ColoredGraph::remove_edge(VertexId u, VertexId v) {
    check_vertex(u);
    check_vertex(v);
    auto it = edges_.find(pair_key(u, v));
    if (it == edges_.end()) throw GraphError("missing edge " + edge_str(u, v));
    EdgeRec rec = it->second;
    edges_.erase(it);
    VertexId a = std::min(u, v), b = std::max(u, v);
    detach(a, rec.pos_u);
    detach(b, rec.pos_v);
    return rec.color;
}

Color ColoredGraph::recolor_edge(VertexId u, VertexId v, Color c) {
    check_vertex(u);
    check_vertex(v);
    if (c == kFraternalColor) throw GraphError("color 0 is reserved");
    auto it = edges_.find(pair_key(u, v));
    if (it == edges_.end()) throw GraphError("missing edge " + edge_str(u, v));
    Color old = it->second.color;
    it->second.color = c;
    VertexId a = std::min(u, v), b = std::max(u, v);
    adj_[a][it->second.pos_u].color = c;
    adj_[b][it->second.pos_v].color = c;
    return old;
}

bool ColoredGraph::has_edge(VertexId u, VertexId v) const {
    return edges_.count(pair_key(u, v)) != 0;
}

std::optional<Color> ColoredGraph::edge_color(VertexId u, VertexId v) const {
    auto it = edges_.find(pair_key(u, v));
    if (it == edges_.end()) return std::nullopt;
    return it->second.color;
}

std::vector<ColoredEdge> ColoredGraph::edges() const {
    std::vector<ColoredEdge> out;
    out.reserve(edges_.size());
    for (const auto& [key, rec] : edges_) {
        VertexId u = static_cast<VertexId>(key >> 32);
        VertexId v = static_cast<VertexId>(key & 0xffffffffu);
        out.push_back({u, v, rec.color});
    }
    std::sort(out.begin(), out.end(), [](const ColoredEdge& x, const ColoredEdge& y) {
        return std::tie(x.u, x.v) < std::tie(y.u, y.v);
    });
    return out;
}

const std::vector<ColoredGraph::Neighbor>& ColoredGraph::neighbors(VertexId v) const {
    check_vertex(v);
    return adj_[v];
}

std::size_t ColoredGraph::degree(VertexId v) const {
    check_vertex(v);
    return adj_[v].size();
}

Color ColoredGraph::max_color() const {
    Color m = 0;
    for (const auto& [key, rec] : edges_) {
        (void)key;
        m = std::max(m, rec.color);
    }
    return m;
}

int ColoredGraph::degeneracy() const {
    if (vertex_count_ == 0) return 0;
    std::size_t n = alive_.size();
    std::vector<std::uint32_t> deg(n, 0);
    std::size_t maxdeg = 0;
    for (VertexId v = 0; v < n; ++v) {
        if (!alive_[v]) continue;
        deg[v] = static_cast<std::uint32_t>(adj_[v].size());
        maxdeg = std::max<std::size_t>(maxdeg, deg[v]);
    }
    // Bucket queue keyed by current degree; peel a minimum-degree vertex each
    // round (smallest id first within a bucket, for determinism).
    std::vector<std::vector<VertexId>> bucket(maxdeg + 1);
    for (VertexId v = 0; v < n; ++v)
        if (alive_[v]) bucket[deg[v]].push_back(v);
    std::vector<bool> peeled(n, false);
    std::size_t cursor = 0;
    int result = 0;
    std::size_t remaining = vertex_count_;
    while (remaining > 0) {
        while (cursor <= maxdeg && bucket[cursor].empty()) ++cursor;
        // Lazily deleted entries may leave stale buckets; re-check occupants.
        VertexId v = bucket[cursor].back();
        bucket[cursor].pop_back();
        if (peeled[v] || deg[v] != cursor) continue;
        peeled[v] = true;
        --remaining;
        result = std::max<int>(result, static_cast<int>(cursor));
        for (const Neighbor& nb : adj_[v]) {
            if (peeled[nb.id]) continue;
            std::uint32_t d = --deg[nb.id];
            bucket[d].push_back(nb.id);
            if (d < cursor) cursor = d;
        }
    }
    return result;
}

} // namespace subcount
