#include "subcount/digraph.hpp"

#include <algorithm>
#include <tuple>

namespace subcount {

namespace {

std::string edge_str(VertexId from, VertexId to) {
    return "(" + std::to_string(from) + "->" + std::to_string(to) + ")";
}

} // namespace

void LeveledDigraph::ensure_vertex(VertexId v) {
    if (v >= in_.size()) in_.resize(v + 1);
}

void LeveledDigraph::add_edge(VertexId from, VertexId to, Color color, std::uint8_t level) {
    std::uint64_t key = key3(from, to, level);
    if (map_.count(key))
        throw InternalError("duplicate union edge " + edge_str(from, to) +
                            " at level " + std::to_string(level));
    ensure_vertex(std::max(from, to));
    Slot slot{color, static_cast<std::uint32_t>(in_[to].size())};
    in_[to].push_back({from, color, level});
    map_.emplace(key, slot);
}

Color LeveledDigraph::remove_edge(VertexId from, VertexId to, std::uint8_t level) {
    auto it = map_.find(key3(from, to, level));
    if (it == map_.end())
        throw InternalError("missing union edge " + edge_str(from, to) +
                            " at level " + std::to_string(level));
    Color color = it->second.color;
    std::uint32_t pos = it->second.pos;
    auto& list = in_[to];
    const InEntry moved = list.back();
    if (pos + 1 != list.size()) {
        list[pos] = moved;
        map_.at(key3(moved.from, to, moved.level)).pos = pos;
    }
    list.pop_back();
    map_.erase(it);
    return color;
}

std::optional<Color> LeveledDigraph::color_of(VertexId from, VertexId to, std::uint8_t level) const {
    auto it = map_.find(key3(from, to, level));
    if (it == map_.end()) return std::nullopt;
    return it->second.color;
}

std::span<const LeveledDigraph::InEntry> LeveledDigraph::in_list(VertexId v) const {
    static const std::vector<InEntry> empty;
    if (v >= in_.size()) return empty;
    return in_[v];
}

int LeveledDigraph::max_in_degree() const {
    std::size_t m = 0;
    for (const auto& list : in_) m = std::max(m, list.size());
    return static_cast<int>(m);
}

std::vector<DirectedEdge> LeveledDigraph::edges() const {
    std::vector<DirectedEdge> out;
    out.reserve(map_.size());
    for (VertexId to = 0; to < in_.size(); ++to)
        for (const InEntry& e : in_[to]) out.push_back({e.from, to, e.color, e.level});
    std::sort(out.begin(), out.end(), [](const DirectedEdge& a, const DirectedEdge& b) {
        return std::tie(a.from, a.to, a.level) < std::tie(b.from, b.to, b.level);
    });
    return out;
}

void ColoredDigraphView::ensure_vertex(VertexId v) {
    if (v >= in_.size()) in_.resize(v + 1);
}

void ColoredDigraphView::apply(const DirectedChange& ch) {
    std::uint64_t key = keyc(ch.from, ch.to, ch.color);
    if (ch.kind == ChangeKind::Insert) {
        if (map_.count(key))
            throw InternalError("change feed re-inserted live edge " + edge_str(ch.from, ch.to) +
                                " color " + std::to_string(ch.color));
        ensure_vertex(std::max(ch.from, ch.to));
        map_.emplace(key, Slot{static_cast<std::uint32_t>(in_[ch.to].size())});
        in_[ch.to].push_back({ch.from, ch.color});
    } else {
        auto it = map_.find(key);
        if (it == map_.end())
            throw InternalError("change feed deleted unknown edge " + edge_str(ch.from, ch.to) +
                                " color " + std::to_string(ch.color));
        std::uint32_t pos = it->second.pos;
        auto& list = in_[ch.to];
        const InEntry moved = list.back();
        if (pos + 1 != list.size()) {
            list[pos] = moved;
            map_.at(keyc(moved.from, ch.to, moved.color)).pos = pos;
        }
        list.pop_back();
        map_.erase(it);
    }
}

bool ColoredDigraphView::has_edge(VertexId from, VertexId to, Color color) const {
    return map_.count(keyc(from, to, color)) != 0;
}

std::span<const ColoredDigraphView::InEntry> ColoredDigraphView::in_list(VertexId v) const {
    static const std::vector<InEntry> empty;
    if (v >= in_.size()) return empty;
    return in_[v];
}

int ColoredDigraphView::max_in_degree() const {
    std::size_t m = 0;
    for (const auto& list : in_) m = std::max(m, list.size());
    return static_cast<int>(m);
}

std::vector<DirectedEdge> ColoredDigraphView::edges() const {
    std::vector<DirectedEdge> out;
    out.reserve(map_.size());
    for (VertexId to = 0; to < in_.size(); ++to)
        for (const InEntry& e : in_[to]) out.push_back({e.from, to, e.color, 0});
    std::sort(out.begin(), out.end(), [](const DirectedEdge& a, const DirectedEdge& b) {
        return std::tie(a.from, a.to, a.color) < std::tie(b.from, b.to, b.color);
    });
    return out;
}

} // namespace subcount
