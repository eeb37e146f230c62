#include "subcount/oracle.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>
#include <unordered_set>

#include "subcount/errors.hpp"

namespace subcount {

namespace {

void check_limits(int pattern_n, std::size_t host_n, const OracleLimits& lim) {
    if (lim.unchecked) return;
    if (pattern_n > lim.max_pattern_vertices)
        throw GuardError("reference counter: pattern too large (" + std::to_string(pattern_n) +
                         " > " + std::to_string(lim.max_pattern_vertices) + " vertices)");
    if (host_n > lim.max_host_vertices)
        throw GuardError("reference counter: host too large (" + std::to_string(host_n) + " > " +
                         std::to_string(lim.max_host_vertices) + " vertices)");
}

// Orders pattern vertices so that each one (after the first of its component)
// has an already-placed neighbor; anchored expansion then walks host
// adjacency lists instead of scanning all vertices.
std::vector<int> anchored_order(int n, const std::array<std::uint8_t, kMaxPatternVertices>& adj) {
    std::vector<int> order;
    std::uint8_t placed = 0;
    while (static_cast<int>(order.size()) < n) {
        int pick = -1;
        for (int v = 0; v < n; ++v) {
            if (placed & (1u << v)) continue;
            if (adj[v] & placed) { pick = v; break; }
        }
        if (pick < 0)
            for (int v = 0; v < n; ++v)
                if (!(placed & (1u << v))) { pick = v; break; }
        order.push_back(pick);
        placed |= static_cast<std::uint8_t>(1u << pick);
    }
    return order;
}

enum class MapMode { Any, Injective, Induced };

struct UndirectedSearch {
    const Pattern& h;
    const ColoredGraph& g;
    MapMode mode;
    std::array<std::uint8_t, kMaxPatternVertices> adj;
    // arcs[u][v] = color + 1 for pattern edge {u, v}.
    std::array<std::array<std::uint32_t, kMaxPatternVertices>, kMaxPatternVertices> col{};
    std::vector<int> order;
    std::vector<VertexId> hosts;
    std::array<VertexId, kMaxPatternVertices> img{};
    std::unordered_set<VertexId> used;
    Count total = 0;

    UndirectedSearch(const Pattern& hp, const ColoredGraph& gg, MapMode m)
        : h(hp), g(gg), mode(m), adj(adjacency_masks(hp)) {
        for (const auto& e : h.edges) {
            col[e.u][e.v] = static_cast<std::uint32_t>(e.color) + 1;
            col[e.v][e.u] = col[e.u][e.v];
        }
        order = anchored_order(h.n, adj);
        hosts = g.vertices();
    }

    bool consistent(int v, VertexId cand, std::uint8_t placed) const {
        for (int w = 0; w < h.n; ++w) {
            if (!(placed & (1u << w))) continue;
            const auto want = col[v][w];
            auto got = g.edge_color(cand, img[w]);
            if (want) {
                if (cand == img[w]) return false;
                if (!got || *got != static_cast<Color>(want - 1)) return false;
            } else if (mode == MapMode::Induced && cand != img[w] && got) {
                return false;
            }
        }
        return true;
    }

    void rec(std::size_t depth, std::uint8_t placed) {
        if (depth == order.size()) {
            total += Count(1);
            return;
        }
        const int v = order[depth];
        const std::uint8_t anchors = adj[v] & placed;
        if (anchors) {
            const int a = std::countr_zero(anchors);
            for (const auto& nb : g.neighbors(img[a])) {
                if (mode != MapMode::Any && used.count(nb.id)) continue;
                if (!consistent(v, nb.id, placed)) continue;
                img[v] = nb.id;
                if (mode != MapMode::Any) used.insert(nb.id);
                rec(depth + 1, placed | static_cast<std::uint8_t>(1u << v));
                if (mode != MapMode::Any) used.erase(nb.id);
            }
        } else {
            for (VertexId cand : hosts) {
                if (mode != MapMode::Any && used.count(cand)) continue;
                if (!consistent(v, cand, placed)) continue;
                img[v] = cand;
                if (mode != MapMode::Any) used.insert(cand);
                rec(depth + 1, placed | static_cast<std::uint8_t>(1u << v));
                if (mode != MapMode::Any) used.erase(cand);
            }
        }
    }
};

Count run_undirected(const Pattern& h, const ColoredGraph& g, MapMode mode,
                     const OracleLimits& lim) {
    validate_pattern(h);
    check_limits(h.n, g.vertex_count(), lim);
    UndirectedSearch s(h, g, mode);
    s.rec(0, 0);
    return s.total;
}

struct DirectedSearch {
    const DirectedPattern& h;
    DirectedMasks masks;
    // arc[u][v] = color + 1 for pattern arc (u, v).
    std::array<std::array<std::uint32_t, kMaxPatternVertices>, kMaxPatternVertices> arc{};
    std::unordered_map<VertexId, std::vector<std::pair<VertexId, Color>>> out, in;
    std::vector<VertexId> hosts;
    std::unordered_set<std::uint64_t> host_arcs; // directed_key ^ color tag
    std::array<std::optional<VertexId>, kMaxPatternVertices> pins;
    std::vector<int> order;
    std::array<VertexId, kMaxPatternVertices> img{};
    Count total = 0;

    DirectedSearch(const DirectedPattern& hp, const DigraphData& g,
                   const std::array<std::optional<VertexId>, kMaxPatternVertices>& pn)
        : h(hp), masks(directed_masks(hp)), pins(pn) {
        for (const auto& e : h.edges) arc[e.from][e.to] = static_cast<std::uint32_t>(e.color) + 1;
        hosts = g.vertices;
        std::sort(hosts.begin(), hosts.end());
        hosts.erase(std::unique(hosts.begin(), hosts.end()), hosts.end());
        for (const auto& e : g.edges) {
            out[e.from].push_back({e.to, e.color});
            in[e.to].push_back({e.from, e.color});
            host_arcs.insert(arc_key(e.from, e.to, e.color));
        }
        std::array<std::uint8_t, kMaxPatternVertices> und{};
        for (int v = 0; v < h.n; ++v) und[v] = masks.adj[v];
        order = anchored_order(h.n, und);
        // Pinned vertices go first so their constraints prune immediately.
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return pins[a].has_value() > pins[b].has_value(); });
    }

    static std::uint64_t arc_key(VertexId from, VertexId to, Color c) {
        return directed_key(from, to) * 1315423911u + c;
    }

    bool consistent(int v, VertexId cand, std::uint8_t placed) const {
        if (pins[v] && *pins[v] != cand) return false;
        for (int w = 0; w < h.n; ++w) {
            if (!(placed & (1u << w))) continue;
            if (arc[v][w]) {
                if (cand == img[w]) return false;
                if (!host_arcs.count(arc_key(cand, img[w], static_cast<Color>(arc[v][w] - 1))))
                    return false;
            }
            if (arc[w][v]) {
                if (cand == img[w]) return false;
                if (!host_arcs.count(arc_key(img[w], cand, static_cast<Color>(arc[w][v] - 1))))
                    return false;
            }
        }
        return true;
    }

    void rec(std::size_t depth, std::uint8_t placed) {
        if (depth == order.size()) {
            total += Count(1);
            return;
        }
        const int v = order[depth];
        if (pins[v]) {
            if (consistent(v, *pins[v], placed)) {
                img[v] = *pins[v];
                rec(depth + 1, placed | static_cast<std::uint8_t>(1u << v));
            }
            return;
        }
        // Prefer an anchor connected by an arc, walking the matching host list.
        for (int w = 0; w < h.n; ++w) {
            if (!(placed & (1u << w))) continue;
            if (arc[v][w]) {
                auto it = in.find(img[w]);
                if (it == in.end()) return;
                const Color want = static_cast<Color>(arc[v][w] - 1);
                for (auto [cand, c] : it->second) {
                    if (c != want || !consistent(v, cand, placed)) continue;
                    img[v] = cand;
                    rec(depth + 1, placed | static_cast<std::uint8_t>(1u << v));
                }
                return;
            }
            if (arc[w][v]) {
                auto it = out.find(img[w]);
                if (it == out.end()) return;
                const Color want = static_cast<Color>(arc[w][v] - 1);
                for (auto [cand, c] : it->second) {
                    if (c != want || !consistent(v, cand, placed)) continue;
                    img[v] = cand;
                    rec(depth + 1, placed | static_cast<std::uint8_t>(1u << v));
                }
                return;
            }
        }
        for (VertexId cand : hosts) {
            if (!consistent(v, cand, placed)) continue;
            img[v] = cand;
            rec(depth + 1, placed | static_cast<std::uint8_t>(1u << v));
        }
    }
};

} // namespace

Count hom_count(const Pattern& h, const ColoredGraph& g, const OracleLimits& lim) {
    return run_undirected(h, g, MapMode::Any, lim);
}

Count sub_count(const Pattern& h, const ColoredGraph& g, const OracleLimits& lim) {
    return run_undirected(h, g, MapMode::Injective, lim);
}

Count isub_count(const Pattern& h, const ColoredGraph& g, const OracleLimits& lim) {
    return run_undirected(h, g, MapMode::Induced, lim);
}

Count dihom_count(const DirectedPattern& h, const DigraphData& g, const OracleLimits& lim) {
    return dihom_count_pinned(h, g, {}, lim);
}

Count dihom_count_pinned(const DirectedPattern& h, const DigraphData& g,
                         const std::array<std::optional<VertexId>, kMaxPatternVertices>& pins,
                         const OracleLimits& lim) {
    check_limits(h.n, g.vertices.size(), lim);
    if (h.n == 0) return Count(1);
    DirectedSearch s(h, g, pins);
    s.rec(0, 0);
    return s.total;
}

} // namespace subcount
