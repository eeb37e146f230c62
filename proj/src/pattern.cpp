#include "subcount/pattern.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "subcount/errors.hpp"

namespace subcount {

namespace {

// Collects the vertices reachable from bit 0 of `mask` through `adj`.
std::uint8_t flood(const std::array<std::uint8_t, kMaxPatternVertices>& adj, std::uint8_t seed,
                   std::uint8_t allowed) {
    std::uint8_t comp = seed;
    for (;;) {
        std::uint8_t grown = comp;
        std::uint8_t scan = comp;
        while (scan) {
            const int v = std::countr_zero(scan);
            scan &= static_cast<std::uint8_t>(scan - 1);
            grown |= static_cast<std::uint8_t>(adj[v] & allowed);
        }
        if (grown == comp) return comp;
        comp = grown;
    }
}

std::vector<std::uint8_t> components_of(int n,
                                        const std::array<std::uint8_t, kMaxPatternVertices>& adj) {
    std::vector<std::uint8_t> out;
    std::uint8_t seen = 0;
    for (int v = 0; v < n; ++v) {
        if (seen & (1u << v)) continue;
        std::uint8_t comp = flood(adj, static_cast<std::uint8_t>(1u << v),
                                  static_cast<std::uint8_t>((n == 8 ? 0xffu : (1u << n) - 1)));
        out.push_back(comp);
        seen |= comp;
    }
    return out;
}

} // namespace

void validate_pattern(const Pattern& p) {
    if (p.n == 0 || p.n > kMaxPatternVertices)
        throw GraphError("pattern must have 1.." + std::to_string(kMaxPatternVertices) +
                         " vertices, got " + std::to_string(p.n));
    std::set<std::pair<int, int>> seen;
    for (const auto& e : p.edges) {
        if (e.u >= e.v || e.v >= p.n)
            throw GraphError("pattern edge endpoints out of order or range");
        if (e.color == kFraternalColor)
            throw GraphError("pattern edge colors must be >= 1");
        if (!seen.insert({e.u, e.v}).second)
            throw GraphError("duplicate pattern edge");
    }
}

std::array<std::uint8_t, kMaxPatternVertices> adjacency_masks(const Pattern& p) {
    std::array<std::uint8_t, kMaxPatternVertices> adj{};
    for (const auto& e : p.edges) {
        adj[e.u] |= static_cast<std::uint8_t>(1u << e.v);
        adj[e.v] |= static_cast<std::uint8_t>(1u << e.u);
    }
    return adj;
}

bool pattern_connected(const Pattern& p) {
    return p.n > 0 && pattern_components(p).size() == 1;
}

Color pattern_max_color(const Pattern& p) {
    Color c = 0;
    for (const auto& e : p.edges) c = std::max(c, e.color);
    return c;
}

std::vector<std::uint8_t> pattern_components(const Pattern& p) {
    return components_of(p.n, adjacency_masks(p));
}

Pattern induced_pattern(const Pattern& p, std::uint8_t mask) {
    std::array<int, kMaxPatternVertices> rename{};
    int next = 0;
    for (int v = 0; v < p.n; ++v)
        if (mask & (1u << v)) rename[v] = next++;
    Pattern out;
    out.n = static_cast<std::uint8_t>(next);
    for (const auto& e : p.edges)
        if ((mask & (1u << e.u)) && (mask & (1u << e.v)))
            out.edges.push_back({static_cast<std::uint8_t>(rename[e.u]),
                                 static_cast<std::uint8_t>(rename[e.v]), e.color});
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

DirectedMasks directed_masks(const DirectedPattern& d) {
    DirectedMasks m;
    for (const auto& e : d.edges) {
        m.out[e.from] |= static_cast<std::uint8_t>(1u << e.to);
        m.in[e.to] |= static_cast<std::uint8_t>(1u << e.from);
        m.adj[e.from] |= static_cast<std::uint8_t>(1u << e.to);
        m.adj[e.to] |= static_cast<std::uint8_t>(1u << e.from);
    }
    return m;
}

std::vector<std::pair<std::uint8_t, std::uint8_t>> fork_pairs(const DirectedPattern& d) {
    DirectedMasks m = directed_masks(d);
    std::vector<std::pair<std::uint8_t, std::uint8_t>> out;
    for (int u = 0; u < d.n; ++u)
        for (int v = u + 1; v < d.n; ++v) {
            if (m.adj[u] & (1u << v)) continue;
            if (m.out[u] & m.out[v])
                out.push_back({static_cast<std::uint8_t>(u), static_cast<std::uint8_t>(v)});
        }
    return out;
}

bool is_elder(const DirectedPattern& d) { return fork_pairs(d).empty(); }

bool weakly_connected(const DirectedPattern& d) {
    return d.n > 0 && directed_components(d).size() == 1;
}

std::string serialize(const DirectedPattern& d) {
    std::string s;
    s.reserve(1 + d.edges.size() * 4);
    s.push_back(static_cast<char>(d.n));
    for (const auto& e : d.edges) {
        s.push_back(static_cast<char>(e.from));
        s.push_back(static_cast<char>(e.to));
        s.push_back(static_cast<char>(e.color & 0xff));
        s.push_back(static_cast<char>(e.color >> 8));
    }
    return s;
}

namespace {

struct CanonSearch {
    const DirectedPattern& d;
    std::array<std::uint8_t, kMaxPatternVertices> perm{}; // original -> new
    std::array<std::uint8_t, kMaxPatternVertices> taken{};
    std::string best;

    explicit CanonSearch(const DirectedPattern& dp) : d(dp) {}

    // Relabels under perm (original->new) and serializes; assumes complete perm.
    std::string apply() const {
        std::vector<DirectedPatternEdge> es;
        es.reserve(d.edges.size());
        for (const auto& e : d.edges) es.push_back({perm[e.from], perm[e.to], e.color});
        std::sort(es.begin(), es.end());
        DirectedPattern q{d.n, std::move(es)};
        return serialize(q);
    }

    // Chooses the original vertex that becomes `pos` in the relabeling. A
    // plain n! sweep is fine: patterns are capped at 8 vertices and each
    // distinct labeled digraph is canonicalized only once.
    void rec(int pos) {
        if (pos == d.n) {
            std::string s = apply();
            if (best.empty() || s < best) best = std::move(s);
            return;
        }
        for (int v = 0; v < d.n; ++v) {
            if (taken[v]) continue;
            taken[v] = 1;
            perm[v] = static_cast<std::uint8_t>(pos);
            rec(pos + 1);
            taken[v] = 0;
        }
    }
};

} // namespace

std::string canonical_form(const DirectedPattern& d) {
    if (d.n <= 1) return serialize(d);
    CanonSearch cs(d);
    cs.rec(0);
    return cs.best;
}

std::optional<DirectedPattern> quotient(const DirectedPattern& d,
                                        const std::array<std::uint8_t, kMaxPatternVertices>& block_of,
                                        int block_count) {
    // Rank blocks by smallest member for a deterministic labeling.
    std::array<int, kMaxPatternVertices> first{};
    first.fill(kMaxPatternVertices);
    for (int v = 0; v < d.n; ++v)
        first[block_of[v]] = std::min(first[block_of[v]], v);
    std::array<int, kMaxPatternVertices> order{};
    for (int b = 0; b < block_count; ++b) order[b] = b;
    std::sort(order.begin(), order.begin() + block_count,
              [&](int a, int b) { return first[a] < first[b]; });
    std::array<std::uint8_t, kMaxPatternVertices> rank{};
    for (int i = 0; i < block_count; ++i) rank[order[i]] = static_cast<std::uint8_t>(i);

    // merged[a][b] = color + 1 of the unique arc a -> b, if consistent.
    std::array<std::array<std::uint32_t, kMaxPatternVertices>, kMaxPatternVertices> merged{};
    for (const auto& e : d.edges) {
        const std::uint8_t a = rank[block_of[e.from]];
        const std::uint8_t b = rank[block_of[e.to]];
        if (a == b) {
            // Block-internal color-0 arcs are what the contraction swallows;
            // any other loop-forming arc makes the quotient unsatisfiable.
            if (e.color != kFraternalColor) return std::nullopt;
            continue;
        }
        const std::uint32_t tag = static_cast<std::uint32_t>(e.color) + 1;
        if (merged[b][a] != 0) return std::nullopt; // anti-parallel pair
        if (merged[a][b] != 0 && merged[a][b] != tag) return std::nullopt; // color clash
        merged[a][b] = tag;
    }
    DirectedPattern q;
    q.n = static_cast<std::uint8_t>(block_count);
    for (int a = 0; a < block_count; ++a)
        for (int b = 0; b < block_count; ++b)
            if (merged[a][b])
                q.edges.push_back({static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                                   static_cast<Color>(merged[a][b] - 1)});
    std::sort(q.edges.begin(), q.edges.end());
    return q;
}

std::vector<std::uint8_t> directed_components(const DirectedPattern& d) {
    return components_of(d.n, directed_masks(d).adj);
}

DirectedPattern induced_digraph(const DirectedPattern& d, std::uint8_t mask) {
    std::array<int, kMaxPatternVertices> rename{};
    int next = 0;
    for (int v = 0; v < d.n; ++v)
        if (mask & (1u << v)) rename[v] = next++;
    DirectedPattern out;
    out.n = static_cast<std::uint8_t>(next);
    for (const auto& e : d.edges)
        if ((mask & (1u << e.from)) && (mask & (1u << e.to)))
            out.edges.push_back({static_cast<std::uint8_t>(rename[e.from]),
                                 static_cast<std::uint8_t>(rename[e.to]), e.color});
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

} // namespace subcount
