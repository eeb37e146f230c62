#include "subcount/compiler.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "subcount/errors.hpp"

namespace subcount {

namespace {

int popcount8(std::uint8_t m) { return std::popcount(static_cast<unsigned>(m)); }

[[noreturn]] void internal(const std::string& what) { throw InternalError("pattern compiler: " + what); }

std::string serialize_undirected(const Pattern& p) {
    std::string out;
    out.push_back(static_cast<char>(p.n));
    for (const auto& e : p.edges) {
        out.push_back(static_cast<char>(e.u));
        out.push_back(static_cast<char>(e.v));
        out.push_back(static_cast<char>(e.color & 0xff));
        out.push_back(static_cast<char>(e.color >> 8));
    }
    return out;
}

// Calls fn(block_of, block_count) for every set partition of {0..n-1},
// encoded as a restricted growth string.
template <typename F>
void for_each_partition(int n, F&& fn) {
    std::array<std::uint8_t, kMaxPatternVertices> block_of{};
    auto rec = [&](auto&& self, int i, int maxb) -> void {
        if (i == n) {
            fn(block_of, maxb + 1);
            return;
        }
        for (int b = 0; b <= maxb + 1 && b < n; ++b) {
            block_of[i] = static_cast<std::uint8_t>(b);
            self(self, i + 1, std::max(maxb, b));
        }
    };
    if (n <= 0) return;
    rec(rec, 1, 0);
}

// True when partition a refines partition b (b merges only whole a-blocks).
bool refines(const std::array<std::uint8_t, kMaxPatternVertices>& a,
             const std::array<std::uint8_t, kMaxPatternVertices>& b, int n) {
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (a[u] == a[v] && b[u] != b[v]) return false;
    return true;
}

struct ValidPartition {
    std::array<std::uint8_t, kMaxPatternVertices> block_of{};
    int block_count = 0;
    Pattern quotient;
};

// Partitions whose parts are independent sets and whose part pairs see only
// one edge color; the elements of the signed subgraph->homomorphism sum.
std::vector<ValidPartition> valid_projections(const Pattern& p) {
    std::vector<ValidPartition> out;
    for_each_partition(p.n, [&](const std::array<std::uint8_t, kMaxPatternVertices>& block_of,
                                int block_count) {
        std::array<std::array<Color, kMaxPatternVertices>, kMaxPatternVertices> between{};
        for (const auto& e : p.edges) {
            int a = block_of[e.u], b = block_of[e.v];
            if (a == b) return; // edge inside a part
            if (a > b) std::swap(a, b);
            Color& slot = between[a][b];
            if (slot != 0 && slot != e.color) return; // two colors across one part pair
            slot = e.color;
        }
        // Rank blocks by their smallest member.
        std::array<int, kMaxPatternVertices> rank;
        rank.fill(-1);
        int next = 0;
        for (int v = 0; v < p.n; ++v)
            if (rank[block_of[v]] < 0) rank[block_of[v]] = next++;
        Pattern q;
        q.n = static_cast<std::uint8_t>(block_count);
        std::set<PatternEdge> qedges;
        for (const auto& e : p.edges) {
            auto a = static_cast<std::uint8_t>(rank[block_of[e.u]]);
            auto b = static_cast<std::uint8_t>(rank[block_of[e.v]]);
            if (a > b) std::swap(a, b);
            qedges.insert({a, b, e.color});
        }
        q.edges.assign(qedges.begin(), qedges.end());
        out.push_back({block_of, block_count, std::move(q)});
    });
    return out;
}

} // namespace

int augmentation_depth(int n) {
    int pairs = n * (n - 1) / 2;
    return std::max(0, pairs - 2);
}

std::string canonical_form(const Pattern& p) {
    std::array<std::uint8_t, kMaxPatternVertices> perm{};
    for (int i = 0; i < p.n; ++i) perm[i] = static_cast<std::uint8_t>(i);
    std::string best;
    do {
        Pattern relabeled;
        relabeled.n = p.n;
        for (const auto& e : p.edges) {
            std::uint8_t u = perm[e.u], v = perm[e.v];
            if (u > v) std::swap(u, v);
            relabeled.edges.push_back({u, v, e.color});
        }
        std::sort(relabeled.edges.begin(), relabeled.edges.end());
        std::string s = serialize_undirected(relabeled);
        if (best.empty() || s < best) best = std::move(s);
    } while (std::next_permutation(perm.begin(), perm.begin() + p.n));
    return best;
}

std::vector<SupergraphTerm> induced_to_sub_terms(const Pattern& p, Color k) {
    validate_pattern(p);
    if (k == 0) throw GraphError("color alphabet must contain at least color 1");
    std::vector<std::pair<std::uint8_t, std::uint8_t>> non_edges;
    auto adj = adjacency_masks(p);
    for (std::uint8_t u = 0; u < p.n; ++u)
        for (std::uint8_t v = u + 1; v < p.n; ++v)
            if (!(adj[u] >> v & 1)) non_edges.push_back({u, v});

    std::vector<SupergraphTerm> terms;
    std::vector<PatternEdge> added;
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == non_edges.size()) {
            Pattern super = p;
            super.edges.insert(super.edges.end(), added.begin(), added.end());
            std::sort(super.edges.begin(), super.edges.end());
            terms.push_back({std::move(super), (added.size() % 2 == 0) ? 1 : -1});
            return;
        }
        self(self, i + 1); // leave the pair absent
        for (Color c = 1; c <= k; ++c) {
            added.push_back({non_edges[i].first, non_edges[i].second, c});
            self(self, i + 1);
            added.pop_back();
        }
    };
    rec(rec, 0);
    return terms;
}

std::vector<ProjectionTerm> sub_to_hom_terms(const Pattern& p) {
    validate_pattern(p);
    auto parts = valid_projections(p);
    bool has_identity = false;
    for (const auto& part : parts) has_identity |= part.block_count == p.n;
    if (!has_identity) internal("identity partition missing");

    std::vector<ProjectionTerm> out;
    for (std::size_t ri = 0; ri < parts.size(); ++ri) {
        // Refinement interval below parts[ri], coarsest first.
        std::vector<std::size_t> refs;
        for (std::size_t qi = 0; qi < parts.size(); ++qi)
            if (refines(parts[qi].block_of, parts[ri].block_of, p.n)) refs.push_back(qi);
        std::sort(refs.begin(), refs.end(), [&](std::size_t a, std::size_t b) {
            return parts[a].block_count < parts[b].block_count;
        });
        if (refs.empty() || refs[0] != ri) internal("coarsest element of a refinement interval is not itself");

        // mu[q] is the signed weight of q in the interval [q, R]; the
        // identity partition's weight is the homomorphism coefficient of R.
        std::unordered_map<std::size_t, std::int64_t> mu;
        std::int64_t coeff = 0;
        for (std::size_t pos = 0; pos < refs.size(); ++pos) {
            std::size_t qi = refs[pos];
            std::int64_t val;
            if (pos == 0) {
                val = 1;
            } else {
                val = 0;
                for (std::size_t prev = 0; prev < pos; ++prev) {
                    std::size_t q2 = refs[prev];
                    if (refines(parts[qi].block_of, parts[q2].block_of, p.n)) val -= mu[q2];
                }
            }
            mu[qi] = val;
            if (parts[qi].block_count == p.n) coeff = val; // the identity partition
        }
        if (coeff != 0) out.push_back({parts[ri].quotient, coeff});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Member-class generation.

namespace {

struct LabeledPool {
    std::vector<DirectedPattern> members;
    std::unordered_set<std::string> seen;
    std::size_t guard;

    explicit LabeledPool(std::size_t g) : guard(g) {}
    void add(DirectedPattern d) {
        std::sort(d.edges.begin(), d.edges.end());
        auto key = serialize(d);
        if (!seen.insert(key).second) return;
        members.push_back(std::move(d));
        if (members.size() > guard)
            throw GuardError("pattern compiler: generated member pool exceeds " +
                             std::to_string(guard) + " digraphs");
    }
};

} // namespace

std::vector<MemberClass> member_classes(const Pattern& f, Color k, std::size_t member_guard,
                                        int rounds) {
    validate_pattern(f);
    if (!pattern_connected(f)) internal("member generation needs a connected pattern");
    if (pattern_max_color(f) > k) throw GraphError("pattern uses a color beyond the declared alphabet");
    int depth = rounds < 0 ? augmentation_depth(f.n) : rounds;

    // Orientations of the pattern's edges.
    if (f.edges.size() > 20)
        throw GuardError("pattern compiler: too many edges to orient");
    LabeledPool pool(member_guard);
    for (std::uint32_t mask = 0; mask < (1u << f.edges.size()); ++mask) {
        DirectedPattern d;
        d.n = f.n;
        for (std::size_t i = 0; i < f.edges.size(); ++i) {
            const auto& e = f.edges[i];
            if (mask >> i & 1)
                d.edges.push_back({e.v, e.u, e.color});
            else
                d.edges.push_back({e.u, e.v, e.color});
        }
        pool.add(std::move(d));
    }

    // Repeated closure rounds: every non-adjacent pair with a common
    // out-neighbor gains a color-0 arc, in both possible directions.
    for (int round = 0; round < depth; ++round) {
        LabeledPool next(member_guard);
        bool changed = false;
        for (const auto& m : pool.members) {
            auto forks = fork_pairs(m);
            if (forks.empty()) {
                next.add(m);
                continue;
            }
            changed = true;
            if (forks.size() > 20)
                throw GuardError("pattern compiler: too many unresolved pairs in one closure round");
            for (std::uint32_t mask = 0; mask < (1u << forks.size()); ++mask) {
                DirectedPattern d = m;
                for (std::size_t i = 0; i < forks.size(); ++i) {
                    auto [u, v] = forks[i];
                    if (mask >> i & 1)
                        d.edges.push_back({v, u, kFraternalColor});
                    else
                        d.edges.push_back({u, v, kFraternalColor});
                }
                next.add(std::move(d));
            }
        }
        pool = std::move(next);
        if (!changed) break; // fixed point: further rounds are identity
    }
    if (rounds < 0 || depth >= augmentation_depth(f.n))
        for (const auto& m : pool.members)
            if (!is_elder(m)) internal("closure depth did not reach the fixed point");

    // Recolor each color-0 arc with every color in {0} + {1..k}.
    LabeledPool recolored(member_guard);
    for (const auto& m : pool.members) {
        std::vector<std::size_t> zero;
        for (std::size_t i = 0; i < m.edges.size(); ++i)
            if (m.edges[i].color == kFraternalColor) zero.push_back(i);
        if (zero.size() > 20)
            throw GuardError("pattern compiler: too many recolorable arcs");
        std::vector<Color> choice(zero.size(), 0);
        for (;;) {
            DirectedPattern d = m;
            for (std::size_t i = 0; i < zero.size(); ++i) d.edges[zero[i]].color = choice[i];
            recolored.add(std::move(d));
            std::size_t i = 0;
            while (i < zero.size() && choice[i] == k) choice[i++] = 0;
            if (i == zero.size()) break;
            ++choice[i];
        }
    }

    // Contract parts that are connected through their internal color-0 arcs.
    // An element is the pair (partition, quotient digraph); the same quotient
    // reached through different partitions counts once per partition.
    std::map<std::string, DirectedPattern> elements;
    for (const auto& m : recolored.members) {
        auto masks = directed_masks(m);
        for_each_partition(m.n, [&](const std::array<std::uint8_t, kMaxPatternVertices>& block_of,
                                    int block_count) {
            std::array<std::uint8_t, kMaxPatternVertices> block_mask{};
            for (int v = 0; v < m.n; ++v) block_mask[block_of[v]] |= static_cast<std::uint8_t>(1u << v);
            // Parts must be connected through internal color-0 arcs alone.
            for (int b = 0; b < block_count; ++b) {
                std::uint8_t bm = block_mask[b];
                if (popcount8(bm) <= 1) continue;
                std::uint8_t reach = bm & static_cast<std::uint8_t>(-bm);
                for (;;) {
                    std::uint8_t grow = reach;
                    for (const auto& e : m.edges) {
                        if (e.color != kFraternalColor) continue;
                        std::uint8_t fm = static_cast<std::uint8_t>(1u << e.from);
                        std::uint8_t tm = static_cast<std::uint8_t>(1u << e.to);
                        if (!(fm & bm) || !(tm & bm)) continue;
                        if (reach & fm) grow |= tm;
                        if (reach & tm) grow |= fm;
                    }
                    if (grow == reach) break;
                    reach = grow;
                }
                if (reach != bm) return;
                // No non-0 arc may connect two vertices of one part.
                for (const auto& e : m.edges)
                    if (e.color != kFraternalColor && (bm >> e.from & 1) && (bm >> e.to & 1)) return;
            }
            auto q = quotient(m, block_of, block_count);
            if (!q) return;
            std::string key;
            std::array<std::uint8_t, kMaxPatternVertices> sorted_masks{};
            std::copy(block_mask.begin(), block_mask.begin() + block_count, sorted_masks.begin());
            std::sort(sorted_masks.begin(), sorted_masks.begin() + block_count);
            key.assign(sorted_masks.begin(), sorted_masks.begin() + block_count);
            key.push_back('#');
            key += serialize(*q);
            elements.emplace(std::move(key), std::move(*q));
            if (elements.size() > member_guard)
                throw GuardError("pattern compiler: contracted member set exceeds " +
                                 std::to_string(member_guard));
            (void)masks;
        });
    }

    // Group into isomorphism classes.
    std::map<std::string, MemberClass> classes;
    for (const auto& [key, d] : elements) {
        if (!weakly_connected(d)) internal("contracted member lost connectivity");
        if (!is_elder(d)) internal("contracted member is not closure-free");
        auto canon = canonical_form(d);
        auto it = classes.find(canon);
        if (it == classes.end())
            classes.emplace(canon, MemberClass{d, 1, canon});
        else
            ++it->second.multiplicity;
    }
    std::vector<MemberClass> out;
    out.reserve(classes.size());
    for (auto& [canon, cls] : classes) out.push_back(std::move(cls));
    return out;
}

// ---------------------------------------------------------------------------
// Spine construction.

namespace {

struct Spine {
    std::array<std::int8_t, kMaxPatternVertices> parent{};
    std::uint8_t root = 0;
};

std::uint8_t full_mask_of(int n) { return static_cast<std::uint8_t>((1u << n) - 1); }

bool mask_weakly_connected(const DirectedPattern& d, std::uint8_t mask) {
    if (mask == 0) return false;
    std::uint8_t reach = mask & static_cast<std::uint8_t>(-mask);
    for (;;) {
        std::uint8_t grow = reach;
        for (const auto& e : d.edges) {
            std::uint8_t fm = static_cast<std::uint8_t>(1u << e.from);
            std::uint8_t tm = static_cast<std::uint8_t>(1u << e.to);
            if (!(fm & mask) || !(tm & mask)) continue;
            if (reach & fm) grow |= tm;
            if (reach & tm) grow |= fm;
        }
        if (grow == reach) break;
        reach = grow;
    }
    return reach == mask;
}

bool has_arc(const DirectedPattern& d, int from, int to) {
    for (const auto& e : d.edges)
        if (e.from == from && e.to == to) return true;
    return false;
}

// Depth of v below the sub-spine root, following parents inside `mask`.
int spine_depth(const Spine& s, int v) {
    int depth = 0;
    while (s.parent[v] >= 0) {
        v = s.parent[v];
        ++depth;
        if (depth > kMaxPatternVertices) internal("spine parent links form a cycle");
    }
    return depth;
}

bool spine_ancestor(const Spine& s, int anc, int v) {
    while (v >= 0) {
        if (v == anc) return true;
        v = s.parent[v];
    }
    return false;
}

// Recursive constructive proof turned into code: remove a non-cut vertex,
// build the spine of the rest, then re-attach the vertex either above the
// old root or below its deepest in-neighbor, re-rooting the sub-trees that
// hang off the displaced path segment under the new vertex.
void build_spine(const DirectedPattern& d, std::uint8_t mask, Spine& s) {
    int count = popcount8(mask);
    if (count == 1) {
        int v = std::countr_zero(static_cast<unsigned>(mask));
        s.parent[v] = -1;
        s.root = static_cast<std::uint8_t>(v);
        return;
    }
    int v = -1;
    for (int cand = kMaxPatternVertices - 1; cand >= 0; --cand) {
        if (!(mask >> cand & 1)) continue;
        if (mask_weakly_connected(d, static_cast<std::uint8_t>(mask & ~(1u << cand)))) {
            v = cand;
            break;
        }
    }
    if (v < 0) internal("connected digraph has no removable vertex");
    std::uint8_t rest = static_cast<std::uint8_t>(mask & ~(1u << v));
    build_spine(d, rest, s);

    if (has_arc(d, v, s.root)) {
        s.parent[s.root] = static_cast<std::int8_t>(v);
        s.parent[v] = -1;
        s.root = static_cast<std::uint8_t>(v);
        return;
    }

    // In-neighbors of v inside the sub-spine; they share the out-neighbor v,
    // so closure-freeness makes them pairwise adjacent, hence comparable.
    std::vector<int> inn;
    for (const auto& e : d.edges)
        if (e.to == v && (rest >> e.from & 1)) inn.push_back(e.from);
    if (inn.empty()) internal("re-attached vertex has no in-neighbor and no arc to the root");
    for (std::size_t i = 0; i < inn.size(); ++i)
        for (std::size_t j = i + 1; j < inn.size(); ++j)
            if (!spine_ancestor(s, inn[i], inn[j]) && !spine_ancestor(s, inn[j], inn[i]))
                internal("in-neighbors of the re-attached vertex are not on one chain");
    int z = inn[0];
    for (int w : inn)
        if (spine_depth(s, w) > spine_depth(s, z)) z = w;

    std::uint8_t on_path = 0;
    for (int w = z; w >= 0; w = s.parent[w]) on_path |= static_cast<std::uint8_t>(1u << w);

    // Sub-trees hanging off the path that contain a neighbor of v move under
    // v; every such sub-tree root must be an out-neighbor of v.
    std::uint8_t nbr = 0;
    for (const auto& e : d.edges) {
        if (e.from == v && (rest >> e.to & 1)) nbr |= static_cast<std::uint8_t>(1u << e.to);
        if (e.to == v && (rest >> e.from & 1)) nbr |= static_cast<std::uint8_t>(1u << e.from);
    }
    std::set<int> displaced;
    for (int w = 0; w < kMaxPatternVertices; ++w) {
        if (!(rest >> w & 1) || (on_path >> w & 1)) continue;
        if (!(nbr >> w & 1)) {
            continue;
        }
        // Climb to the root of w's component of spine-minus-path. Collect
        // first, re-parent after: two neighbors may share a component.
        int comp_root = w;
        while (s.parent[comp_root] >= 0 && !(on_path >> s.parent[comp_root] & 1))
            comp_root = s.parent[comp_root];
        if (s.parent[comp_root] < 0) internal("displaced sub-tree is not attached to the path");
        displaced.insert(comp_root);
    }
    for (int comp_root : displaced) {
        if (!has_arc(d, v, comp_root)) internal("displaced sub-tree root is not an out-neighbor");
        s.parent[comp_root] = static_cast<std::int8_t>(v);
    }
    s.parent[v] = static_cast<std::int8_t>(z);
}

void validate_spine(const DirectedPattern& d, const Spine& s) {
    std::uint8_t all = full_mask_of(d.n);
    int roots = 0;
    for (int vtx = 0; vtx < d.n; ++vtx) {
        if (s.parent[vtx] < 0) {
            ++roots;
            if (vtx != s.root) internal("spine has a stray parentless vertex");
        } else if (!has_arc(d, s.parent[vtx], vtx)) {
            internal("spine arc is not an arc of the pattern");
        }
    }
    if (roots != 1) internal("spine must have exactly one root");
    std::uint8_t reach = static_cast<std::uint8_t>(1u << s.root);
    for (;;) {
        std::uint8_t grow = reach;
        for (int vtx = 0; vtx < d.n; ++vtx)
            if (s.parent[vtx] >= 0 && (reach >> s.parent[vtx] & 1))
                grow |= static_cast<std::uint8_t>(1u << vtx);
        if (grow == reach) break;
        reach = grow;
    }
    if (reach != all) internal("spine does not span the pattern");
    for (const auto& e : d.edges)
        if (!spine_ancestor(s, e.from, e.to) && !spine_ancestor(s, e.to, e.from))
            internal("arc endpoints are incomparable in the spine");
}

// ---------------------------------------------------------------------------
// Clans and update skeletons.

struct ClanSeed {
    std::uint8_t members;
    std::uint8_t root;
    std::vector<std::uint8_t> ghosts;
    std::vector<DirectedPatternEdge> star;
};

std::vector<ClanSeed> enumerate_clans(const DirectedPattern& d, const Spine& s) {
    auto masks = directed_masks(d);
    std::uint8_t all = full_mask_of(d.n);
    std::vector<ClanSeed> seeds;
    for (std::uint32_t m = 1; m <= all; ++m) {
        auto mask = static_cast<std::uint8_t>(m);
        if ((mask & all) != mask) continue;
        bool closed = true;
        for (int v = 0; v < d.n && closed; ++v)
            if ((mask >> v & 1) && (masks.out[v] & ~mask)) closed = false;
        if (!closed) continue;
        int local_roots = 0, root = -1;
        for (int v = 0; v < d.n; ++v) {
            if (!(mask >> v & 1)) continue;
            if (s.parent[v] < 0 || !(mask >> s.parent[v] & 1)) {
                ++local_roots;
                root = v;
            }
        }
        if (local_roots != 1) continue;

        ClanSeed seed;
        seed.members = mask;
        seed.root = static_cast<std::uint8_t>(root);

        if (mask != all) {
            // Ghosts: outside in-neighbors; they must all see the clan root,
            // lie on its ancestor line, and start at its spine parent.
            std::uint8_t ghost_mask = 0, root_in = 0;
            for (const auto& e : d.edges) {
                if ((mask >> e.to & 1) && !(mask >> e.from & 1)) {
                    ghost_mask |= static_cast<std::uint8_t>(1u << e.from);
                    if (e.to == seed.root) root_in |= static_cast<std::uint8_t>(1u << e.from);
                }
                if ((mask >> e.from & 1) && !(mask >> e.to & 1))
                    internal("clan closure admitted an outgoing arc");
            }
            if (ghost_mask != root_in) internal("clan in-neighbors bypass the clan root");
            if (ghost_mask == 0) internal("proper clan of a connected pattern has no ghosts");
            for (int g = 0; g < d.n; ++g)
                if ((ghost_mask >> g & 1) && !spine_ancestor(s, g, seed.root))
                    internal("ghost is not an ancestor of the clan root");
            for (int w = s.parent[seed.root]; w >= 0; w = s.parent[w])
                if (ghost_mask >> w & 1) seed.ghosts.push_back(static_cast<std::uint8_t>(w));
            if (popcount8(ghost_mask) != static_cast<int>(seed.ghosts.size()))
                internal("ghost enumeration missed an ancestor");
            if (seed.ghosts.front() != s.parent[seed.root])
                internal("nearest ghost is not the root's spine parent");
        }

        std::uint8_t ghost_mask = 0;
        for (auto g : seed.ghosts) ghost_mask |= static_cast<std::uint8_t>(1u << g);
        std::uint8_t star_mask = mask | ghost_mask;
        for (const auto& e : d.edges) {
            if (!(star_mask >> e.from & 1) || !(star_mask >> e.to & 1)) continue;
            if ((ghost_mask >> e.from & 1) && (ghost_mask >> e.to & 1)) continue;
            if (ghost_mask >> e.to & 1) internal("arc points from the clan into a ghost");
            seed.star.push_back(e);
        }
        seeds.push_back(std::move(seed));
    }
    std::sort(seeds.begin(), seeds.end(), [](const ClanSeed& a, const ClanSeed& b) {
        int pa = popcount8(a.members), pb = popcount8(b.members);
        if (pa != pb) return pa > pb;
        return a.members < b.members;
    });
    if (seeds.empty() || seeds.front().members != all) internal("the full vertex set is not a clan");
    return seeds;
}

// Weakly connected components of the star restricted to `mask`.
std::vector<std::uint8_t> star_components(const std::vector<DirectedPatternEdge>& star,
                                          std::uint8_t mask) {
    std::vector<std::uint8_t> comps;
    std::uint8_t left = mask;
    while (left) {
        std::uint8_t reach = left & static_cast<std::uint8_t>(-left);
        for (;;) {
            std::uint8_t grow = reach;
            for (const auto& e : star) {
                std::uint8_t fm = static_cast<std::uint8_t>(1u << e.from);
                std::uint8_t tm = static_cast<std::uint8_t>(1u << e.to);
                if (!(fm & mask) || !(tm & mask)) continue;
                if (reach & fm) grow |= tm;
                if (reach & tm) grow |= fm;
            }
            if (grow == reach) break;
            reach = grow;
        }
        comps.push_back(reach);
        left = static_cast<std::uint8_t>(left & ~reach);
    }
    return comps;
}

void build_skeletons(CompiledPattern& cp,
                     const std::unordered_map<std::uint8_t, std::uint32_t>& clan_index) {
    for (auto& clan : cp.clans) {
        std::set<Color> colors;
        for (const auto& e : clan.star_arcs) colors.insert(e.color);
        for (Color c : colors) {
            std::vector<std::size_t> same_color;
            for (std::size_t i = 0; i < clan.star_arcs.size(); ++i)
                if (clan.star_arcs[i].color == c) same_color.push_back(i);
            if (same_color.size() > 20)
                throw GuardError("pattern compiler: too many equal-colored arcs in one clan");

            for (std::uint32_t xmask = 1; xmask < (1u << same_color.size()); ++xmask) {
                std::uint8_t tails = 0, heads = 0;
                for (std::size_t i = 0; i < same_color.size(); ++i) {
                    if (!(xmask >> i & 1)) continue;
                    const auto& e = clan.star_arcs[same_color[i]];
                    tails |= static_cast<std::uint8_t>(1u << e.from);
                    heads |= static_cast<std::uint8_t>(1u << e.to);
                }
                if (tails & heads) continue; // one vertex cannot take both images

                std::set<std::size_t> in_x;
                for (std::size_t i = 0; i < same_color.size(); ++i)
                    if (xmask >> i & 1) in_x.insert(same_color[i]);

                // A non-chosen equal-colored arc pinned tail->head would be
                // forced onto the changed pair: unsatisfiable, skip.
                bool dead = false;
                for (std::size_t i : same_color)
                    if (!in_x.count(i)) {
                        const auto& e = clan.star_arcs[i];
                        if ((tails >> e.from & 1) && (heads >> e.to & 1)) dead = true;
                    }
                if (dead) continue;

                // Everything that can reach the head of a chosen arc.
                std::uint8_t m_set = heads;
                for (;;) {
                    std::uint8_t grow = m_set;
                    for (const auto& e : clan.star_arcs)
                        if (m_set >> e.to & 1) grow |= static_cast<std::uint8_t>(1u << e.from);
                    if (grow == m_set) break;
                    m_set = grow;
                }
                if (!(m_set >> clan.root & 1)) internal("clan root cannot reach the changed arc");
                for (auto g : clan.ghosts)
                    if (!(m_set >> g & 1)) internal("ghost cannot reach the changed arc");

                UpdateSkeleton skel;
                std::array<SlotRef, kMaxPatternVertices> slot{};
                std::array<bool, kMaxPatternVertices> placed{};
                for (int v = 0; v < kMaxPatternVertices; ++v) {
                    if (tails >> v & 1) {
                        slot[v] = {SlotRef::X, 0};
                        placed[v] = true;
                    } else if (heads >> v & 1) {
                        slot[v] = {SlotRef::Y, 0};
                        placed[v] = true;
                    }
                }

                // Greedy anchored order: each free vertex enters via one of
                // its out-arcs toward an already-placed vertex, so candidate
                // images always come from an in-list of the view.
                std::uint8_t free_mask = static_cast<std::uint8_t>(m_set & ~(tails | heads));
                std::set<std::size_t> anchor_arcs;
                while (free_mask) {
                    int pick = -1;
                    std::size_t pick_arc = 0;
                    for (int v = 0; v < kMaxPatternVertices && pick < 0; ++v) {
                        if (!(free_mask >> v & 1)) continue;
                        for (std::size_t i = 0; i < clan.star_arcs.size(); ++i) {
                            const auto& e = clan.star_arcs[i];
                            if (e.from != v || !(m_set >> e.to & 1) || !placed[e.to]) continue;
                            pick = v;
                            pick_arc = i;
                            break;
                        }
                    }
                    if (pick < 0) internal("no anchored order for the changed-arc closure");
                    const auto& anchor = clan.star_arcs[pick_arc];
                    EnumStep step;
                    step.vertex = static_cast<std::uint8_t>(pick);
                    step.anchor = slot[anchor.to];
                    step.arc_color = anchor.color;
                    step.anchor_forbid = (anchor.color == c);
                    skel.steps.push_back(step);
                    slot[pick] = {SlotRef::Step, static_cast<std::uint8_t>(skel.steps.size() - 1)};
                    placed[pick] = true;
                    free_mask = static_cast<std::uint8_t>(free_mask & ~(1u << pick));
                    anchor_arcs.insert(pick_arc);
                }

                // Distribute the remaining constraint arcs: both-pinned ones
                // run once up front, the rest at the later endpoint's step.
                std::array<int, kMaxPatternVertices> step_of;
                step_of.fill(-1);
                for (std::size_t i = 0; i < skel.steps.size(); ++i)
                    step_of[skel.steps[i].vertex] = static_cast<int>(i);
                for (std::size_t i = 0; i < clan.star_arcs.size(); ++i) {
                    const auto& e = clan.star_arcs[i];
                    if (!(m_set >> e.from & 1) || !(m_set >> e.to & 1)) continue;
                    if (in_x.count(i) || anchor_arcs.count(i)) continue;
                    ArcCheck chk{slot[e.from], slot[e.to], e.color, e.color == c};
                    int sf = step_of[e.from], st = step_of[e.to];
                    if (sf < 0 && st < 0)
                        skel.pinned_checks.push_back(chk);
                    else
                        skel.steps[static_cast<std::size_t>(std::max(sf, st))].checks.push_back(chk);
                }

                // Split-off sub-clans whose tables supply the extension counts.
                std::uint8_t rest = static_cast<std::uint8_t>(clan.members & ~m_set);
                for (std::uint8_t comp : star_components(clan.star_arcs, rest)) {
                    auto it = clan_index.find(comp);
                    if (it == clan_index.end()) internal("split-off component is not a clan");
                    ChildRef child;
                    child.clan_index = it->second;
                    for (auto g : cp.clans[it->second].ghosts) {
                        if (!(m_set >> g & 1)) internal("split-off clan has a ghost outside the core");
                        child.ghost_slots.push_back(slot[g]);
                    }
                    skel.children.push_back(std::move(child));
                }

                if (clan.full) {
                    skel.root_slot = slot[clan.root];
                } else {
                    for (auto g : clan.ghosts) skel.ghost_slots.push_back(slot[g]);
                }
                clan.skeletons[c].push_back(std::move(skel));
            }
        }
    }
}

} // namespace

std::shared_ptr<const CompiledPattern> compile_directed(const DirectedPattern& h) {
    if (h.n == 0 || h.n > kMaxPatternVertices) internal("pattern size out of range");
    if (!weakly_connected(h)) internal("engine patterns must be connected");
    if (!is_elder(h)) internal("engine patterns must be closure-free");

    auto cp = std::make_shared<CompiledPattern>();
    cp->h = h;

    Spine s;
    s.parent.fill(-1);
    build_spine(h, full_mask_of(h.n), s);
    validate_spine(h, s);
    cp->tree_parent = s.parent;
    cp->root = s.root;

    auto seeds = enumerate_clans(h, s);
    std::unordered_map<std::uint8_t, std::uint32_t> clan_index;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        CompiledClan clan;
        clan.members = seeds[i].members;
        clan.root = seeds[i].root;
        clan.full = seeds[i].members == full_mask_of(h.n);
        clan.ghosts = seeds[i].ghosts;
        clan.star_arcs = seeds[i].star;
        clan_index.emplace(clan.members, static_cast<std::uint32_t>(i));
        cp->clans.push_back(std::move(clan));
    }
    build_skeletons(*cp, clan_index);
    return cp;
}

// ---------------------------------------------------------------------------
// Plan building with a process-wide component cache.

std::size_t ClassInterner::intern(const std::string& canonical,
                                  std::shared_ptr<const CompiledPattern> compiled) {
    auto it = index_.find(canonical);
    if (it != index_.end()) return it->second;
    std::size_t idx = entries_.size();
    entries_.push_back(std::move(compiled));
    index_.emplace(canonical, idx);
    return idx;
}

namespace {

struct ComponentClasses {
    // (class canonical form, multiplicity, compiled blueprint)
    std::vector<std::tuple<std::string, std::int64_t, std::shared_ptr<const CompiledPattern>>> classes;
};

std::mutex g_component_cache_mu;
std::unordered_map<std::string, std::shared_ptr<const ComponentClasses>> g_component_cache;

std::shared_ptr<const ComponentClasses> component_classes(const Pattern& comp, Color k,
                                                          std::size_t guard) {
    std::string key = canonical_form(comp) + "|" + std::to_string(k);
    std::lock_guard<std::mutex> lock(g_component_cache_mu);
    auto it = g_component_cache.find(key);
    if (it != g_component_cache.end()) return it->second;
    auto built = std::make_shared<ComponentClasses>();
    for (const auto& cls : member_classes(comp, k, guard))
        built->classes.emplace_back(cls.canonical, cls.multiplicity, compile_directed(cls.rep));
    g_component_cache.emplace(std::move(key), built);
    return built;
}

HomPlan hom_plan(const Pattern& p, Color k, ClassInterner& interner, std::size_t guard) {
    HomPlan plan;
    for (std::uint8_t comp_mask : pattern_components(p)) {
        if (popcount8(comp_mask) == 1) {
            ++plan.vertex_power;
            continue;
        }
        Pattern comp = induced_pattern(p, comp_mask);
        auto classes = component_classes(comp, k, guard);
        std::vector<std::pair<std::size_t, std::int64_t>> factor;
        for (const auto& [canon, mult, compiled] : classes->classes)
            factor.emplace_back(interner.intern(canon, compiled), mult);
        plan.factors.push_back(std::move(factor));
    }
    return plan;
}

} // namespace

PatternPlans compile_pattern(const Pattern& p, Color k, ClassInterner& interner,
                             const CompileLimits& limits) {
    validate_pattern(p);
    if (p.n > limits.max_pattern_vertices)
        throw GuardError("pattern has " + std::to_string(p.n) + " vertices; the configured limit is " +
                         std::to_string(limits.max_pattern_vertices));
    if (pattern_max_color(p) > k)
        throw GraphError("pattern uses a color beyond the declared alphabet");

    PatternPlans plans;
    plans.hom.terms.emplace_back(1, hom_plan(p, k, interner, limits.max_generated_members));

    for (const auto& proj : sub_to_hom_terms(p))
        plans.sub.terms.emplace_back(proj.coeff,
                                     hom_plan(proj.graph, k, interner, limits.max_generated_members));

    std::size_t term_guard = limits.max_generated_members;
    for (const auto& super : induced_to_sub_terms(p, k)) {
        for (const auto& proj : sub_to_hom_terms(super.graph)) {
            plans.induced.terms.emplace_back(
                super.sign * proj.coeff,
                hom_plan(proj.graph, k, interner, limits.max_generated_members));
            if (plans.induced.terms.size() > term_guard)
                throw GuardError("pattern compiler: induced-count expansion exceeds " +
                                 std::to_string(term_guard) + " terms");
        }
    }
    return plans;
}

} // namespace subcount
