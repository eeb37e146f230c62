#include "subcount/stream_gen.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>

#include "subcount/errors.hpp"

namespace subcount {

std::vector<ColoredEdge> bounded_degeneracy_stream(std::size_t n, int d, std::size_t m, Color k,
                                                   std::uint64_t seed) {
    if (n < 2 || n >= (1u << 24)) throw GraphError("stream vertex count out of range");
    if (d < 1) throw GraphError("stream degeneracy bound must be >= 1");
    if (k < 1) throw GraphError("stream color count must be >= 1");

    std::mt19937_64 rng(seed);
    std::vector<int> owned(n, 0);
    std::unordered_set<std::uint64_t> present;
    // Vertices that can still own another edge; swap-removed on saturation.
    std::vector<VertexId> open;
    open.reserve(n - 1);
    for (std::size_t u = 1; u < n; ++u) open.push_back(static_cast<VertexId>(u));

    std::vector<ColoredEdge> out;
    out.reserve(m);
    while (out.size() < m && !open.empty()) {
        std::size_t slot = std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng);
        VertexId u = open[slot];
        int budget = std::min<int>(static_cast<int>(u), d);

        // All smaller-id neighbors of u are the <= d edges u owns, so a
        // uniform draw below u collides rarely; fall back to a scan when u
        // is small enough for collisions to stall the loop.
        VertexId v = u; // sentinel: not found
        if (static_cast<int>(u) > 2 * budget) {
            for (int tries = 0; tries < 64; ++tries) {
                VertexId cand = std::uniform_int_distribution<VertexId>(0, u - 1)(rng);
                if (!present.count(pair_key(cand, u))) {
                    v = cand;
                    break;
                }
            }
        }
        if (v == u) {
            std::vector<VertexId> frees;
            for (VertexId cand = 0; cand < u; ++cand)
                if (!present.count(pair_key(cand, u))) frees.push_back(cand);
            if (frees.empty()) {
                owned[u] = budget; // below-neighborhood full; retire u
            } else {
                v = frees[std::uniform_int_distribution<std::size_t>(0, frees.size() - 1)(rng)];
            }
        }
        if (v != u) {
            present.insert(pair_key(v, u));
            out.push_back({v, u, static_cast<Color>(
                                     std::uniform_int_distribution<int>(1, k)(rng))});
            ++owned[u];
        }
        if (owned[u] >= budget) {
            open[slot] = open.back();
            open.pop_back();
        }
    }
    return out;
}

} // namespace subcount
