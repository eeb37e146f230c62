#pragma once

#include <cstdint>
#include <vector>

#include "subcount/graph.hpp"

namespace subcount {

// Deterministically generates an insertion stream over vertices 0..n-1 whose
// running graph always has degeneracy <= d: every vertex owns at most
// min(id, d) edges, each pointing to a uniformly chosen smaller id. Returns
// up to m edges (fewer only if the budget d*(n-1) saturates first); colors
// are uniform in 1..k.
std::vector<ColoredEdge> bounded_degeneracy_stream(std::size_t n, int d, std::size_t m, Color k,
                                                   std::uint64_t seed);

} // namespace subcount
