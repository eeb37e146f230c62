#include <doctest.h>

#include <algorithm>
#include <vector>

#include "subcount/errors.hpp"
#include "subcount/graph.hpp"
#include "subcount/oracle.hpp"
#include "subcount/pattern.hpp"

using namespace subcount;

namespace {

Pattern make_pattern(std::uint8_t n, std::vector<PatternEdge> edges) {
    std::sort(edges.begin(), edges.end());
    Pattern p{n, std::move(edges)};
    validate_pattern(p);
    return p;
}

ColoredGraph host(std::size_t n, const std::vector<std::tuple<VertexId, VertexId, Color>>& edges) {
    ColoredGraph g;
    for (std::size_t i = 0; i < n; ++i) g.add_vertex();
    for (const auto& [u, v, c] : edges) g.add_edge(u, v, c);
    return g;
}

const Pattern kEdge = make_pattern(2, {{0, 1, 1}});
const Pattern kP3 = make_pattern(3, {{0, 1, 1}, {1, 2, 1}});
const Pattern kP4 = make_pattern(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}});
const Pattern kK3 = make_pattern(3, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}});
const Pattern kC4 = make_pattern(4, {{0, 1, 1}, {0, 3, 1}, {1, 2, 1}, {2, 3, 1}});
const Pattern kPaw = make_pattern(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}});

} // namespace

TEST_CASE("counts on the monochrome triangle") {
    auto g = host(3, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}});

    CHECK(hom_count(kEdge, g) == Count(6));
    CHECK(sub_count(kEdge, g) == Count(6));
    CHECK(isub_count(kEdge, g) == Count(6));

    CHECK(hom_count(kP3, g) == Count(12));
    CHECK(sub_count(kP3, g) == Count(6));
    CHECK(isub_count(kP3, g) == Count(0)); // any 3 vertices induce the third edge

    CHECK(hom_count(kK3, g) == Count(6));
    CHECK(sub_count(kK3, g) == Count(6));
    CHECK(isub_count(kK3, g) == Count(6));

    // No injective image for 4 pattern vertices in a 3-vertex host.
    CHECK(sub_count(kP4, g) == Count(0));
    CHECK(hom_count(kP4, g) == Count(24));
}

TEST_CASE("counts on the monochrome 4-cycle") {
    auto g = host(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {0, 3, 1}});

    CHECK(hom_count(kEdge, g) == Count(8));
    CHECK(hom_count(kP3, g) == Count(16));
    CHECK(sub_count(kP3, g) == Count(8));
    CHECK(isub_count(kP3, g) == Count(8)); // every vertex triple induces a bare path

    CHECK(hom_count(kC4, g) == Count(32));
    CHECK(sub_count(kC4, g) == Count(8)); // one copy times its 8 symmetries
    CHECK(isub_count(kC4, g) == Count(8));

    CHECK(hom_count(kK3, g) == Count(0));
    CHECK(sub_count(kK3, g) == Count(0));
    CHECK(isub_count(kK3, g) == Count(0));
}

TEST_CASE("counts on the paw") {
    // Triangle 0-1-2 plus pendant 3 hanging off 0.
    auto g = host(4, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {0, 3, 1}});

    CHECK(sub_count(kPaw, g) == Count(2)); // |Aut(paw)| = 2
    CHECK(isub_count(kPaw, g) == Count(2));

    CHECK(sub_count(kP4, g) == Count(4)); // 3-0-1-2, 3-0-2-1 and reverses
    CHECK(isub_count(kP4, g) == Count(0)); // the only 4 vertices induce extra edges

    CHECK(sub_count(kK3, g) == Count(6));
    CHECK(isub_count(kK3, g) == Count(6));
}

TEST_CASE("self-counts match automorphism group sizes") {
    auto c4 = host(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {0, 3, 1}});
    auto k3 = host(3, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}});
    auto p4 = host(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}});
    auto paw = host(4, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {0, 3, 1}});

    CHECK(sub_count(kC4, c4) == Count(8));
    CHECK(sub_count(kK3, k3) == Count(6));
    CHECK(sub_count(kP4, p4) == Count(2));
    CHECK(sub_count(kPaw, paw) == Count(2));
}

TEST_CASE("edge colors constrain every map kind") {
    // Triangle with one off-color edge: (0,1) and (0,2) carry 1, (1,2) carries 2.
    auto g = host(3, {{0, 1, 1}, {0, 2, 1}, {1, 2, 2}});

    CHECK(hom_count(kEdge, g) == Count(4));
    auto edge2 = make_pattern(2, {{0, 1, 2}});
    CHECK(hom_count(edge2, g) == Count(2));

    // Path colored (1, 2): must bend at a vertex meeting both colors.
    auto p3_12 = make_pattern(3, {{0, 1, 1}, {1, 2, 2}});
    CHECK(hom_count(p3_12, g) == Count(2));
    CHECK(sub_count(p3_12, g) == Count(2));
    CHECK(isub_count(p3_12, g) == Count(0)); // the image closes a triangle

    // Monochrome path: bending at 0 gives 2x2 maps, at 1 or 2 one each.
    CHECK(hom_count(kP3, g) == Count(6));
    CHECK(sub_count(kP3, g) == Count(2));
    CHECK(isub_count(kP3, g) == Count(0));

    // Full colored triangle matches itself in its 2 automorphisms.
    auto tri_12 = make_pattern(3, {{0, 1, 1}, {0, 2, 1}, {1, 2, 2}});
    CHECK(sub_count(tri_12, g) == Count(2));
    CHECK(isub_count(tri_12, g) == Count(2));
}

TEST_CASE("disconnected patterns multiply through") {
    auto g = host(3, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}});
    auto edge_plus_dot = make_pattern(3, {{0, 1, 1}});

    CHECK(hom_count(edge_plus_dot, g) == Count(18)); // 6 edge maps x 3 vertices
    CHECK(sub_count(edge_plus_dot, g) == Count(6));  // the third vertex is forced
    CHECK(isub_count(edge_plus_dot, g) == Count(0)); // it is always adjacent
}

TEST_CASE("hosts with non-contiguous vertex ids") {
    ColoredGraph g;
    g.add_vertex();
    g.add_vertex();
    g.add_vertex();
    g.remove_vertex(1);
    g.add_edge(0, 2, 3);

    auto e3 = make_pattern(2, {{0, 1, 3}});
    CHECK(hom_count(e3, g) == Count(2));
    CHECK(isub_count(e3, g) == Count(2));
}

TEST_CASE("directed homomorphisms with and without pins") {
    DigraphData g;
    g.vertices = {0, 1, 2};
    g.edges = {{0, 1, 1, 0}, {1, 2, 1, 0}, {2, 0, 2, 0}};

    DirectedPattern arc{2, {{0, 1, 1}}};
    CHECK(dihom_count(arc, g) == Count(2));

    std::array<std::optional<VertexId>, kMaxPatternVertices> pins{};
    pins[0] = 1;
    CHECK(dihom_count_pinned(arc, g, pins) == Count(1));
    pins[0].reset();
    pins[1] = 1;
    CHECK(dihom_count_pinned(arc, g, pins) == Count(1));

    DirectedPattern path{3, {{0, 1, 1}, {1, 2, 1}}};
    CHECK(dihom_count(path, g) == Count(1)); // 0 -> 1 -> 2 only

    // Maps need not be injective: both sources may share an image.
    DirectedPattern fork{3, {{0, 1, 1}, {2, 1, 1}}};
    DigraphData h;
    h.vertices = {0, 1, 2};
    h.edges = {{0, 2, 1, 0}, {1, 2, 1, 0}};
    CHECK(dihom_count(fork, h) == Count(4));

    // Isolated pattern vertices contribute a host-size factor.
    DirectedPattern arc_plus_dot{3, {{0, 1, 1}}};
    CHECK(dihom_count(arc_plus_dot, g) == Count(6));
}

TEST_CASE("oracle limits guard runaway inputs") {
    auto g = host(2, {{0, 1, 1}});
    Pattern big;
    big.n = 7;
    for (std::uint8_t v = 1; v < 7; ++v) big.edges.push_back({0, v, 1});
    validate_pattern(big);
    CHECK_THROWS_AS((void)hom_count(big, g), GuardError);

    ColoredGraph wide;
    for (int i = 0; i < 65; ++i) wide.add_vertex();
    CHECK_THROWS_AS((void)hom_count(kEdge, wide), GuardError);

    OracleLimits open;
    open.unchecked = true;
    CHECK(hom_count(kEdge, wide, open) == Count(0));
    CHECK(hom_count(big, g, open) == Count(2)); // all six leaves share one image
    CHECK(sub_count(big, g, open) == Count(0));
}
