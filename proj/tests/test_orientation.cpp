#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "subcount/errors.hpp"
#include "subcount/orientation.hpp"

using namespace subcount;

namespace {

using DirMap = std::map<std::pair<VertexId, VertexId>, std::pair<VertexId, VertexId>>;

// Shadow replay: applies an event stream to a plain map keyed by the
// undirected pair, verifying the stream is self-consistent as it goes.
void replay(DirMap& shadow, const std::vector<OrientationEvent>& events) {
    for (const auto& ev : events) {
        auto key = std::minmax(ev.from, ev.to);
        switch (ev.kind) {
        case OrientationEventKind::Added:
            REQUIRE(!shadow.count(key));
            shadow[key] = {ev.from, ev.to};
            break;
        case OrientationEventKind::Removed:
            REQUIRE(shadow.at(key) == std::pair(ev.from, ev.to));
            shadow.erase(key);
            break;
        case OrientationEventKind::Flipped:
            REQUIRE(shadow.at(key) == std::pair(ev.from, ev.to));
            shadow[key] = {ev.to, ev.from};
            break;
        }
    }
}

DirMap snapshot(const BoundedOrientation& o) {
    DirMap m;
    for (auto [from, to] : o.oriented_edges())
        m[std::minmax(from, to)] = {from, to};
    return m;
}

} // namespace

TEST_CASE("single edge lifecycle") {
    BoundedOrientation o(4, 1);
    std::vector<OrientationEvent> ev;
    o.insert(5, 9, ev);
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].kind == OrientationEventKind::Added);
    CHECK(o.has_pair(9, 5));
    CHECK(o.edge_count() == 1);
    CHECK(o.max_in_degree() == 1);

    auto dir = o.orientation(5, 9);
    REQUIRE(dir.has_value());
    OrientationEvent rm = o.erase(5, 9);
    CHECK(rm.kind == OrientationEventKind::Removed);
    CHECK(std::pair(rm.from, rm.to) == *dir);
    CHECK(o.edge_count() == 0);
    CHECK(!o.has_pair(5, 9));
}

TEST_CASE("duplicate insert and missing erase throw") {
    BoundedOrientation o(4, 1);
    std::vector<OrientationEvent> ev;
    o.insert(0, 1, ev);
    CHECK_THROWS_AS(o.insert(1, 0, ev), GraphError);
    CHECK_THROWS_AS(o.erase(2, 3), GraphError);
    CHECK_THROWS_AS(o.insert(2, 2, ev), GraphError);
}

TEST_CASE("triangle under cap 1: all insertion orders and seeds") {
    const std::pair<VertexId, VertexId> edges[3] = {{0, 1}, {0, 2}, {1, 2}};
    int perm[3] = {0, 1, 2};
    std::sort(perm, perm + 3);
    do {
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            BoundedOrientation o(1, seed);
            DirMap shadow;
            for (int i = 0; i < 3; ++i) {
                std::vector<OrientationEvent> ev;
                o.insert(edges[perm[i]].first, edges[perm[i]].second, ev);
                replay(shadow, ev);
                CHECK(shadow == snapshot(o));
                CHECK(o.max_in_degree() <= o.cap());
            }
            CHECK(o.edge_count() == 3);
        }
    } while (std::next_permutation(perm, perm + 3));
}

TEST_CASE("strict policy rolls back an impossible insert") {
    // K4 admits no orientation with max in-degree <= 1, so the last inserts
    // must fail; the structure has to come back exactly as it was.
    BoundedOrientation o(1, 77, CapPolicy::Strict);
    std::vector<std::pair<VertexId, VertexId>> k4;
    for (VertexId i = 0; i < 4; ++i)
        for (VertexId j = i + 1; j < 4; ++j) k4.push_back({i, j});

    bool threw = false;
    for (auto [u, v] : k4) {
        DirMap before = snapshot(o);
        std::size_t count_before = o.edge_count();
        std::vector<OrientationEvent> ev;
        try {
            o.insert(u, v, ev);
            DirMap after = before;
            replay(after, ev);
            CHECK(after == snapshot(o));
        } catch (const SparsityError&) {
            threw = true;
            CHECK(snapshot(o) == before);
            CHECK(o.edge_count() == count_before);
            CHECK(!o.has_pair(u, v));
            CHECK(o.max_in_degree() <= o.cap());
        }
    }
    CHECK(threw);
    CHECK(o.cap() == 1); // strict never widens the cap
}

TEST_CASE("adaptive policy widens the cap instead of failing") {
    BoundedOrientation o(1, 3, CapPolicy::Adaptive);
    DirMap shadow;
    for (VertexId i = 0; i < 5; ++i) {
        for (VertexId j = i + 1; j < 5; ++j) {
            std::vector<OrientationEvent> ev;
            o.insert(i, j, ev);
            replay(shadow, ev);
            CHECK(shadow == snapshot(o));
        }
    }
    CHECK(o.edge_count() == 10);
    CHECK(o.rebuild_count() >= 1);
    CHECK(o.cap() > 1); // must have widened at least once
    CHECK(o.max_in_degree() <= o.cap());
}

TEST_CASE("erase touches exactly one edge") {
    BoundedOrientation o(4, 11);
    std::vector<OrientationEvent> ev;
    for (VertexId i = 0; i < 6; ++i)
        for (VertexId j = i + 1; j < 6; ++j) o.insert(i, j, ev);

    DirMap before = snapshot(o);
    OrientationEvent rm = o.erase(2, 4);
    CHECK(rm.kind == OrientationEventKind::Removed);
    before.erase({2, 4});
    CHECK(snapshot(o) == before);
}

TEST_CASE("random churn keeps the event stream replayable") {
    std::mt19937_64 rng(2024);
    BoundedOrientation o(4, 99);
    DirMap shadow;
    const VertexId n = 30;
    std::vector<std::pair<VertexId, VertexId>> live;
    for (int step = 0; step < 600; ++step) {
        bool do_insert = live.empty() || (rng() % 3 != 0);
        std::vector<OrientationEvent> ev;
        if (do_insert) {
            VertexId u = rng() % n, v = rng() % n;
            if (u == v || o.has_pair(u, v)) continue;
            o.insert(u, v, ev);
            live.push_back(std::minmax(u, v));
        } else {
            std::size_t idx = rng() % live.size();
            auto [u, v] = live[idx];
            ev.push_back(o.erase(u, v));
            live[idx] = live.back();
            live.pop_back();
        }
        replay(shadow, ev);
        CHECK(shadow == snapshot(o));
        CHECK(o.max_in_degree() <= o.cap());
    }
    CHECK(o.edge_count() == live.size());
}

TEST_CASE("manual rebuild keeps directions unless they must change") {
    BoundedOrientation o(4, 5);
    std::vector<OrientationEvent> ev;
    for (VertexId i = 0; i + 1 < 8; ++i) o.insert(i, i + 1, ev);
    DirMap shadow = snapshot(o);
    std::vector<OrientationEvent> rb;
    o.rebuild(8, rb);
    CHECK(o.cap() == 8);
    for (const auto& e : rb) CHECK(e.kind == OrientationEventKind::Flipped);
    replay(shadow, rb);
    CHECK(shadow == snapshot(o));
    CHECK(o.max_in_degree() <= 1); // a path re-orients to in-degree 1
}
