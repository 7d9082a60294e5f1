#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "error.hpp"
#include "visibility.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/test_rng.hpp"

#include <cmath>

using namespace wsplan;
using namespace wsplan::testing;

TEST_CASE("empty scene: direct segment, exact length") {
    Scene scene = empty_scene(5.0);
    VisibilityGraph g(scene, 0.0);
    CHECK(g.nodes().empty());
    auto path = g.shortest_path({-1, 0}, {1, 0});
    REQUIRE(path.size() == 2);
    double len = 0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) len += distance(path[i], path[i + 1]);
    CHECK(len == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("unit square r=0: 4 corner nodes, perimeter edges, no diagonals") {
    Scene scene(Bounds{-5, -5, 5, 5}, {box(0, 0, 1, 1)});
    VisibilityGraph g(scene, 0.0);
    REQUIRE(g.nodes().size() == 4);

    int edge_count = 0;
    for (const auto& adj : g.edges()) edge_count += static_cast<int>(adj.size());
    edge_count /= 2;
    CHECK(edge_count == 4);

    // Oracle: brute-force segment-vs-polygon check over all node pairs.
    const Polygon& sq = scene.obstacles()[0];
    int oracle_count = 0;
    for (std::size_t i = 0; i < g.nodes().size(); ++i) {
        for (std::size_t j = i + 1; j < g.nodes().size(); ++j) {
            Segment s{g.nodes()[i], g.nodes()[j]};
            Point mid = (s.a + s.b) * 0.5;
            bool through_interior = point_in_polygon(mid, sq) == Containment::inside;
            if (!through_interior) ++oracle_count;
        }
    }
    CHECK(oracle_count == 4);
}

TEST_CASE("unit square r=0.1: nodes sit sqrt(2)*r outward along diagonals") {
    Scene scene(Bounds{-5, -5, 5, 5}, {box(0, 0, 1, 1)});
    double r = 0.1;
    VisibilityGraph g(scene, r);
    REQUIRE(g.nodes().size() == 4);
    for (const Point& n : g.nodes()) {
        double best = std::numeric_limits<double>::infinity();
        for (const Point& c : scene.obstacles()[0].vertices()) best = std::min(best, distance(n, c));
        CHECK(best == doctest::Approx(std::sqrt(2.0) * r).epsilon(1e-9));
        // The corner itself is the nearest obstacle feature.
        CHECK(point_polygon_boundary_distance(n, scene.obstacles()[0]) >= r - kEpsGeom);
    }
}

TEST_CASE("square detour path length matches the corner route") {
    // Unit square centered at origin, r=0, (-2,0) -> (2,0).
    Scene scene(Bounds{-5, -5, 5, 5}, {box(-0.5, -0.5, 0.5, 0.5)});
    VisibilityGraph g(scene, 0.0);
    auto path = g.shortest_path({-2, 0}, {2, 0});
    double len = 0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) len += distance(path[i], path[i + 1]);
    // Two diagonal legs to the top corners plus the straight top edge.
    double expected = 2.0 * std::sqrt(1.5 * 1.5 + 0.5 * 0.5) + 1.0;
    CHECK(len == doctest::Approx(expected).epsilon(1e-9));

    // Grid-Dijkstra oracle agreement within 1%.
    GridOracle grid(scene, 500, 500);
    double oracle = grid.dijkstra({-2, 0}, {2, 0});
    CHECK(len <= oracle * 1.01);
    CHECK(len >= distance(Point{-2, 0}, Point{2, 0}));
}

TEST_CASE("narrow passage blocks when 2r exceeds the width") {
    // Passage of width 0.3 between two boxes; r = 0.2 cannot fit.
    Scene scene(Bounds{-5, -5, 5, 5}, {box(-4.9, -3, -0.15, 3), box(0.15, -3, 4.9, 3)});
    VisibilityGraph g(scene, 0.2);
    CHECK_THROWS_AS(g.shortest_path({0, -4.5}, {0, 4.5}), Error);

    // r = 0.1 fits through the same passage.
    VisibilityGraph g2(scene, 0.1);
    auto path = g2.shortest_path({0, -4.5}, {0, 4.5});
    CHECK(path.size() >= 2);
}

TEST_CASE("invalid endpoints raise invalid-endpoint") {
    Scene scene(Bounds{-5, -5, 5, 5}, {box(-1, -1, 1, 1)});
    VisibilityGraph g(scene, 0.1);
    try {
        g.shortest_path({0, 0}, {3, 3});
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::invalid_endpoint);
    }
    CHECK_THROWS_AS(g.shortest_path({1.05, 0}, {3, 3}), Error); // within r of the box
}

TEST_CASE("path edges keep the requested clearance") {
    Rng rng(913);
    for (int trial = 0; trial < 10; ++trial) {
        Scene scene = random_scene(rng, 3);
        double r = uniform(rng, 0.0, 0.15);
        VisibilityGraph g(scene, r);
        Point start{uniform(rng, -4.5, -3.5), uniform(rng, -4.5, 4.5)};
        Point goal{uniform(rng, 3.5, 4.5), uniform(rng, -4.5, 4.5)};
        auto clear = [&](const Point& p) {
            for (const Polygon& obs : scene.obstacles())
                if (point_polygon_signed_distance(p, obs) < r) return false;
            return true;
        };
        if (!clear(start) || !clear(goal)) continue;
        std::vector<Point> path;
        try {
            path = g.shortest_path(start, goal);
        } catch (const Error&) {
            continue;
        }
        double len = 0;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            len += distance(path[i], path[i + 1]);
            for (int s = 0; s <= 20; ++s) {
                Point p = path[i] + (path[i + 1] - path[i]) * (s / 20.0);
                for (const Polygon& obs : scene.obstacles()) {
                    CHECK(!penetration_vector(DiskProbe{p, std::max(0.0, r - 1e-7)}, obs).has_value());
                }
            }
        }
        CHECK(len >= distance(start, goal) - 1e-9);
    }
}

TEST_CASE("random scenes: within 2% of the grid-Dijkstra oracle") {
    Rng rng(914);
    int compared = 0;
    for (int trial = 0; trial < 12 && compared < 8; ++trial) {
        Scene scene = random_scene(rng, 3);
        VisibilityGraph g(scene, 0.0);
        Point start{uniform(rng, -4.6, -3.6), uniform(rng, -4.6, 4.6)};
        Point goal{uniform(rng, 3.6, 4.6), uniform(rng, -4.6, 4.6)};
        if (scene.clearance(start) <= 0.05 || scene.clearance(goal) <= 0.05) continue;
        std::vector<Point> path;
        try {
            path = g.shortest_path(start, goal);
        } catch (const Error&) {
            continue;
        }
        double len = 0;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) len += distance(path[i], path[i + 1]);
        GridOracle grid(scene, 400, 400);
        double oracle = grid.dijkstra(start, goal);
        if (!std::isfinite(oracle)) continue;
        CHECK(len <= oracle * 1.02);
        CHECK(len >= distance(start, goal) - 1e-9);
        ++compared;
    }
    CHECK(compared >= 8);
}
