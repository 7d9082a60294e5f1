#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "error.hpp"
#include "geom.hpp"
#include "support/oracles.hpp"
#include "support/test_rng.hpp"

#include <cmath>

using namespace wsplan;
using namespace wsplan::testing;

namespace {

Polygon unit_square() {
    return Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

Polygon random_convex_polygon(Rng& rng, const Point& center, double radius, int n = 8) {
    std::vector<Point> pts;
    for (int i = 0; i < n + 4; ++i) {
        double ang = uniform(rng, 0, 2 * M_PI);
        double r = uniform(rng, 0.3 * radius, radius);
        pts.push_back({center.x + r * std::cos(ang), center.y + r * std::sin(ang)});
    }
    return convex_hull(pts);
}

} // namespace

TEST_CASE("segment_intersect handles crossings, disjoint, and overlaps") {
    auto res = segment_intersect({{0, 0}, {2, 0}}, {{1, -1}, {1, 1}});
    REQUIRE(res.kind == SegmentIntersection::Kind::point);
    CHECK(distance(res.point, {1, 0}) < 1e-12);

    res = segment_intersect({{0, 0}, {1, 0}}, {{2, 0}, {3, 0}});
    CHECK(res.kind == SegmentIntersection::Kind::none);

    res = segment_intersect({{0, 0}, {2, 0}}, {{1, 0}, {3, 0}});
    REQUIRE(res.kind == SegmentIntersection::Kind::overlap);
    CHECK(distance(res.overlap.a, {1, 0}) < 1e-12);
    CHECK(distance(res.overlap.b, {2, 0}) < 1e-12);
}

TEST_CASE("segment_intersect endpoint touch counts") {
    auto res = segment_intersect({{0, 0}, {1, 0}}, {{1, 0}, {1, 1}});
    REQUIRE(res.kind == SegmentIntersection::Kind::point);
    CHECK(distance(res.point, {1, 0}) < 1e-12);

    // T-junction: endpoint on interior.
    res = segment_intersect({{0, 0}, {2, 0}}, {{1, 0}, {1, 5}});
    REQUIRE(res.kind == SegmentIntersection::Kind::point);
    CHECK(distance(res.point, {1, 0}) < 1e-12);
}

TEST_CASE("segment_intersect is symmetric") {
    Rng rng(101);
    for (int i = 0; i < 500; ++i) {
        Segment s1{{uniform(rng, -2, 2), uniform(rng, -2, 2)}, {uniform(rng, -2, 2), uniform(rng, -2, 2)}};
        Segment s2{{uniform(rng, -2, 2), uniform(rng, -2, 2)}, {uniform(rng, -2, 2), uniform(rng, -2, 2)}};
        auto a = segment_intersect(s1, s2);
        auto b = segment_intersect(s2, s1);
        REQUIRE(a.kind == b.kind);
        if (a.kind == SegmentIntersection::Kind::point) CHECK(distance(a.point, b.point) < 1e-9);
    }
}

TEST_CASE("point_in_polygon ternary classification") {
    Polygon sq = unit_square();
    CHECK(point_in_polygon({0.5, 0.5}, sq) == Containment::inside);
    CHECK(point_in_polygon({1.0, 0.5}, sq) == Containment::boundary);
    CHECK(point_in_polygon({2.0, 2.0}, sq) == Containment::outside);
}

TEST_CASE("point_in_polygon agrees with winding-number oracle") {
    Rng rng(202);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Polygon poly = random_convex_polygon(rng, {uniform(rng, -1, 1), uniform(rng, -1, 1)}, 1.0);
        Point p{uniform(rng, -2.5, 2.5), uniform(rng, -2.5, 2.5)};
        Containment got = point_in_polygon(p, poly);
        Containment want = winding_containment(p, poly);
        // Both sides classify boundary by the same epsilon; skip knife-edge
        // cases within 10x the tolerance of the boundary.
        double bd = point_polygon_boundary_distance(p, poly);
        if (bd <= 10 * kEpsGeom) continue;
        REQUIRE(got == want);
        ++checked;
    }
    CHECK(checked > 900);
}

TEST_CASE("convex_hull drops interior points and keeps convexity") {
    Polygon hull = convex_hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}});
    CHECK(hull.size() == 4);

    Polygon tri = convex_hull({{0, 0}, {2, 0}, {1, 1}});
    CHECK(tri.size() == 3);

    CHECK_THROWS_AS(convex_hull({{0, 0}, {1, 1}}), Error);
    CHECK_THROWS_AS(convex_hull({{0, 0}, {1, 1}, {2, 2}, {3, 3}}), Error);
}

TEST_CASE("convex_hull of random disk points passes half-plane oracle") {
    Rng rng(303);
    std::vector<Point> pts;
    for (int i = 0; i < 100; ++i) {
        double ang = uniform(rng, 0, 2 * M_PI);
        double r = std::sqrt(uniform(rng, 0, 1));
        pts.push_back({r * std::cos(ang), r * std::sin(ang)});
    }
    Polygon hull = convex_hull(pts);
    CHECK(hull.is_convex());
    CHECK(hull_contains_all(hull, pts));
    for (const Point& hv : hull.vertices()) {
        bool found = false;
        for (const Point& p : pts)
            if (distance(hv, p) < 1e-12) found = true;
        CHECK(found);
    }
}

TEST_CASE("penetration_vector disk against unit square") {
    Polygon sq = unit_square();

    auto v = penetration_vector(DiskProbe{{0.9, 0.5}, 0.2}, sq);
    REQUIRE(v.has_value());
    CHECK(std::abs(v->x - 0.3) < 1e-9);
    CHECK(std::abs(v->y) < 1e-9);

    CHECK(!penetration_vector(DiskProbe{{3, 3}, 0.1}, sq).has_value());

    // Center exactly on edge midpoint, r = 0: depth 0, outward normal.
    auto b = penetration_vector(DiskProbe{{1.0, 0.5}, 0.0}, sq);
    REQUIRE(b.has_value());
    CHECK(norm(*b) < 1e-9);
}

TEST_CASE("penetration_vector matches dense directional sampling oracle") {
    Rng rng(404);
    for (int trial = 0; trial < 25; ++trial) {
        Polygon poly = random_convex_polygon(rng, {0, 0}, 1.0);
        DiskProbe probe{{uniform(rng, -1.2, 1.2), uniform(rng, -1.2, 1.2)}, uniform(rng, 0.05, 0.4)};
        auto v = penetration_vector(probe, poly);
        double oracle = disk_penetration_depth_sampled(probe, poly, 720);
        if (!v.has_value()) {
            CHECK(oracle < 1e-6);
        } else {
            CHECK(norm(*v) == doctest::Approx(oracle).epsilon(0.02));
        }
    }
}

TEST_CASE("applying the penetration vector separates the probe") {
    Rng rng(505);
    for (int trial = 0; trial < 100; ++trial) {
        Polygon poly = random_convex_polygon(rng, {0, 0}, 1.0);
        DiskProbe probe{{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)}, uniform(rng, 0.05, 0.5)};
        auto v = penetration_vector(probe, poly);
        if (!v) continue;
        DiskProbe moved{probe.center + *v * (1.0 + 1e-9), probe.radius};
        auto again = penetration_vector(moved, poly);
        if (again) CHECK(norm(*again) <= 1e-6);
    }
}

TEST_CASE("penetration_vector rectangle probe") {
    Polygon sq = unit_square();
    RectProbe probe{{{-0.5, 0.5}, {0.5, 0.5}}, 0.05};
    auto v = penetration_vector(probe, sq);
    REQUIRE(v.has_value());
    // Push left is the cheapest separation.
    CHECK(v->x == doctest::Approx(-0.5).epsilon(1e-6));

    RectProbe clear{{{-2, 0.5}, {-1.5, 0.5}}, 0.1};
    CHECK(!penetration_vector(clear, sq).has_value());

    // Applying the vector separates.
    Rng rng(606);
    for (int trial = 0; trial < 60; ++trial) {
        Polygon poly = random_convex_polygon(rng, {0, 0}, 1.0);
        Point a{uniform(rng, -1.2, 1.2), uniform(rng, -1.2, 1.2)};
        Point b = a + Vec2{uniform(rng, -0.8, 0.8), uniform(rng, -0.8, 0.8)};
        RectProbe p{{a, b}, uniform(rng, 0.01, 0.15)};
        if (norm(b - a) < 0.05) continue;
        auto mtv = penetration_vector(p, poly);
        if (!mtv) continue;
        Vec2 shift = *mtv * (1.0 + 1e-9);
        RectProbe moved{{a + shift, b + shift}, p.half_width};
        auto again = penetration_vector(moved, poly);
        if (again) CHECK(norm(*again) <= 1e-6);
    }
}

TEST_CASE("polygon validation rejects bad input") {
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}}), Error);
    CHECK_THROWS_AS(Polygon({{0, 0}, {0, 1}, {1, 1}}), Error); // clockwise
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), Error); // bowtie
    CHECK_THROWS_AS(Polygon({{0, 0}, {0, 0}, {1, 0}, {1, 1}}), Error); // repeated vertex
}

TEST_CASE("ear_clip covers the polygon area") {
    Polygon concave({{0, 0}, {4, 0}, {4, 3}, {2, 1}, {0, 3}});
    auto tris = ear_clip(concave);
    double area = 0;
    for (const auto& t : tris)
        area += 0.5 * std::abs(cross(t[1] - t[0], t[2] - t[0]));
    CHECK(area == doctest::Approx(concave.area()).epsilon(1e-9));
}
