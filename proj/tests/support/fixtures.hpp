#pragma once

// Shared scene and robot fixtures for tests.

#include "scene.hpp"
#include "test_rng.hpp"

#include <cmath>

namespace wsplan::testing {

inline Scene empty_scene(double half = 5.0) {
    return Scene(Bounds{-half, -half, half, half}, {});
}

inline Polygon box(double xmin, double ymin, double xmax, double ymax) {
    return Polygon({{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}});
}

// Chain arm: keypoint 0 is the (moving) base, links of equal length.
inline RobotModel chain_arm(int links, double length, double radius, double width) {
    std::vector<Keypoint> kps;
    std::vector<Link> ls;
    for (int i = 0; i <= links; ++i) kps.push_back({i, radius});
    for (int i = 0; i < links; ++i) ls.push_back({i, i + 1, length, width});
    return RobotModel(std::move(kps), std::move(ls), 0);
}

// Straight or angle-specified chain state anchored at `base`. angles[0] is
// absolute, the rest are relative joint angles.
inline RobotState chain_state(const RobotModel& model, Point base, const std::vector<double>& angles) {
    RobotState st;
    st.positions.assign(model.keypoint_count(), base);
    double a = 0.0;
    Point cur = base;
    for (std::size_t i = 0; i < model.links().size(); ++i) {
        a = (i == 0) ? angles[0] : a + angles[i];
        const Link& l = model.bfs_links()[i];
        cur = cur + Vec2{std::cos(a), std::sin(a)} * l.length;
        st.positions[static_cast<std::size_t>(l.b)] = cur;
    }
    return st;
}

// Random scene with well-separated convex obstacles (min gap enforced).
inline Scene random_scene(Rng& rng, int obstacles, double half = 5.0, double min_gap = 0.5) {
    std::vector<Polygon> polys;
    int guard = 0;
    while (static_cast<int>(polys.size()) < obstacles && guard++ < 2000) {
        Point c{uniform(rng, -half + 1.5, half - 1.5), uniform(rng, -half + 1.5, half - 1.5)};
        double r = uniform(rng, 0.4, 1.0);
        std::vector<Point> pts;
        int n = uniform_int(rng, 5, 9);
        for (int i = 0; i < n + 4; ++i) {
            double ang = uniform(rng, 0, 2 * M_PI);
            double rr = uniform(rng, 0.4 * r, r);
            pts.push_back({c.x + rr * std::cos(ang), c.y + rr * std::sin(ang)});
        }
        Polygon cand = convex_hull(pts);
        bool ok = true;
        for (const Point& p : cand.vertices())
            if (std::abs(p.x) > half - 0.3 || std::abs(p.y) > half - 0.3) ok = false;
        for (const Polygon& other : polys)
            if (ok && polygon_polygon_distance(cand, other) < min_gap) ok = false;
        if (ok) polys.push_back(cand);
    }
    return Scene(Bounds{-half, -half, half, half}, std::move(polys));
}

} // namespace wsplan::testing
