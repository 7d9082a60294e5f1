#include "robot_check.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>

namespace wsplan {

namespace {

// Composite link shape vs one obstacle: candidates from the endpoint disks
// and the body rectangle; returns the shortest translation that actually
// separates the whole link, or the deepest candidate when none does.
std::optional<Vec2> link_obstacle_mtv(const Point& a, const Point& b, const Link& link,
                                      const RobotModel& model, const Polygon& obs) {
    DiskProbe da{a, model.radius(link.a)};
    DiskProbe db{b, model.radius(link.b)};
    RectProbe body{{a, b}, link.width / 2};

    std::vector<Vec2> candidates;
    if (auto v = penetration_vector(da, obs)) candidates.push_back(*v);
    if (auto v = penetration_vector(db, obs)) candidates.push_back(*v);
    if (link.width > 0 || norm(b - a) > kEpsGeom) {
        if (auto v = penetration_vector(body, obs)) candidates.push_back(*v);
    }
    if (candidates.empty()) return std::nullopt;

    std::sort(candidates.begin(), candidates.end(), [](const Vec2& x, const Vec2& y) {
        double nx = norm(x), ny = norm(y);
        if (std::abs(nx - ny) > kEpsGeom) return nx < ny;
        if (x.x != y.x) return x.x < y.x;
        return x.y < y.y;
    });
    auto separated = [&](const Vec2& shift) {
        Vec2 s = shift * (1.0 + 1e-9);
        if (penetration_vector(DiskProbe{a + s, da.radius}, obs)) return false;
        if (penetration_vector(DiskProbe{b + s, db.radius}, obs)) return false;
        if (penetration_vector(RectProbe{{a + s, b + s}, body.half_width}, obs)) return false;
        return true;
    };
    for (const Vec2& cand : candidates)
        if (separated(cand)) return cand;
    return candidates.back();
}

} // namespace

bool link_collides(const Point& a, const Point& b, const Link& link, const RobotModel& model,
                   const Scene& scene, Vec2* mtv_out, int* obstacle_out) {
    for (std::size_t k = 0; k < scene.obstacle_count(); ++k) {
        if (auto mtv = link_obstacle_mtv(a, b, link, model, scene.obstacles()[k])) {
            if (mtv_out) *mtv_out = *mtv;
            if (obstacle_out) *obstacle_out = static_cast<int>(k);
            return true;
        }
    }
    return false;
}

std::vector<CollisionEntry> robot_collides(const RobotState& state, const RobotModel& model,
                                           const Scene& scene) {
    if (state.positions.size() != model.keypoint_count())
        throw Error(Errc::bad_argument, "state does not cover all model keypoints");
    std::vector<CollisionEntry> report;
    for (std::size_t li = 0; li < model.links().size(); ++li) {
        const Link& link = model.links()[li];
        const Point& a = state.positions[static_cast<std::size_t>(link.a)];
        const Point& b = state.positions[static_cast<std::size_t>(link.b)];
        for (std::size_t k = 0; k < scene.obstacle_count(); ++k) {
            if (auto mtv = link_obstacle_mtv(a, b, link, model, scene.obstacles()[k]))
                report.push_back({static_cast<int>(li), static_cast<int>(k), *mtv});
        }
    }
    return report;
}

std::vector<std::pair<int, int>> self_crossing(const RobotState& state, const RobotModel& model) {
    std::vector<std::pair<int, int>> out;
    const auto& links = model.links();
    for (std::size_t i = 0; i < links.size(); ++i) {
        for (std::size_t j = i + 1; j < links.size(); ++j) {
            // Adjacent links sharing a keypoint are exempt.
            if (links[i].a == links[j].a || links[i].a == links[j].b || links[i].b == links[j].a ||
                links[i].b == links[j].b)
                continue;
            Segment si{state.positions[static_cast<std::size_t>(links[i].a)],
                       state.positions[static_cast<std::size_t>(links[i].b)]};
            Segment sj{state.positions[static_cast<std::size_t>(links[j].a)],
                       state.positions[static_cast<std::size_t>(links[j].b)]};
            if (segments_touch(si, sj)) out.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
    }
    return out;
}

std::pair<Point, Point> sweep_interpolate(const Point& a0, const Point& b0, const Point& a1,
                                          const Point& b1, double length, double t,
                                          const Vec2& fallback_dir) {
    Point a = a0 * (1.0 - t) + a1 * t;
    Point b = b0 * (1.0 - t) + b1 * t;
    Point mid = (a + b) * 0.5;
    Vec2 dir = a - b;
    double d = norm(dir);
    Vec2 u = d > kEpsGeom ? dir / d : fallback_dir;
    return {mid + u * (length / 2), mid - u * (length / 2)};
}

SweepResult sweep_check(int link_index, const RobotState& state_a, const RobotState& state_b,
                        const RobotModel& model, const Scene& scene, int steps) {
    const Link& link = model.links().at(static_cast<std::size_t>(link_index));
    const Point& a0 = state_a.positions[static_cast<std::size_t>(link.a)];
    const Point& b0 = state_a.positions[static_cast<std::size_t>(link.b)];
    const Point& a1 = state_b.positions[static_cast<std::size_t>(link.a)];
    const Point& b1 = state_b.positions[static_cast<std::size_t>(link.b)];

    Vec2 fallback = normalized(a0 - b0);
    if (norm(fallback) <= 0.0) fallback = {1.0, 0.0};
    for (int i = 0; i <= steps; ++i) {
        double t = static_cast<double>(i) / steps;
        auto [a, b] = sweep_interpolate(a0, b0, a1, b1, link.length, t, fallback);
        Vec2 d = a - b;
        if (norm(d) > kEpsGeom) fallback = normalized(d);
        if (link_collides(a, b, link, model, scene)) return {false, t};
    }
    return {true, -1.0};
}

} // namespace wsplan
