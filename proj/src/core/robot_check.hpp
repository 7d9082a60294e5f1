#pragma once

#include "scene.hpp"

#include <vector>

namespace wsplan {

struct CollisionEntry {
    int link = 0;     // index into model.links()
    int obstacle = 0; // obstacle id
    Vec2 mtv;         // minimum translation separating the link from the obstacle
};

// Every link is a width-w rectangle between its endpoints plus the endpoint
// disks of the keypoint radii.
std::vector<CollisionEntry> robot_collides(const RobotState& state, const RobotModel& model,
                                           const Scene& scene);
bool link_collides(const Point& a, const Point& b, const Link& link, const RobotModel& model,
                   const Scene& scene, Vec2* mtv_out = nullptr, int* obstacle_out = nullptr);

// Non-adjacent link pairs whose segments intersect; pairs are link indices
// (i, j) with i < j.
std::vector<std::pair<int, int>> self_crossing(const RobotState& state, const RobotModel& model);

struct SweepResult {
    bool pass = true;
    double first_failure_t = -1.0;
};

// Interpolates both endpoints of one link linearly over `steps` samples,
// renormalizing each pair to the exact link length (midpoint preserving), and
// checks the link against the scene at every sample.
SweepResult sweep_check(int link_index, const RobotState& state_a, const RobotState& state_b,
                        const RobotModel& model, const Scene& scene, int steps = 32);

// Length-preserving interpolation used by sweep_check: positions of the two
// endpoints at parameter t.
std::pair<Point, Point> sweep_interpolate(const Point& a0, const Point& b0, const Point& a1,
                                          const Point& b1, double length, double t,
                                          const Vec2& fallback_dir);

} // namespace wsplan
