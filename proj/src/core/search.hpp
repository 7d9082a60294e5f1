#pragma once

#include "decomp.hpp"
#include "robot_check.hpp"
#include "visibility.hpp"

#include <cmath>
#include <vector>

namespace wsplan {

struct SearchParams {
    double eps_state = 1e-9;        // link length exactness
    int max_penetration_pushes = 3; // translation attempts per adjustment
    double delta_phi = M_PI / 36;   // rotational sweep increment
    int max_rotations = 72;         // alternating-sign sweep budget
    int sweep_steps = 32;           // per state pair, per link
    int self_cross_samples = 64;    // dense interpolation samples
    int k_best_routes = 5;          // route fallback cap
    int max_subdivisions = 8;       // insertion recursion depth
};

// One step of the state search: advance the root keypoint to the next
// base-path waypoint, then place the remaining keypoints in BFS order from
// the root, each toward its previous position, adjusting out of collision.
RobotState find_next_state(const RobotState& current, const std::vector<Point>& base_path,
                           const RobotModel& model, const Scene& scene,
                           const SearchParams& params = {});

// Full per-link sweep + dense self-crossing validity of the interpolation
// between two states.
bool interpolation_valid(const RobotState& a, const RobotState& b, const RobotModel& model,
                         const Scene& scene, const SearchParams& params = {});

// Collision-free, constraint-exact state that straightens the sub-chain
// spanning the crossing links; resolves Fig.2-style self-crossings.
RobotState insert_unfolding_state(const RobotState& a, const RobotState& b,
                                  const std::vector<std::pair<int, int>>& crossing,
                                  const RobotModel& model, const Scene& scene,
                                  const SearchParams& params = {});

// Via state for a colliding interpolation: routes the first failing link's
// child keypoint through a local visibility detour.
RobotState insert_visibility_state(const RobotState& a, const RobotState& b, const RobotModel& model,
                                   const Scene& scene, const SearchParams& params = {});

// The sequence of collision-free intermediate robot states along a chosen
// topological route, ready for coordination.
std::vector<RobotState> plan_intermediate_states(const RobotState& start, const RobotState& goal,
                                                 const RobotModel& model, const Scene& scene,
                                                 const Decomposition& decomposition,
                                                 const SearchParams& params = {});

} // namespace wsplan
