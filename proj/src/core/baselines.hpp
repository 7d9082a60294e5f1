#pragma once

#include "robot_check.hpp"
#include "scene.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace wsplan {

// Configuration-space pose of a chain/tree robot: base position plus one
// angle per link (first absolute, the rest relative to the parent link).
struct ArmConfiguration {
    Point base;
    std::vector<double> angles;
};

struct SamplerParams {
    int n_samples = 1000;
    int k_neighbors = 10;     // ignored when use_star_k
    bool use_star_k = false;  // k = ceil(e * (1 + 1/dim) * ln n)
    double rrt_step = 0.5;    // step in the weighted C-space metric
    double goal_bias = 0.05;
    std::uint64_t seed = 0;
    int edge_check_resolution = 32;
};

RobotState forward_kinematics(const ArmConfiguration& config, const RobotModel& model);

// Weighted C-space metric: base in meters, angle differences (wrapped)
// scaled by the total arm reach.
double configuration_distance(const ArmConfiguration& a, const ArmConfiguration& b,
                              const RobotModel& model);

ArmConfiguration interpolate_configuration(const ArmConfiguration& a, const ArmConfiguration& b,
                                           double t);

bool configuration_valid(const ArmConfiguration& config, const RobotModel& model, const Scene& scene);

struct PlanStats {
    bool success = false;
    int samples_placed = 0;  // roadmap nodes or tree expansions
    int components = 0;      // roadmap connected components (PRM only)
    double path_length = 0.0; // weighted C-space arclength of the result
};

struct BaselineResult {
    std::vector<ArmConfiguration> path; // empty on failure
    PlanStats stats;
};

BaselineResult prm_plan(const ArmConfiguration& start, const ArmConfiguration& goal,
                        const RobotModel& model, const Scene& scene, const SamplerParams& params);

BaselineResult rrt_plan(const ArmConfiguration& start, const ArmConfiguration& goal,
                        const RobotModel& model, const Scene& scene, const SamplerParams& params);

// Sum over keypoints of workspace arclength along the densely interpolated
// configuration path; max_component reports the largest single keypoint
// arclength.
struct WorkspaceLengths {
    double sum = 0.0;
    double max_single = 0.0;
};
WorkspaceLengths workspace_path_lengths(const std::vector<ArmConfiguration>& path,
                                        const RobotModel& model, int samples_per_edge = 32);

} // namespace wsplan
