#pragma once

#include "coord.hpp"
#include "decomp.hpp"
#include "search.hpp"

#include <memory>
#include <string>

namespace wsplan {

struct PlanSummary {
    double time_ms = 0.0; // planning only, excludes file I/O and rendering
    int intermediate_states = 0;
    int outer_iterations = 0;
    double total_length = 0.0;
    double max_violation = 0.0;
    double min_clearance = 0.0;
};

struct PlanOutput {
    KeypointTrajectory trajectory;
    std::vector<RobotState> intermediate_states;
    PlanSummary summary;
    std::vector<IterationLogRow> log;
};

// Full pipeline: decompose -> route -> intermediate-state search ->
// constraint-Jacobian coordination -> validation.
PlanOutput plan_workspace(const Scene& scene, const RobotModel& model, const RobotState& start,
                          const RobotState& goal, const CoordinationConfig& config,
                          const SearchParams& search_params = {});

// Smallest clearance (distance minus keypoint radius / link half-width) over
// every state of the trajectory; negative means contact.
double trajectory_min_clearance(const KeypointTrajectory& traj, const RobotModel& model,
                                const Scene& scene);

} // namespace wsplan
