#pragma once

#include "robot_check.hpp"
#include "scene.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wsplan {

struct CoordinationConfig {
    double alpha = 0.02;           // length-descent step size
    double eps_constraint = 1e-6;  // distance-constraint tolerance (meters)
    double eps_length = 1e-5;      // per-iteration progress threshold (meters)
    int max_outer_iters = 200;
    int waypoints_per_segment = 100;           // N
    std::map<int, double> step_limit;          // per-keypoint velocity limit (m / index step)
    int max_subdivisions = 8;
    int inner_projection_sweeps = 50;
    int validation_sweep_steps = 32;
    int validation_self_cross_samples = 64;

    void validate() const;
};

// One full distance-constraint projection: per interior time step, links are
// swept in BFS order with the symmetric split update until the state's
// violation is within eps_constraint (or the inner sweep cap). Boundary
// states stay untouched.
KeypointTrajectory distance_project(const KeypointTrajectory& traj, const RobotModel& model,
                                    const CoordinationConfig& config);

// One Jacobi-style descent step on the total path length. Updates that
// introduce a new collision at their time step are skipped per point. Pass
// scene = nullptr to skip collision screening.
KeypointTrajectory length_descent_step(const KeypointTrajectory& traj, const RobotModel& model,
                                       const Scene* scene, const CoordinationConfig& config);

// One pass of the per-step velocity-limit projection (symmetric split along
// the time axis).
KeypointTrajectory velocity_project(const KeypointTrajectory& traj, const CoordinationConfig& config);

double total_path_length(const KeypointTrajectory& traj);
double max_violation(const KeypointTrajectory& traj, const RobotModel& model);
double max_step_length(const KeypointTrajectory& traj, int keypoint);

// Per-keypoint polylines between two consecutive intermediate states.
struct PathBundle {
    RobotState from;
    RobotState to;
    std::vector<std::vector<Point>> polylines; // indexed by keypoint id; may be empty => straight
};

struct IterationLogRow {
    int iter = 0;
    double max_violation = 0.0;
    double total_length = 0.0;
};

struct CoordinationResult {
    KeypointTrajectory trajectory;
    int outer_iterations = 0; // iterations that changed the trajectory, max over segments
    int segments = 0;
    std::vector<IterationLogRow> log;
};

// Coordinates every bundle (resample -> descent/velocity/distance loop ->
// validation with unfolding/visibility insertion) and concatenates the
// results, deduplicating shared boundary states.
CoordinationResult coordinate(const std::vector<PathBundle>& segments, const RobotModel& model,
                              const Scene& scene, const CoordinationConfig& config);

struct HessianDiagnostic {
    double min_eigenvalue = 0.0;
    int coordinate_count = 0;
    int constraint_count = 0;
    double stationarity_residual = 0.0; // |grad f + J^T lambda| after the LS fit
    // Block structure summary per the two-point pattern: diagonal (A/C)
    // blocks and off-diagonal coupling (B) blocks.
    int diagonal_blocks_positive = 0;
    int diagonal_blocks_total = 0;
    int coupling_blocks_negative = 0;
    int coupling_blocks_total = 0;
};

// Assembles the Lagrangian Hessian (length objective + distance constraints)
// at a converged trajectory with least-squares multipliers and reports the
// minimum eigenvalue. Multipliers may be supplied explicitly.
HessianDiagnostic hessian_diagnostic(const KeypointTrajectory& traj, const RobotModel& model,
                                     const std::vector<double>* multipliers = nullptr);

std::vector<double> estimate_multipliers(const KeypointTrajectory& traj, const RobotModel& model);

// Gradient of the total length objective with respect to all interior
// waypoints, flattened ((t-1)*K + k)*2 + {x,y}; exposed for the diagnostic
// and for gradient tests.
std::vector<double> length_gradient(const KeypointTrajectory& traj);

} // namespace wsplan
