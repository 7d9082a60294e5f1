#pragma once

#include "baselines.hpp"
#include "coord.hpp"
#include "planner.hpp"

#include <string>

namespace wsplan {

struct BenchRow {
    std::string planner;
    std::uint64_t seed = 0;
    bool success = false;
    double time_ms = 0.0;
    long samples_or_iters = 0;
    double path_length_sum = 0.0;
    double path_length_max = 0.0;
    double min_clearance = 0.0;
};

// Frozen RFC-4180 header; column order is part of the interface.
std::string bench_csv_header();
std::string bench_csv_row(const BenchRow& row);

// One (planner, seed) cell. planner is one of workspace/prm/prmstar/rrt.
// Start/goal are robot states; sampling planners fit configurations to them
// (exact for chain robots). Timing excludes file I/O and rendering.
BenchRow bench_run(const std::string& planner, const Scene& scene, const RobotModel& model,
                   const RobotState& start, const RobotState& goal, std::uint64_t seed,
                   const CoordinationConfig& coord_config, const SamplerParams& sampler_params);

// Recovers the C-space configuration of a chain state (exact when the state
// satisfies the distance constraints).
ArmConfiguration configuration_from_state(const RobotState& state, const RobotModel& model);

} // namespace wsplan
