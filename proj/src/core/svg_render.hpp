#pragma once

#include "decomp.hpp"
#include "scene.hpp"

#include <optional>
#include <string>

namespace wsplan {

struct RenderOptions {
    bool draw_regions = false;
    int ghost_states = 12; // max ghosted link chains drawn along a trajectory
    double pixels_per_meter = 60.0;
};

// Deterministic SVG 1.1 output: no timestamps, fixed color table, fixed
// number formatting. Obstacles filled, keypoint paths colored by id,
// intermediate states drawn as ghosted chains, region fills keyed by label
// code.
std::string render_svg(const Scene& scene, const KeypointTrajectory* trajectory,
                       const RobotModel* model, const Decomposition* decomposition,
                       const RenderOptions& options = {});

} // namespace wsplan
