#include "planner.hpp"

#include "error.hpp"

#include <chrono>

namespace wsplan {

PlanOutput plan_workspace(const Scene& scene, const RobotModel& model, const RobotState& start,
                          const RobotState& goal, const CoordinationConfig& config,
                          const SearchParams& search_params) {
    config.validate();
    auto t0 = std::chrono::steady_clock::now();

    Decomposition decomposition(scene);
    std::vector<RobotState> states =
        plan_intermediate_states(start, goal, model, scene, decomposition, search_params);

    PlanOutput out;
    out.intermediate_states = states;
    if (states.size() < 2) {
        out.trajectory.states = {start, start};
        out.summary.intermediate_states = 1;
    } else {
        std::vector<PathBundle> bundles;
        bundles.reserve(states.size() - 1);
        for (std::size_t i = 0; i + 1 < states.size(); ++i)
            bundles.push_back({states[i], states[i + 1], {}});
        CoordinationResult coord = coordinate(bundles, model, scene, config);
        out.trajectory = std::move(coord.trajectory);
        out.summary.intermediate_states = static_cast<int>(states.size());
        out.summary.outer_iterations = coord.outer_iterations;
        out.log = std::move(coord.log);
    }

    auto t1 = std::chrono::steady_clock::now();
    out.summary.time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    out.summary.total_length = total_path_length(out.trajectory);
    out.summary.max_violation = max_violation(out.trajectory, model);
    out.summary.min_clearance = trajectory_min_clearance(out.trajectory, model, scene);
    return out;
}

double trajectory_min_clearance(const KeypointTrajectory& traj, const RobotModel& model,
                                const Scene& scene) {
    double worst = std::numeric_limits<double>::infinity();
    for (const RobotState& st : traj.states) {
        for (const Link& l : model.links()) {
            const Point& a = st.positions[static_cast<std::size_t>(l.a)];
            const Point& b = st.positions[static_cast<std::size_t>(l.b)];
            for (const Polygon& obs : scene.obstacles()) {
                double body = std::numeric_limits<double>::infinity();
                for (std::size_t e = 0; e < obs.size(); ++e)
                    body = std::min(body, segment_segment_distance({a, b}, obs.edge(e)));
                if (point_in_polygon((a + b) * 0.5, obs) == Containment::inside) body = -body;
                worst = std::min(worst, body - l.width / 2);
                worst = std::min(worst,
                                 point_polygon_signed_distance(a, obs) - model.radius(l.a));
                worst = std::min(worst,
                                 point_polygon_signed_distance(b, obs) - model.radius(l.b));
            }
        }
    }
    return worst;
}

} // namespace wsplan
