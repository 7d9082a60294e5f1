#include "bench.hpp"

#include "error.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace wsplan {

std::string bench_csv_header() {
    return "planner,seed,success,time_ms,samples_or_iters,path_length_sum,path_length_max,min_clearance";
}

namespace {

std::string csv_num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

} // namespace

std::string bench_csv_row(const BenchRow& row) {
    std::ostringstream out;
    out << row.planner << "," << row.seed << "," << (row.success ? "true" : "false") << ","
        << csv_num(row.time_ms) << "," << row.samples_or_iters << "," << csv_num(row.path_length_sum)
        << "," << csv_num(row.path_length_max) << "," << csv_num(row.min_clearance);
    return out.str();
}

ArmConfiguration configuration_from_state(const RobotState& state, const RobotModel& model) {
    ArmConfiguration config;
    config.base = state.positions[static_cast<std::size_t>(model.root())];
    std::vector<double> heading(model.keypoint_count(), 0.0);
    for (std::size_t li = 0; li < model.bfs_links().size(); ++li) {
        const Link& l = model.bfs_links()[li];
        Vec2 d = state.positions[static_cast<std::size_t>(l.b)] -
                 state.positions[static_cast<std::size_t>(l.a)];
        double ang = std::atan2(d.y, d.x);
        heading[static_cast<std::size_t>(l.b)] = ang;
        if (li == 0)
            config.angles.push_back(ang);
        else
            config.angles.push_back(
                std::remainder(ang - heading[static_cast<std::size_t>(l.a)], 2 * M_PI));
    }
    // Non-root parents inherit their heading; the root's other children use
    // absolute angles via heading 0 handled in forward_kinematics.
    return config;
}

namespace {

double trajectory_length_max(const KeypointTrajectory& traj) {
    if (traj.states.empty()) return 0.0;
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.states.front().positions.size(); ++k) {
        double len = 0.0;
        for (std::size_t t = 0; t + 1 < traj.states.size(); ++t)
            len += distance(traj.states[t].positions[k], traj.states[t + 1].positions[k]);
        worst = std::max(worst, len);
    }
    return worst;
}

double baseline_min_clearance(const std::vector<ArmConfiguration>& path, const RobotModel& model,
                              const Scene& scene, int samples_per_edge) {
    double worst = std::numeric_limits<double>::infinity();
    auto measure = [&](const ArmConfiguration& c) {
        RobotState st = forward_kinematics(c, model);
        KeypointTrajectory one;
        one.states = {st};
        worst = std::min(worst, trajectory_min_clearance(one, model, scene));
    };
    for (std::size_t i = 0; i < path.size(); ++i) {
        measure(path[i]);
        if (i + 1 < path.size())
            for (int s = 1; s < samples_per_edge; ++s)
                measure(interpolate_configuration(path[i], path[i + 1],
                                                  static_cast<double>(s) / samples_per_edge));
    }
    return worst;
}

} // namespace

BenchRow bench_run(const std::string& planner, const Scene& scene, const RobotModel& model,
                   const RobotState& start, const RobotState& goal, std::uint64_t seed,
                   const CoordinationConfig& coord_config, const SamplerParams& sampler_params) {
    BenchRow row;
    row.planner = planner;
    row.seed = seed;

    if (planner == "workspace") {
        auto t0 = std::chrono::steady_clock::now();
        try {
            PlanOutput out = plan_workspace(scene, model, start, goal, coord_config);
            row.success = true;
            row.samples_or_iters = out.summary.outer_iterations;
            row.path_length_sum = out.summary.total_length;
            row.path_length_max = trajectory_length_max(out.trajectory);
            row.min_clearance = out.summary.min_clearance;
        } catch (const Error&) {
            row.success = false;
        }
        auto t1 = std::chrono::steady_clock::now();
        row.time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        return row;
    }

    ArmConfiguration cs = configuration_from_state(start, model);
    ArmConfiguration cg = configuration_from_state(goal, model);
    SamplerParams params = sampler_params;
    params.seed = seed;
    if (planner == "prmstar") params.use_star_k = true;

    auto t0 = std::chrono::steady_clock::now();
    BaselineResult result;
    try {
        if (planner == "prm" || planner == "prmstar")
            result = prm_plan(cs, cg, model, scene, params);
        else if (planner == "rrt")
            result = rrt_plan(cs, cg, model, scene, params);
        else
            throw Error(Errc::bad_argument, "unknown planner: " + planner);
    } catch (const Error& e) {
        if (e.code() == Errc::bad_argument || e.code() == Errc::invalid_endpoint) throw;
        result = {};
    }
    auto t1 = std::chrono::steady_clock::now();
    row.time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    row.success = result.stats.success;
    row.samples_or_iters = result.stats.samples_placed;
    if (result.stats.success) {
        WorkspaceLengths lens =
            workspace_path_lengths(result.path, model, params.edge_check_resolution);
        row.path_length_sum = lens.sum;
        row.path_length_max = lens.max_single;
        row.min_clearance =
            baseline_min_clearance(result.path, model, scene, params.edge_check_resolution);
    }
    return row;
}

} // namespace wsplan
