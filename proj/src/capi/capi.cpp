#include "wsplan/wsplan.h"

#include "bench.hpp"
#include "coord.hpp"
#include "decomp.hpp"
#include "error.hpp"
#include "nonholo.hpp"
#include "planner.hpp"
#include "scene_io.hpp"
#include "svg_render.hpp"

#include <json.hpp>

#include <cstring>
#include <sstream>

using nlohmann::json;

namespace {

thread_local std::string g_last_error;

ws_status status_from(wsplan::Errc code) {
    using wsplan::Errc;
    switch (code) {
        case Errc::io: return WS_ERR_IO;
        case Errc::parse: return WS_ERR_PARSE;
        case Errc::validation: return WS_ERR_VALIDATION;
        case Errc::degenerate_input: return WS_ERR_DEGENERATE_INPUT;
        case Errc::invalid_endpoint: return WS_ERR_INVALID_ENDPOINT;
        case Errc::no_route: return WS_ERR_NO_ROUTE;
        case Errc::non_convergence: return WS_ERR_NON_CONVERGENCE;
        case Errc::planning_failure: return WS_ERR_PLANNING_FAILURE;
        case Errc::singular_configuration: return WS_ERR_SINGULAR;
        case Errc::bad_argument: return WS_ERR_BAD_ARGUMENT;
    }
    return WS_ERR_INTERNAL;
}

template <typename Fn>
ws_status guarded(Fn&& fn) {
    try {
        fn();
        return WS_OK;
    } catch (const wsplan::Error& e) {
        g_last_error = e.what();
        return status_from(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return WS_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return WS_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

ws_status require(bool cond, const char* message) {
    if (cond) return WS_OK;
    g_last_error = message;
    return WS_ERR_BAD_ARGUMENT;
}

} // namespace

struct ws_scene {
    wsplan::Scene scene;
};
struct ws_robot {
    wsplan::RobotModel model;
};
struct ws_state {
    wsplan::RobotState state;
};
struct ws_trajectory {
    wsplan::KeypointTrajectory traj;
};
struct ws_config {
    wsplan::CoordinationConfig coord;
    wsplan::SamplerParams sampler;
};

extern "C" {

const char* ws_status_name(ws_status status) {
    switch (status) {
        case WS_OK: return "ok";
        case WS_ERR_IO: return "io";
        case WS_ERR_PARSE: return "parse";
        case WS_ERR_VALIDATION: return "validation";
        case WS_ERR_DEGENERATE_INPUT: return "degenerate-input";
        case WS_ERR_INVALID_ENDPOINT: return "invalid-endpoint";
        case WS_ERR_NO_ROUTE: return "no-route";
        case WS_ERR_NON_CONVERGENCE: return "non-convergence";
        case WS_ERR_PLANNING_FAILURE: return "planning-failure";
        case WS_ERR_SINGULAR: return "singular-configuration";
        case WS_ERR_BAD_ARGUMENT: return "bad-argument";
        case WS_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* ws_last_error(void) { return g_last_error.c_str(); }

void ws_string_free(char* text) { std::free(text); }

ws_status ws_scene_load(const char* path, ws_scene** out) {
    if (auto s = require(path && out, "null argument")) return s;
    return guarded([&] { *out = new ws_scene{wsplan::load_scene(path)}; });
}

ws_status ws_scene_from_json(const char* text, ws_scene** out) {
    if (auto s = require(text && out, "null argument")) return s;
    return guarded([&] { *out = new ws_scene{wsplan::scene_from_json(text)}; });
}

ws_status ws_scene_to_json(const ws_scene* scene, char** out) {
    if (auto s = require(scene && out, "null argument")) return s;
    return guarded([&] { *out = dup_string(wsplan::scene_to_json(scene->scene)); });
}

ws_status ws_scene_save(const ws_scene* scene, const char* path) {
    if (auto s = require(scene && path, "null argument")) return s;
    return guarded([&] { wsplan::save_scene(scene->scene, path); });
}

void ws_scene_free(ws_scene* scene) { delete scene; }

ws_status ws_robot_load(const char* path, ws_robot** out) {
    if (auto s = require(path && out, "null argument")) return s;
    return guarded([&] { *out = new ws_robot{wsplan::load_robot(path)}; });
}

ws_status ws_robot_from_json(const char* text, ws_robot** out) {
    if (auto s = require(text && out, "null argument")) return s;
    return guarded([&] { *out = new ws_robot{wsplan::robot_from_json(text)}; });
}

void ws_robot_free(ws_robot* robot) { delete robot; }

ws_status ws_state_load(const char* path, ws_state** out) {
    if (auto s = require(path && out, "null argument")) return s;
    return guarded([&] { *out = new ws_state{wsplan::load_state(path)}; });
}

ws_status ws_state_from_json(const char* text, ws_state** out) {
    if (auto s = require(text && out, "null argument")) return s;
    return guarded([&] { *out = new ws_state{wsplan::state_from_json(text)}; });
}

void ws_state_free(ws_state* state) { delete state; }

ws_status ws_trajectory_load(const char* path, ws_trajectory** out) {
    if (auto s = require(path && out, "null argument")) return s;
    return guarded([&] { *out = new ws_trajectory{wsplan::load_trajectory(path)}; });
}

ws_status ws_trajectory_save(const ws_trajectory* traj, const char* path) {
    if (auto s = require(traj && path, "null argument")) return s;
    return guarded([&] { wsplan::save_trajectory(traj->traj, path); });
}

ws_status ws_trajectory_to_json(const ws_trajectory* traj, char** out) {
    if (auto s = require(traj && out, "null argument")) return s;
    return guarded([&] { *out = dup_string(wsplan::trajectory_to_json(traj->traj)); });
}

size_t ws_trajectory_state_count(const ws_trajectory* traj) {
    return traj ? traj->traj.states.size() : 0;
}

size_t ws_trajectory_keypoint_count(const ws_trajectory* traj) {
    if (!traj || traj->traj.states.empty()) return 0;
    return traj->traj.states.front().positions.size();
}

ws_status ws_trajectory_position(const ws_trajectory* traj, size_t state, size_t keypoint, double* x,
                                 double* y) {
    if (auto s = require(traj && x && y, "null argument")) return s;
    if (auto s = require(state < traj->traj.states.size() &&
                             keypoint < traj->traj.states[state].positions.size(),
                         "index out of range"))
        return s;
    const wsplan::Point& p = traj->traj.states[state].positions[keypoint];
    *x = p.x;
    *y = p.y;
    return WS_OK;
}

void ws_trajectory_free(ws_trajectory* traj) { delete traj; }

ws_status ws_config_create(ws_config** out) {
    if (auto s = require(out != nullptr, "null argument")) return s;
    return guarded([&] { *out = new ws_config{}; });
}

ws_status ws_config_update(ws_config* config, const char* json_text) {
    if (auto s = require(config && json_text, "null argument")) return s;
    return guarded([&] {
        json j;
        try {
            j = json::parse(json_text);
        } catch (const json::parse_error& e) {
            throw wsplan::Error(wsplan::Errc::parse, std::string("config: ") + e.what());
        }
        auto& c = config->coord;
        auto& s = config->sampler;
        if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
        if (j.contains("eps_constraint")) c.eps_constraint = j.at("eps_constraint").get<double>();
        if (j.contains("eps_length")) c.eps_length = j.at("eps_length").get<double>();
        if (j.contains("max_outer_iters")) c.max_outer_iters = j.at("max_outer_iters").get<int>();
        if (j.contains("waypoints_per_segment"))
            c.waypoints_per_segment = j.at("waypoints_per_segment").get<int>();
        if (j.contains("max_subdivisions")) c.max_subdivisions = j.at("max_subdivisions").get<int>();
        if (j.contains("step_limit")) {
            c.step_limit.clear();
            const json& sl = j.at("step_limit");
            if (sl.is_number()) {
                // One limit for every keypoint id mentioned at plan time is
                // not knowable here; store under the wildcard id -1.
                c.step_limit[-1] = sl.get<double>();
            } else if (sl.is_object()) {
                for (auto it = sl.begin(); it != sl.end(); ++it)
                    c.step_limit[std::stoi(it.key())] = it.value().get<double>();
            } else if (!sl.is_null()) {
                throw wsplan::Error(wsplan::Errc::parse, "config.step_limit: number or object");
            }
        }
        if (j.contains("n_samples")) s.n_samples = j.at("n_samples").get<int>();
        if (j.contains("k_neighbors")) {
            const json& k = j.at("k_neighbors");
            if (k.is_string() && k.get<std::string>() == "star") {
                s.use_star_k = true;
            } else {
                s.use_star_k = false;
                s.k_neighbors = k.get<int>();
            }
        }
        if (j.contains("rrt_step")) s.rrt_step = j.at("rrt_step").get<double>();
        if (j.contains("goal_bias")) s.goal_bias = j.at("goal_bias").get<double>();
        if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("edge_check_resolution"))
            s.edge_check_resolution = j.at("edge_check_resolution").get<int>();
        c.validate();
    });
}

ws_status ws_config_to_json(const ws_config* config, char** out) {
    if (auto s = require(config && out, "null argument")) return s;
    return guarded([&] {
        const auto& c = config->coord;
        const auto& s = config->sampler;
        json j{{"alpha", c.alpha},
               {"eps_constraint", c.eps_constraint},
               {"eps_length", c.eps_length},
               {"max_outer_iters", c.max_outer_iters},
               {"waypoints_per_segment", c.waypoints_per_segment},
               {"max_subdivisions", c.max_subdivisions},
               {"n_samples", s.n_samples},
               {"rrt_step", s.rrt_step},
               {"goal_bias", s.goal_bias},
               {"seed", s.seed},
               {"edge_check_resolution", s.edge_check_resolution}};
        if (s.use_star_k)
            j["k_neighbors"] = "star";
        else
            j["k_neighbors"] = s.k_neighbors;
        json sl = json::object();
        for (auto [k, v] : c.step_limit) sl[std::to_string(k)] = v;
        j["step_limit"] = sl;
        *out = dup_string(j.dump(2) + "\n");
    });
}

void ws_config_free(ws_config* config) { delete config; }

ws_status ws_decompose_json(const ws_scene* scene, char** out) {
    if (auto s = require(scene && out, "null argument")) return s;
    return guarded([&] {
        wsplan::Decomposition dec(scene->scene);
        json j;
        j["vertices"] = json::array();
        for (const auto& v : dec.triangulation.vertices()) {
            json tags = json::array();
            for (int t : v.tags) tags.push_back(t);
            j["vertices"].push_back({{"p", {v.p.x, v.p.y}}, {"tags", tags}});
        }
        j["triangles"] = json::array();
        for (const auto& t : dec.triangulation.triangles())
            j["triangles"].push_back({{"v", {t.v[0], t.v[1], t.v[2]}}, {"free", t.free}});
        j["regions"] = json::array();
        for (std::size_t r = 0; r < dec.regions.size(); ++r) {
            const auto& region = dec.regions[r];
            json label = json::array();
            for (int l : region.label) label.push_back(l);
            j["regions"].push_back({{"id", static_cast<int>(r)},
                                    {"label", label},
                                    {"code", region.code},
                                    {"triangles", region.triangles},
                                    {"centroid", {region.centroid.x, region.centroid.y}},
                                    {"area", region.area}});
        }
        j["graph"] = json::array();
        for (const auto& e : dec.graph.edges) j["graph"].push_back({e.a, e.b, e.weight});
        *out = dup_string(j.dump(2) + "\n");
    });
}

namespace {

wsplan::CoordinationConfig coordination_for(const ws_config* config, const ws_robot* robot) {
    wsplan::CoordinationConfig c = config ? config->coord : wsplan::CoordinationConfig{};
    // Expand the wildcard step limit onto every keypoint.
    auto it = c.step_limit.find(-1);
    if (it != c.step_limit.end()) {
        double v = it->second;
        c.step_limit.erase(it);
        for (const wsplan::Keypoint& kp : robot->model.keypoints()) c.step_limit[kp.id] = v;
    }
    return c;
}

json summary_json_of(const wsplan::PlanSummary& s) {
    return json{{"time_ms", s.time_ms},
                {"intermediate_states", s.intermediate_states},
                {"outer_iterations", s.outer_iterations},
                {"total_length", s.total_length},
                {"max_violation", s.max_violation},
                {"min_clearance", s.min_clearance}};
}

} // namespace

ws_status ws_plan(const ws_scene* scene, const ws_robot* robot, const ws_state* start,
                  const ws_state* goal, const ws_config* config, ws_trajectory** out,
                  char** summary_json) {
    if (auto s = require(scene && robot && start && goal && out, "null argument")) return s;
    return guarded([&] {
        wsplan::PlanOutput plan = wsplan::plan_workspace(scene->scene, robot->model, start->state,
                                                         goal->state, coordination_for(config, robot));
        *out = new ws_trajectory{std::move(plan.trajectory)};
        if (summary_json) *summary_json = dup_string(summary_json_of(plan.summary).dump(2) + "\n");
    });
}

ws_status ws_optimize(const ws_scene* scene, const ws_robot* robot, const ws_trajectory* initial,
                      const ws_config* config, ws_trajectory** out, char** log_csv,
                      char** summary_json) {
    if (auto s = require(scene && robot && initial && out, "null argument")) return s;
    return guarded([&] {
        wsplan::CoordinationConfig c = coordination_for(config, robot);
        const auto& states = initial->traj.states;
        if (states.size() < 2)
            throw wsplan::Error(wsplan::Errc::bad_argument, "trajectory needs at least 2 states");
        std::vector<wsplan::PathBundle> bundles;
        for (std::size_t i = 0; i + 1 < states.size(); ++i)
            bundles.push_back({states[i], states[i + 1], {}});

        auto t0 = std::chrono::steady_clock::now();
        wsplan::CoordinationResult result = wsplan::coordinate(bundles, robot->model, scene->scene, c);
        auto t1 = std::chrono::steady_clock::now();

        wsplan::PlanSummary summary;
        summary.time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        summary.intermediate_states = static_cast<int>(states.size());
        summary.outer_iterations = result.outer_iterations;
        summary.total_length = wsplan::total_path_length(result.trajectory);
        summary.max_violation = wsplan::max_violation(result.trajectory, robot->model);
        summary.min_clearance =
            wsplan::trajectory_min_clearance(result.trajectory, robot->model, scene->scene);

        if (log_csv) {
            std::ostringstream log;
            log << "iter,max_violation,total_length\n";
            for (const auto& row : result.log)
                log << row.iter << "," << row.max_violation << "," << row.total_length << "\n";
            *log_csv = dup_string(log.str());
        }
        if (summary_json) *summary_json = dup_string(summary_json_of(summary).dump(2) + "\n");
        *out = new ws_trajectory{std::move(result.trajectory)};
    });
}

ws_status ws_bench_csv_header(char** out) {
    if (auto s = require(out != nullptr, "null argument")) return s;
    *out = dup_string(wsplan::bench_csv_header());
    return WS_OK;
}

ws_status ws_bench_run(const ws_scene* scene, const ws_robot* robot, const ws_state* start,
                       const ws_state* goal, const char* planner, uint64_t seed,
                       const ws_config* config, char** csv_row) {
    if (auto s = require(scene && robot && start && goal && planner && csv_row, "null argument"))
        return s;
    return guarded([&] {
        wsplan::SamplerParams sampler = config ? config->sampler : wsplan::SamplerParams{};
        wsplan::BenchRow row = wsplan::bench_run(planner, scene->scene, robot->model, start->state,
                                                 goal->state, seed, coordination_for(config, robot),
                                                 sampler);
        *csv_row = dup_string(wsplan::bench_csv_row(row));
    });
}

ws_status ws_nonholo_demo(double p1x, double p1y, double p2x, double p2y, double v1x, double v1y,
                          double v2x, double v2y, double dt, double step, int iters, char** csv_out) {
    if (auto s = require(csv_out != nullptr, "null argument")) return s;
    return guarded([&] {
        wsplan::RigidBodyState state({p1x, p1y}, {p2x, p2y});
        wsplan::VelocityPair vel{{v1x, v1y}, {v2x, v2y}, dt};
        wsplan::FlowResult flow = wsplan::gradient_flow_demo(state, vel, step, iters);
        std::ostringstream out;
        out << "iter,v,omega,residual\n";
        char buf[160];
        for (const auto& s : flow.samples) {
            std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.12g\n", s.iter, s.v, s.omega, s.residual);
            out << buf;
        }
        if (flow.diverged) out << "# diverged\n";
        *csv_out = dup_string(out.str());
    });
}

ws_status ws_render_svg(const ws_scene* scene, const ws_trajectory* traj, const ws_robot* robot,
                        int draw_regions, char** svg_out) {
    if (auto s = require(scene && svg_out, "null argument")) return s;
    return guarded([&] {
        wsplan::RenderOptions options;
        options.draw_regions = draw_regions != 0;
        std::optional<wsplan::Decomposition> dec;
        if (options.draw_regions) dec.emplace(scene->scene);
        *svg_out = dup_string(wsplan::render_svg(scene->scene, traj ? &traj->traj : nullptr,
                                                 robot ? &robot->model : nullptr,
                                                 dec ? &*dec : nullptr, options));
    });
}

} // extern "C"
