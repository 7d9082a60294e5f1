// wsplan command line: decompose, plan, optimize, bench, nonholo-demo,
// render. Uses the public C API only.

#include <wsplan/wsplan.h>

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

// Exit codes per failure class; 1 is reserved for usage errors from CLI11.
int exit_code_for(ws_status status) {
    switch (status) {
        case WS_OK: return 0;
        case WS_ERR_IO: return 2;
        case WS_ERR_PARSE: return 3;
        case WS_ERR_VALIDATION: return 4;
        case WS_ERR_INVALID_ENDPOINT: return 5;
        case WS_ERR_NO_ROUTE: return 6;
        case WS_ERR_NON_CONVERGENCE: return 7;
        case WS_ERR_PLANNING_FAILURE: return 8;
        default: return 9;
    }
}

[[noreturn]] void fail(ws_status status) {
    std::cerr << "error (" << ws_status_name(status) << "): " << ws_last_error() << "\n";
    std::exit(exit_code_for(status));
}

void check(ws_status status) {
    if (status != WS_OK) fail(status);
}

struct StringOut {
    char* text = nullptr;
    ~StringOut() { ws_string_free(text); }
};

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) return false;
    out << text;
    return true;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error (io): cannot open " << path << "\n";
        std::exit(2);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct ConfigFlags {
    double alpha = -1, eps_constraint = -1, eps_length = -1;
    int max_outer_iters = -1, waypoints = -1, max_subdivisions = -1;
    double step_limit = -1;
    int n_samples = -1, edge_check_resolution = -1;
    std::string k_neighbors;
    double rrt_step = -1, goal_bias = -1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string config_file;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--config", config_file, "JSON config file (same format as --dump-config)");
        cmd->add_option("--alpha", alpha, "length-descent step size");
        cmd->add_option("--eps-constraint", eps_constraint, "distance tolerance (m)");
        cmd->add_option("--eps-length", eps_length, "length progress threshold (m)");
        cmd->add_option("--max-outer-iters", max_outer_iters, "outer iteration cap");
        cmd->add_option("--waypoints", waypoints, "waypoints per segment");
        cmd->add_option("--max-subdivisions", max_subdivisions, "validation subdivision cap");
        cmd->add_option("--step-limit", step_limit, "per-step velocity limit for all keypoints (m)");
        cmd->add_option("--samples", n_samples, "sample/expansion budget");
        cmd->add_option("--k-neighbors", k_neighbors, "PRM neighbor count or 'star'");
        cmd->add_option("--rrt-step", rrt_step, "RRT extension step");
        cmd->add_option("--goal-bias", goal_bias, "RRT goal bias");
        cmd->add_option("--edge-check-resolution", edge_check_resolution,
                        "edge collision-check samples");
        cmd->add_option("--seed", seed, "seed for stochastic planners")->each([this](std::string) {
            seed_set = true;
        });
    }

    ws_config* build() const {
        ws_config* config = nullptr;
        check(ws_config_create(&config));
        if (!config_file.empty()) check(ws_config_update(config, read_file(config_file).c_str()));
        std::ostringstream patch;
        patch << "{";
        bool first = true;
        auto add = [&](const std::string& key, const std::string& value) {
            if (!first) patch << ",";
            first = false;
            patch << "\"" << key << "\":" << value;
        };
        auto num = [](double v) {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            return std::string(buf);
        };
        if (alpha >= 0) add("alpha", num(alpha));
        if (eps_constraint >= 0) add("eps_constraint", num(eps_constraint));
        if (eps_length >= 0) add("eps_length", num(eps_length));
        if (max_outer_iters >= 0) add("max_outer_iters", std::to_string(max_outer_iters));
        if (waypoints >= 0) add("waypoints_per_segment", std::to_string(waypoints));
        if (max_subdivisions >= 0) add("max_subdivisions", std::to_string(max_subdivisions));
        if (step_limit >= 0) add("step_limit", num(step_limit));
        if (n_samples >= 0) add("n_samples", std::to_string(n_samples));
        if (!k_neighbors.empty()) {
            if (k_neighbors == "star")
                add("k_neighbors", "\"star\"");
            else
                add("k_neighbors", k_neighbors);
        }
        if (rrt_step >= 0) add("rrt_step", num(rrt_step));
        if (goal_bias >= 0) add("goal_bias", num(goal_bias));
        if (edge_check_resolution >= 0)
            add("edge_check_resolution", std::to_string(edge_check_resolution));
        if (seed_set) add("seed", std::to_string(seed));
        patch << "}";
        check(ws_config_update(config, patch.str().c_str()));
        return config;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"wsplan: workspace planner for planar link robots"};
    app.require_subcommand(1);

    // decompose
    auto* decompose = app.add_subcommand("decompose", "triangulate and label the free space");
    std::string dec_scene, dec_out, dec_svg;
    decompose->add_option("scene", dec_scene, "scene file")->required();
    decompose->add_option("-o,--out", dec_out, "write the decomposition JSON here (default stdout)");
    decompose->add_option("--svg", dec_svg, "also write a region rendering");

    // plan
    auto* plan = app.add_subcommand("plan", "plan a trajectory between two states");
    std::string plan_scene, plan_robot, plan_start, plan_goal, plan_out, plan_states_out;
    ConfigFlags plan_flags;
    plan->add_option("scene", plan_scene, "scene file")->required();
    plan->add_option("robot", plan_robot, "robot file")->required();
    plan->add_option("start", plan_start, "start state file")->required();
    plan->add_option("goal", plan_goal, "goal state file")->required();
    plan->add_option("-o,--out", plan_out, "trajectory output file")->required();
    plan_flags.add_to(plan);

    // optimize
    auto* optimize = app.add_subcommand("optimize", "coordinate an existing waypoint trajectory");
    std::string opt_scene, opt_robot, opt_traj, opt_out, opt_log;
    ConfigFlags opt_flags;
    optimize->add_option("scene", opt_scene, "scene file")->required();
    optimize->add_option("robot", opt_robot, "robot file")->required();
    optimize->add_option("trajectory", opt_traj, "input trajectory (intermediate states)")->required();
    optimize->add_option("-o,--out", opt_out, "optimized trajectory output")->required();
    optimize->add_option("--log", opt_log, "iteration log CSV output");
    opt_flags.add_to(optimize);

    // bench
    auto* bench = app.add_subcommand("bench", "benchmark planners over seeds");
    std::string bench_scene, bench_robot, bench_start, bench_goal, bench_out;
    std::vector<std::string> bench_planners{"workspace"};
    std::vector<std::uint64_t> bench_seeds{0};
    ConfigFlags bench_flags;
    bench->add_option("scene", bench_scene, "scene file")->required();
    bench->add_option("robot", bench_robot, "robot file")->required();
    bench->add_option("start", bench_start, "start state file")->required();
    bench->add_option("goal", bench_goal, "goal state file")->required();
    bench->add_option("--planner", bench_planners,
                      "planners to run: workspace, prm, prmstar, rrt");
    bench->add_option("--seeds", bench_seeds, "seeds (one run per planner x seed)");
    bench->add_option("-o,--out", bench_out, "metrics CSV output (default stdout)");
    bench_flags.add_to(bench);

    // nonholo-demo
    auto* demo = app.add_subcommand("nonholo-demo", "nonholonomic gradient-flow analysis");
    std::vector<double> demo_p1{0, 0}, demo_p2{1, 0}, demo_v1{1, 0}, demo_v2{1, 0};
    double demo_dt = 0.1, demo_step = 0.5;
    int demo_iters = 200;
    std::string demo_out;
    demo->add_option("--p1", demo_p1, "reference point x y")->expected(2);
    demo->add_option("--p2", demo_p2, "heading point x y (unit distance from p1)")->expected(2);
    demo->add_option("--v1", demo_v1, "initial reference velocity x y (unit)")->expected(2);
    demo->add_option("--v2", demo_v2, "initial heading-point velocity x y")->expected(2);
    demo->add_option("--dt", demo_dt, "prediction horizon");
    demo->add_option("--step", demo_step, "descent step size");
    demo->add_option("--iters", demo_iters, "iterations");
    demo->add_option("-o,--out", demo_out, "CSV output (default stdout)");

    // render
    auto* render = app.add_subcommand("render", "render a scene (optionally with a trajectory)");
    std::string ren_scene, ren_robot, ren_traj, ren_out;
    bool ren_regions = false;
    render->add_option("scene", ren_scene, "scene file")->required();
    render->add_option("-o,--out", ren_out, "SVG output file")->required();
    render->add_option("--trajectory", ren_traj, "trajectory overlay");
    render->add_option("--robot", ren_robot, "robot file (for ghosted link chains)");
    render->add_flag("--regions", ren_regions, "fill free regions by label");

    CLI11_PARSE(app, argc, argv);

    if (decompose->parsed()) {
        ws_scene* scene = nullptr;
        check(ws_scene_load(dec_scene.c_str(), &scene));
        StringOut json;
        check(ws_decompose_json(scene, &json.text));
        if (dec_out.empty()) {
            std::cout << json.text;
        } else if (!write_file(dec_out, json.text)) {
            std::cerr << "error (io): cannot write " << dec_out << "\n";
            return 2;
        }
        if (!dec_svg.empty()) {
            StringOut svg;
            check(ws_render_svg(scene, nullptr, nullptr, 1, &svg.text));
            if (!write_file(dec_svg, svg.text)) {
                std::cerr << "error (io): cannot write " << dec_svg << "\n";
                return 2;
            }
        }
        ws_scene_free(scene);
        return 0;
    }

    if (plan->parsed()) {
        ws_scene* scene = nullptr;
        ws_robot* robot = nullptr;
        ws_state* start = nullptr;
        ws_state* goal = nullptr;
        check(ws_scene_load(plan_scene.c_str(), &scene));
        check(ws_robot_load(plan_robot.c_str(), &robot));
        check(ws_state_load(plan_start.c_str(), &start));
        check(ws_state_load(plan_goal.c_str(), &goal));
        ws_config* config = plan_flags.build();

        ws_trajectory* traj = nullptr;
        StringOut summary;
        check(ws_plan(scene, robot, start, goal, config, &traj, &summary.text));
        check(ws_trajectory_save(traj, plan_out.c_str()));
        std::cout << summary.text;

        ws_trajectory_free(traj);
        ws_config_free(config);
        ws_state_free(goal);
        ws_state_free(start);
        ws_robot_free(robot);
        ws_scene_free(scene);
        return 0;
    }

    if (optimize->parsed()) {
        ws_scene* scene = nullptr;
        ws_robot* robot = nullptr;
        ws_trajectory* initial = nullptr;
        check(ws_scene_load(opt_scene.c_str(), &scene));
        check(ws_robot_load(opt_robot.c_str(), &robot));
        check(ws_trajectory_load(opt_traj.c_str(), &initial));
        ws_config* config = opt_flags.build();

        ws_trajectory* out = nullptr;
        StringOut log, summary;
        check(ws_optimize(scene, robot, initial, config, &out, &log.text, &summary.text));
        check(ws_trajectory_save(out, opt_out.c_str()));
        if (!opt_log.empty() && !write_file(opt_log, log.text)) {
            std::cerr << "error (io): cannot write " << opt_log << "\n";
            return 2;
        }
        std::cout << summary.text;

        ws_trajectory_free(out);
        ws_trajectory_free(initial);
        ws_config_free(config);
        ws_robot_free(robot);
        ws_scene_free(scene);
        return 0;
    }

    if (bench->parsed()) {
        ws_scene* scene = nullptr;
        ws_robot* robot = nullptr;
        ws_state* start = nullptr;
        ws_state* goal = nullptr;
        check(ws_scene_load(bench_scene.c_str(), &scene));
        check(ws_robot_load(bench_robot.c_str(), &robot));
        check(ws_state_load(bench_start.c_str(), &start));
        check(ws_state_load(bench_goal.c_str(), &goal));
        ws_config* config = bench_flags.build();

        std::ostringstream csv;
        StringOut header;
        check(ws_bench_csv_header(&header.text));
        csv << header.text << "\n";
        for (const std::string& planner : bench_planners) {
            for (std::uint64_t seed : bench_seeds) {
                StringOut row;
                check(ws_bench_run(scene, robot, start, goal, planner.c_str(), seed, config,
                                   &row.text));
                csv << row.text << "\n";
                // The workspace planner is deterministic; one row suffices.
                if (planner == "workspace") break;
            }
        }
        if (bench_out.empty()) {
            std::cout << csv.str();
        } else if (!write_file(bench_out, csv.str())) {
            std::cerr << "error (io): cannot write " << bench_out << "\n";
            return 2;
        }

        ws_config_free(config);
        ws_state_free(goal);
        ws_state_free(start);
        ws_robot_free(robot);
        ws_scene_free(scene);
        return 0;
    }

    if (demo->parsed()) {
        StringOut csv;
        check(ws_nonholo_demo(demo_p1[0], demo_p1[1], demo_p2[0], demo_p2[1], demo_v1[0], demo_v1[1],
                              demo_v2[0], demo_v2[1], demo_dt, demo_step, demo_iters, &csv.text));
        if (demo_out.empty()) {
            std::cout << csv.text;
        } else if (!write_file(demo_out, csv.text)) {
            std::cerr << "error (io): cannot write " << demo_out << "\n";
            return 2;
        }
        return 0;
    }

    if (render->parsed()) {
        ws_scene* scene = nullptr;
        ws_robot* robot = nullptr;
        ws_trajectory* traj = nullptr;
        check(ws_scene_load(ren_scene.c_str(), &scene));
        if (!ren_robot.empty()) check(ws_robot_load(ren_robot.c_str(), &robot));
        if (!ren_traj.empty()) check(ws_trajectory_load(ren_traj.c_str(), &traj));

        StringOut svg;
        check(ws_render_svg(scene, traj, robot, ren_regions ? 1 : 0, &svg.text));
        if (!write_file(ren_out, svg.text)) {
            std::cerr << "error (io): cannot write " << ren_out << "\n";
            return 2;
        }

        ws_trajectory_free(traj);
        ws_robot_free(robot);
        ws_scene_free(scene);
        return 0;
    }
    return 1;
}
