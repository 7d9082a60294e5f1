/*
 * wsplan C API: workspace motion planning for planar link robots.
 *
 * All objects are opaque handles created and destroyed through this
 * interface. Functions return WS_OK on success; on failure they return an
 * error code and leave a human-readable message in ws_last_error() (thread
 * local). Strings returned through char** are heap-allocated and must be
 * released with ws_string_free().
 */

#ifndef WSPLAN_H
#define WSPLAN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __GNUC__
#define WSPLAN_API __attribute__((visibility("default")))
#else
#define WSPLAN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ws_status {
    WS_OK = 0,
    WS_ERR_IO = 1,
    WS_ERR_PARSE = 2,
    WS_ERR_VALIDATION = 3,
    WS_ERR_DEGENERATE_INPUT = 4,
    WS_ERR_INVALID_ENDPOINT = 5,
    WS_ERR_NO_ROUTE = 6,
    WS_ERR_NON_CONVERGENCE = 7,
    WS_ERR_PLANNING_FAILURE = 8,
    WS_ERR_SINGULAR = 9,
    WS_ERR_BAD_ARGUMENT = 10,
    WS_ERR_INTERNAL = 11
} ws_status;

typedef struct ws_scene ws_scene;
typedef struct ws_robot ws_robot;
typedef struct ws_state ws_state;
typedef struct ws_trajectory ws_trajectory;
typedef struct ws_config ws_config;

WSPLAN_API const char* ws_status_name(ws_status status);
WSPLAN_API const char* ws_last_error(void);
WSPLAN_API void ws_string_free(char* text);

/* Scenes (bounded 2D worlds with polygonal obstacles). */
WSPLAN_API ws_status ws_scene_load(const char* path, ws_scene** out);
WSPLAN_API ws_status ws_scene_from_json(const char* text, ws_scene** out);
WSPLAN_API ws_status ws_scene_to_json(const ws_scene* scene, char** out);
WSPLAN_API ws_status ws_scene_save(const ws_scene* scene, const char* path);
WSPLAN_API void ws_scene_free(ws_scene* scene);

/* Robot models (keypoints with radii, tree of links). */
WSPLAN_API ws_status ws_robot_load(const char* path, ws_robot** out);
WSPLAN_API ws_status ws_robot_from_json(const char* text, ws_robot** out);
WSPLAN_API void ws_robot_free(ws_robot* robot);

/* Robot states (one position per keypoint). */
WSPLAN_API ws_status ws_state_load(const char* path, ws_state** out);
WSPLAN_API ws_status ws_state_from_json(const char* text, ws_state** out);
WSPLAN_API void ws_state_free(ws_state* state);

/* Keypoint trajectories (state sequences over a shared time index). */
WSPLAN_API ws_status ws_trajectory_load(const char* path, ws_trajectory** out);
WSPLAN_API ws_status ws_trajectory_save(const ws_trajectory* traj, const char* path);
WSPLAN_API ws_status ws_trajectory_to_json(const ws_trajectory* traj, char** out);
WSPLAN_API size_t ws_trajectory_state_count(const ws_trajectory* traj);
WSPLAN_API size_t ws_trajectory_keypoint_count(const ws_trajectory* traj);
WSPLAN_API ws_status ws_trajectory_position(const ws_trajectory* traj, size_t state, size_t keypoint,
                                            double* x, double* y);
WSPLAN_API void ws_trajectory_free(ws_trajectory* traj);

/*
 * Configuration: coordination (alpha, eps_constraint, eps_length,
 * max_outer_iters, waypoints_per_segment, step_limit) and sampling
 * (n_samples, k_neighbors | "star", rrt_step, goal_bias, seed,
 * edge_check_resolution) parameters. ws_config_update merges a JSON object
 * of any subset of those fields into the handle.
 */
WSPLAN_API ws_status ws_config_create(ws_config** out);
WSPLAN_API ws_status ws_config_update(ws_config* config, const char* json_text);
WSPLAN_API ws_status ws_config_to_json(const ws_config* config, char** out);
WSPLAN_API void ws_config_free(ws_config* config);

/* Free-space decomposition: regions, labels, Godel codes, adjacency graph. */
WSPLAN_API ws_status ws_decompose_json(const ws_scene* scene, char** out);

/*
 * Full planning pipeline (decompose, route, search, coordinate). On success
 * fills a trajectory handle and a JSON summary (time_ms, iterations,
 * intermediate_states, total_length, max_violation, min_clearance).
 */
WSPLAN_API ws_status ws_plan(const ws_scene* scene, const ws_robot* robot, const ws_state* start,
                             const ws_state* goal, const ws_config* config, ws_trajectory** out,
                             char** summary_json);

/*
 * Coordination only: treats consecutive states of the input trajectory as
 * intermediate states and optimizes between them. log_csv receives the
 * iteration log (iter,max_violation,total_length).
 */
WSPLAN_API ws_status ws_optimize(const ws_scene* scene, const ws_robot* robot,
                                 const ws_trajectory* initial, const ws_config* config,
                                 ws_trajectory** out, char** log_csv, char** summary_json);

/* Benchmark harness; planner is workspace | prm | prmstar | rrt. */
WSPLAN_API ws_status ws_bench_csv_header(char** out);
WSPLAN_API ws_status ws_bench_run(const ws_scene* scene, const ws_robot* robot, const ws_state* start,
                                  const ws_state* goal, const char* planner, uint64_t seed,
                                  const ws_config* config, char** csv_row);

/*
 * Nonholonomic gradient-flow demonstration for a unit rigid body. Emits CSV
 * rows iter,v,omega,residual. The initial velocity of the reference point
 * must be a unit vector.
 */
WSPLAN_API ws_status ws_nonholo_demo(double p1x, double p1y, double p2x, double p2y, double v1x,
                                     double v1y, double v2x, double v2y, double dt, double step,
                                     int iters, char** csv_out);

/* Deterministic SVG rendering; trajectory and robot may be NULL. */
WSPLAN_API ws_status ws_render_svg(const ws_scene* scene, const ws_trajectory* traj,
                                   const ws_robot* robot, int draw_regions, char** svg_out);

#ifdef __cplusplus
}
#endif

#endif /* WSPLAN_H */
