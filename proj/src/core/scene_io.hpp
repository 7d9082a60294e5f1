#pragma once

#include "scene.hpp"

#include <string>

namespace wsplan {

Scene load_scene(const std::string& path);
void save_scene(const Scene& scene, const std::string& path);
Scene scene_from_json(const std::string& text);
std::string scene_to_json(const Scene& scene);

RobotModel load_robot(const std::string& path);
RobotModel robot_from_json(const std::string& text);
std::string robot_to_json(const RobotModel& model);

RobotState load_state(const std::string& path);
RobotState state_from_json(const std::string& text);
std::string state_to_json(const RobotState& state);
void save_state(const RobotState& state, const std::string& path);

KeypointTrajectory load_trajectory(const std::string& path);
KeypointTrajectory trajectory_from_json(const std::string& text);
std::string trajectory_to_json(const KeypointTrajectory& traj);
void save_trajectory(const KeypointTrajectory& traj, const std::string& path);

} // namespace wsplan
