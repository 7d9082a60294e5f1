#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "error.hpp"
#include "scene_io.hpp"
#include "support/fixtures.hpp"
#include "support/test_rng.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

using namespace wsplan;
using namespace wsplan::testing;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("scene json round trip") {
    Rng rng(11);
    Scene scene = random_scene(rng, 5);
    std::string path = temp_path("wsplan_scene_rt.json");
    save_scene(scene, path);
    Scene loaded = load_scene(path);
    REQUIRE(loaded.obstacle_count() == scene.obstacle_count());
    for (std::size_t k = 0; k < scene.obstacle_count(); ++k) {
        REQUIRE(loaded.obstacles()[k].size() == scene.obstacles()[k].size());
        for (std::size_t v = 0; v < scene.obstacles()[k].size(); ++v)
            CHECK(distance(loaded.obstacles()[k][v], scene.obstacles()[k][v]) <= kEpsGeom);
    }
    std::remove(path.c_str());
}

TEST_CASE("empty obstacle list loads") {
    Scene s = scene_from_json(R"({"bounds":[0,0,1,1],"obstacles":[]})");
    CHECK(s.obstacle_count() == 0);
    Scene s2 = scene_from_json(R"({"bounds":[0,0,1,1]})");
    CHECK(s2.obstacle_count() == 0);
}

TEST_CASE("self-intersecting obstacle is rejected with its id") {
    const char* text = R"({"bounds":[0,0,10,10],
        "obstacles":[{"id":0,"vertices":[[1,1],[2,2],[2,1],[1,2]]}]})";
    try {
        scene_from_json(text);
        FAIL("expected validation error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::validation);
        CHECK(std::string(e.what()).find("obstacle 0 not simple") != std::string::npos);
    }
}

TEST_CASE("malformed json reports a parse error") {
    CHECK_THROWS_AS(scene_from_json("{\"bounds\": [0,0,1"), Error);
    try {
        scene_from_json("{\"bounds\": \"nope\"}");
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK((e.code() == Errc::parse || e.code() == Errc::validation));
    }
}

TEST_CASE("robot model validation") {
    CHECK_THROWS_AS(RobotModel({{0, 0.1}}, {{0, 0, 1.0, 0.1}}, 0), Error);
    // Cycle.
    CHECK_THROWS_AS(RobotModel({{0, 0.1}, {1, 0.1}, {2, 0.1}},
                               {{0, 1, 1.0, 0.1}, {1, 2, 1.0, 0.1}, {2, 0, 1.0, 0.1}}, 0),
                    Error);
    // Radius below half width.
    CHECK_THROWS_AS(RobotModel({{0, 0.01}, {1, 0.3}}, {{0, 1, 1.0, 0.2}}, 0), Error);
    // Valid tree with a branch.
    RobotModel tree({{0, 0.1}, {1, 0.1}, {2, 0.1}, {3, 0.1}},
                    {{0, 1, 1.0, 0.1}, {1, 2, 0.5, 0.1}, {1, 3, 0.5, 0.1}}, 0);
    CHECK(tree.bfs_links().size() == 3);
    CHECK(tree.bfs_links()[0].a == 0);
}

TEST_CASE("robot and trajectory round trip") {
    RobotModel arm = chain_arm(4, 0.5, 0.1, 0.1);
    std::string path = temp_path("wsplan_robot_rt.json");
    {
        std::string text = robot_to_json(arm);
        RobotModel again = robot_from_json(text);
        CHECK(again.keypoint_count() == arm.keypoint_count());
        CHECK(again.root() == arm.root());
    }
    KeypointTrajectory traj;
    traj.states.push_back(chain_state(arm, {0, 0}, {0, 0, 0, 0}));
    traj.states.push_back(chain_state(arm, {1, 0}, {0.3, 0, 0, 0}));
    save_trajectory(traj, path);
    KeypointTrajectory loaded = load_trajectory(path);
    REQUIRE(loaded.size() == 2);
    CHECK(state_distance(loaded.states[1], traj.states[1]) <= kEpsGeom);
    std::remove(path.c_str());
}

TEST_CASE("constraint_violation basics") {
    RobotModel arm = chain_arm(3, 1.0, 0.1, 0.1);
    RobotState exact = chain_state(arm, {0, 0}, {0.2, 0.4, -0.3});
    CHECK(constraint_violation(exact, arm) <= 1e-12);

    RobotState stretched = exact;
    Vec2 dir = normalized(stretched.positions[3] - stretched.positions[2]);
    stretched.positions[3] += dir * 0.1;
    CHECK(constraint_violation(stretched, arm) == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("constraint_violation matches per-link scan on random perturbations") {
    Rng rng(22);
    RobotModel arm = chain_arm(5, 0.7, 0.1, 0.1);
    for (int trial = 0; trial < 200; ++trial) {
        RobotState st = chain_state(arm, {uniform(rng, -1, 1), uniform(rng, -1, 1)},
                                    {uniform(rng, -3, 3), uniform(rng, -2, 2), uniform(rng, -2, 2),
                                     uniform(rng, -2, 2), uniform(rng, -2, 2)});
        for (Point& p : st.positions) p += Vec2{uniform(rng, -0.2, 0.2), uniform(rng, -0.2, 0.2)};
        double expected = 0.0;
        for (const Link& l : arm.links()) {
            double d = distance(st.positions[static_cast<std::size_t>(l.a)],
                                st.positions[static_cast<std::size_t>(l.b)]);
            expected = std::max(expected, std::abs(d - l.length));
        }
        CHECK(constraint_violation(st, arm) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("constraint_violation invariant under rigid transforms") {
    Rng rng(33);
    RobotModel arm = chain_arm(4, 0.5, 0.1, 0.1);
    for (int trial = 0; trial < 100; ++trial) {
        RobotState st = chain_state(arm, {0, 0}, {uniform(rng, -3, 3), uniform(rng, -2, 2),
                                                  uniform(rng, -2, 2), uniform(rng, -2, 2)});
        for (Point& p : st.positions) p += Vec2{uniform(rng, -0.3, 0.3), uniform(rng, -0.3, 0.3)};
        double before = constraint_violation(st, arm);

        double ang = uniform(rng, 0, 2 * M_PI);
        Vec2 shift{uniform(rng, -5, 5), uniform(rng, -5, 5)};
        RobotState moved = st;
        for (Point& p : moved.positions) p = rotated(p, ang) + shift;
        CHECK(constraint_violation(moved, arm) == doctest::Approx(before).epsilon(1e-9));
    }
}
