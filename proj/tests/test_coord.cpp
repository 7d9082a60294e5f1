#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coord.hpp"
#include "error.hpp"
#include "support/fixtures.hpp"
#include "support/test_rng.hpp"

#include <cmath>

using namespace wsplan;
using namespace wsplan::testing;

namespace {

KeypointTrajectory straight_line_trajectory(const RobotState& a, const RobotState& b, int n) {
    KeypointTrajectory traj;
    for (int t = 0; t < n; ++t)
        traj.states.push_back(interpolate_states(a, b, static_cast<double>(t) / (n - 1)));
    return traj;
}

// Total length objective evaluated from a flat interior-coordinate vector
// (boundary states fixed); the independent oracle for gradient checks.
double objective_from_flat(const KeypointTrajectory& base, const std::vector<double>& flat) {
    KeypointTrajectory traj = base;
    const std::size_t kpts = base.states.front().positions.size();
    for (std::size_t t = 1; t + 1 < traj.states.size(); ++t)
        for (std::size_t k = 0; k < kpts; ++k) {
            traj.states[t].positions[k].x = flat[((t - 1) * kpts + k) * 2];
            traj.states[t].positions[k].y = flat[((t - 1) * kpts + k) * 2 + 1];
        }
    return total_path_length(traj);
}

std::vector<double> flatten_interior(const KeypointTrajectory& traj) {
    std::vector<double> flat;
    for (std::size_t t = 1; t + 1 < traj.states.size(); ++t)
        for (const Point& p : traj.states[t].positions) {
            flat.push_back(p.x);
            flat.push_back(p.y);
        }
    return flat;
}

} // namespace

TEST_CASE("distance_project trivial cases") {
    RobotModel link = chain_arm(1, 1.0, 0.1, 0.1);
    CoordinationConfig config;

    KeypointTrajectory traj;
    RobotState boundary;
    boundary.positions = {{0, 0}, {1, 0}};
    traj.states = {boundary, boundary, boundary};
    // Exact link: unchanged.
    KeypointTrajectory out = distance_project(traj, link, config);
    CHECK(state_distance(out.states[1], boundary) == 0.0);

    // Stretched interior state splits symmetrically.
    traj.states[1].positions = {{0, 0}, {2, 0}};
    out = distance_project(traj, link, config);
    CHECK(distance(out.states[1].positions[0], {0.5, 0}) < 1e-12);
    CHECK(distance(out.states[1].positions[1], {1.5, 0}) < 1e-12);
}

TEST_CASE("single isolated-link update restores length to machine precision") {
    RobotModel link = chain_arm(1, 0.73, 0.1, 0.1);
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        Point pa{uniform(rng, -2, 2), uniform(rng, -2, 2)};
        Point pb = pa + Vec2{uniform(rng, -2, 2), uniform(rng, -2, 2)};
        if (distance(pa, pb) < 1e-3) continue;
        Vec2 diff = pa - pb;
        double d = norm(diff);
        Vec2 u = diff / d;
        double corr = (0.73 - d) / 2;
        Point na = pa + u * corr, nb = pb - u * corr;
        CHECK(std::abs(distance(na, nb) - 0.73) <= 8 * std::numeric_limits<double>::epsilon());
    }
}

TEST_CASE("distance_project drives random perturbed chains to 1e-9") {
    Rng rng(42);
    CoordinationConfig config;
    config.eps_constraint = 1e-9;
    for (int trial = 0; trial < 40; ++trial) {
        int links = uniform_int(rng, 3, 6);
        RobotModel arm = chain_arm(links, uniform(rng, 0.4, 0.9), 0.05, 0.05);
        std::vector<double> angles;
        for (int i = 0; i < links; ++i) angles.push_back(uniform(rng, -2, 2));
        RobotState a = chain_state(arm, {0, 0}, angles);
        for (double& ang : angles) ang += uniform(rng, -1, 1);
        RobotState b = chain_state(arm, {uniform(rng, -1, 1), uniform(rng, -1, 1)}, angles);

        KeypointTrajectory traj = straight_line_trajectory(a, b, 20);
        for (std::size_t t = 1; t + 1 < traj.states.size(); ++t)
            for (Point& p : traj.states[t].positions)
                p += Vec2{uniform(rng, -0.1, 0.1), uniform(rng, -0.1, 0.1)};

        KeypointTrajectory out = distance_project(traj, arm, config);
        for (std::size_t t = 1; t + 1 < out.states.size(); ++t)
            CHECK(constraint_violation(out.states[t], arm) <= 1e-9);
        // Boundary states untouched.
        CHECK(state_distance(out.states.front(), traj.states.front()) == 0.0);
        CHECK(state_distance(out.states.back(), traj.states.back()) == 0.0);
    }
}

TEST_CASE("one projection sweep never increases the max violation") {
    Rng rng(43);
    CoordinationConfig config;
    config.inner_projection_sweeps = 1;
    config.eps_constraint = 1e-300; // force exactly one sweep
    int cases = 0;
    while (cases < 500) {
        int links = uniform_int(rng, 3, 6);
        RobotModel arm = chain_arm(links, uniform(rng, 0.3, 1.0), 0.05, 0.05);
        std::vector<double> angles;
        for (int i = 0; i < links; ++i) angles.push_back(uniform(rng, -M_PI, M_PI));
        RobotState st = chain_state(arm, {uniform(rng, -1, 1), uniform(rng, -1, 1)}, angles);
        for (Point& p : st.positions) p += Vec2{uniform(rng, -0.2, 0.2), uniform(rng, -0.2, 0.2)};

        KeypointTrajectory traj;
        traj.states = {st, st, st};
        double before = constraint_violation(traj.states[1], arm);
        if (before < 1e-6) continue;
        KeypointTrajectory out = distance_project(traj, arm, config);
        double after = constraint_violation(out.states[1], arm);
        CHECK(after <= before + 1e-12);
        ++cases;
    }
}

TEST_CASE("length descent: collinear waypoints yield zero update") {
    RobotModel kp = chain_arm(1, 1.0, 0.1, 0.1);
    CoordinationConfig config;
    config.alpha = 0.5;
    KeypointTrajectory traj;
    for (int t = 0; t < 5; ++t) {
        RobotState st;
        st.positions = {{static_cast<double>(t), 0.0}, {static_cast<double>(t), 1.0}};
        traj.states.push_back(st);
    }
    KeypointTrajectory out = length_descent_step(traj, kp, nullptr, config);
    for (std::size_t t = 0; t < traj.states.size(); ++t)
        CHECK(state_distance(out.states[t], traj.states[t]) == 0.0);
}

TEST_CASE("length descent matches the worked three-point example") {
    // p(i)=(0,0), p(i+1)=(1,1), p(i+2)=(2,0), alpha=0.5 -> (1, 1 - sqrt(2)/2).
    RobotModel kp({{0, 0.1}, {1, 0.1}}, {{0, 1, 1.0, 0.0}}, 0);
    CoordinationConfig config;
    config.alpha = 0.5;
    KeypointTrajectory traj;
    for (const Point& p : {Point{0, 0}, Point{1, 1}, Point{2, 0}}) {
        RobotState st;
        st.positions = {p, p + Vec2{5, 5}}; // second keypoint far away, straight
        traj.states.push_back(st);
    }
    KeypointTrajectory out = length_descent_step(traj, kp, nullptr, config);
    CHECK(distance(out.states[1].positions[0], {1.0, 1.0 - std::sqrt(2.0) / 2.0}) < 1e-12);
}

TEST_CASE("length descent direction matches central finite differences") {
    Rng rng(44);
    RobotModel arm = chain_arm(2, 0.8, 0.05, 0.05);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        KeypointTrajectory traj;
        for (int t = 0; t < 5; ++t) {
            RobotState st;
            st.positions = {{uniform(rng, -2, 2), uniform(rng, -2, 2)},
                            {uniform(rng, -2, 2), uniform(rng, -2, 2)},
                            {uniform(rng, -2, 2), uniform(rng, -2, 2)}};
            traj.states.push_back(st);
        }
        auto grad = length_gradient(traj);
        auto flat = flatten_interior(traj);
        double h = 1e-6;
        bool skip = false;
        for (std::size_t i = 0; i < flat.size() && !skip; ++i) {
            auto plus = flat, minus = flat;
            plus[i] += h;
            minus[i] -= h;
            double fd = (objective_from_flat(traj, plus) - objective_from_flat(traj, minus)) / (2 * h);
            if (std::abs(fd) < 1e-4 && std::abs(grad[i]) < 1e-4) continue;
            double rel = std::abs(grad[i] - fd) / std::max(1.0, std::abs(fd));
            CHECK(rel < 1e-6);
        }
        ++checked;
    }
    CHECK(checked == 100);
}

TEST_CASE("repeated descent on a V-shaped path converges to the chord") {
    RobotModel kp({{0, 0.1}}, {}, 0);
    // Single keypoint means no links: build a 1-keypoint model by hand.
    // chain_arm requires >= 1 link, so use a 2-keypoint model and keep the
    // second point collinear far away.
    RobotModel arm({{0, 0.1}, {1, 0.1}}, {{0, 1, 1.0, 0.0}}, 0);
    CoordinationConfig config;
    config.alpha = 0.05;
    KeypointTrajectory traj;
    const int n = 11;
    for (int t = 0; t < n; ++t) {
        double x = 2.0 * t / (n - 1);
        double y = x <= 1.0 ? x : 2.0 - x;
        RobotState st;
        st.positions = {{x, y}, {x + 10, y}};
        traj.states.push_back(st);
    }
    for (int it = 0; it < 20000; ++it) traj = length_descent_step(traj, arm, nullptr, config);
    // Each keypoint's path shrinks to its straight chord (length 2 each).
    CHECK(total_path_length(traj) == doctest::Approx(4.0).epsilon(1e-4 / 4.0));
}

TEST_CASE("velocity_project enforces step limits") {
    RobotModel arm = chain_arm(1, 1.0, 0.1, 0.1);
    CoordinationConfig config;
    config.step_limit[0] = 0.25;
    config.step_limit[1] = 0.25;

    // All steps within the limit: unchanged.
    KeypointTrajectory small = straight_line_trajectory(chain_state(arm, {0, 0}, {0.0}),
                                                        chain_state(arm, {0.5, 0}, {0.0}), 5);
    KeypointTrajectory out = velocity_project(small, config);
    for (std::size_t t = 0; t < small.states.size(); ++t)
        CHECK(state_distance(out.states[t], small.states[t]) == 0.0);

    // Single step of length 2v between interior points: both pulled in v/2.
    KeypointTrajectory traj;
    for (double x : {0.0, 0.05, 0.55, 0.6}) {
        RobotState st;
        st.positions = {{x, 0}, {x + 1, 0}};
        traj.states.push_back(st);
    }
    config.step_limit.clear();
    config.step_limit[0] = 0.25; // step 1->2 has length 0.5 = 2v
    out = velocity_project(traj, config);
    CHECK(distance(out.states[1].positions[0], {0.175, 0}) < 1e-12);
    CHECK(distance(out.states[2].positions[0], {0.425, 0}) < 1e-12);
    CHECK(max_step_length(out, 0) <= 0.25 + 1e-12);
}

TEST_CASE("velocity limits are satisfied after coordination") {
    Rng rng(45);
    Scene scene = empty_scene(10.0);
    RobotModel arm = chain_arm(3, 0.5, 0.08, 0.1);
    RobotState a = chain_state(arm, {-1.5, 0}, {0.2, 0.3, -0.2});
    RobotState b = chain_state(arm, {1.5, 0.5}, {0.2, 0.3, -0.2});
    CoordinationConfig config;
    config.waypoints_per_segment = 60;
    for (const Keypoint& kp : arm.keypoints()) config.step_limit[kp.id] = 0.08;
    CoordinationResult res = coordinate({{a, b, {}}}, arm, scene, config);
    CHECK(max_violation(res.trajectory, arm) <= config.eps_constraint);
    for (const Keypoint& kp : arm.keypoints())
        CHECK(max_step_length(res.trajectory, kp.id) <= 0.08 + config.eps_constraint);
}

TEST_CASE("coordinate: identical endpoints produce a constant trajectory") {
    Scene scene = empty_scene(5.0);
    RobotModel arm = chain_arm(4, 0.5, 0.08, 0.1);
    RobotState a = chain_state(arm, {0, 0}, {0.3, 0.1, -0.2, 0.4});
    CoordinationResult res = coordinate({{a, a, {}}}, arm, scene, {});
    CHECK(res.outer_iterations == 0);
    REQUIRE(res.trajectory.states.size() == 100);
    for (const RobotState& st : res.trajectory.states) CHECK(state_distance(st, a) == 0.0);
}

TEST_CASE("coordinate: free-space 4R and 6R arms converge within 10 outer iterations") {
    Scene scene = empty_scene(10.0);
    for (int links : {4, 6}) {
        RobotModel arm = chain_arm(links, links == 4 ? 0.5 : 0.4, 0.08, 0.1);
        std::vector<double> angles0(static_cast<std::size_t>(links), 0.15);
        std::vector<double> angles1 = angles0;
        angles1[0] += M_PI / 2;
        RobotState a = chain_state(arm, {0, 0}, angles0);
        RobotState b = chain_state(arm, {1.0, 0.6}, angles1);
        CoordinationResult res = coordinate({{a, b, {}}}, arm, scene, {});
        CHECK(res.outer_iterations <= 10);
        CHECK(max_violation(res.trajectory, arm) <= 1e-6);
        // Boundary states bit-identical.
        CHECK(state_distance(res.trajectory.states.front(), a) == 0.0);
        CHECK(state_distance(res.trajectory.states.back(), b) == 0.0);
    }
}

TEST_CASE("coordinate rejects infeasible segment endpoints") {
    Scene scene = empty_scene(5.0);
    RobotModel arm = chain_arm(2, 0.5, 0.08, 0.1);
    RobotState bad = chain_state(arm, {0, 0}, {0.0, 0.0});
    bad.positions[2] += Vec2{0.5, 0.5};
    RobotState good = chain_state(arm, {1, 0}, {0.0, 0.0});
    CHECK_THROWS_AS(coordinate({{bad, good, {}}}, arm, scene, {}), Error);
}

TEST_CASE("near-orthogonality of residual and length gradients at convergence") {
    // The perpendicularity claim is checked at solutions that actually reach
    // stationarity (the optimizer can also stop on a no-progress rollback,
    // where no gradient relation is implied; those report WARN only).
    Scene scene = empty_scene(10.0);
    RobotModel arm = chain_arm(4, 0.5, 0.08, 0.1);
    int asserted = 0;
    for (double rot : {0.0, M_PI / 12, M_PI / 2}) {
        RobotState a = chain_state(arm, {0, 0}, {0.3, 0.2, -0.1, 0.25});
        RobotState b = chain_state(arm, {1.6, 0.6}, {0.3 + rot, 0.2, -0.1, 0.25});
        CoordinationResult res = coordinate({{a, b, {}}}, arm, scene, {});

        const KeypointTrajectory& traj = res.trajectory;
        auto g_len = length_gradient(traj);
        std::vector<double> g_con(g_len.size(), 0.0);
        const std::size_t kpts = arm.keypoint_count();
        auto idx = [&](std::size_t t, std::size_t k) { return ((t - 1) * kpts + k) * 2; };
        for (std::size_t t = 1; t + 1 < traj.states.size(); ++t) {
            for (const Link& l : arm.links()) {
                Vec2 d = traj.states[t].positions[static_cast<std::size_t>(l.a)] -
                         traj.states[t].positions[static_cast<std::size_t>(l.b)];
                double nd = norm(d);
                double c = nd - l.length;
                Vec2 u = d / nd;
                g_con[idx(t, static_cast<std::size_t>(l.a))] += c * u.x;
                g_con[idx(t, static_cast<std::size_t>(l.a)) + 1] += c * u.y;
                g_con[idx(t, static_cast<std::size_t>(l.b))] -= c * u.x;
                g_con[idx(t, static_cast<std::size_t>(l.b)) + 1] -= c * u.y;
            }
        }
        double dot_gg = 0, n1 = 0, n2 = 0;
        for (std::size_t i = 0; i < g_len.size(); ++i) {
            dot_gg += g_len[i] * g_con[i];
            n1 += g_len[i] * g_len[i];
            n2 += g_con[i] * g_con[i];
        }
        double cosine = dot_gg / (std::sqrt(n1) * std::sqrt(n2) + 1e-300);
        HessianDiagnostic diag = hessian_diagnostic(res.trajectory, arm);
        if (diag.stationarity_residual < 0.1 * std::sqrt(n1) + 1e-9) {
            CHECK(std::abs(cosine) < 0.1);
            ++asserted;
        } else {
            WARN_MESSAGE(std::abs(cosine) < 0.1,
                         "no-progress termination (stationarity residual ",
                         diag.stationarity_residual, "), cosine ", cosine);
        }
    }
    CHECK(asserted >= 1);
}

TEST_CASE("hessian diagnostic: analytic blocks match finite differences") {
    Rng rng(46);
    RobotModel arm = chain_arm(2, 0.7, 0.05, 0.05);
    // Random constraint-exact trajectory, 4 states.
    std::vector<double> angles{0.3, -0.4};
    KeypointTrajectory traj;
    for (int t = 0; t < 4; ++t) {
        traj.states.push_back(chain_state(arm, {0.2 * t, 0.1 * t}, angles));
        angles[0] += 0.2;
        angles[1] -= 0.1;
    }
    std::vector<double> lambda(static_cast<std::size_t>(2 * arm.links().size()), 0.0);
    for (double& l : lambda) l = uniform(rng, -0.5, 0.5);

    // Finite-difference Hessian of L = length + sum lambda_j c_j over the
    // interior coordinates.
    auto lagrangian = [&](const std::vector<double>& flat) {
        KeypointTrajectory tr = traj;
        const std::size_t kpts = arm.keypoint_count();
        for (std::size_t t = 1; t + 1 < tr.states.size(); ++t)
            for (std::size_t k = 0; k < kpts; ++k) {
                tr.states[t].positions[k].x = flat[((t - 1) * kpts + k) * 2];
                tr.states[t].positions[k].y = flat[((t - 1) * kpts + k) * 2 + 1];
            }
        double L = total_path_length(tr);
        std::size_t c = 0;
        for (std::size_t t = 1; t + 1 < tr.states.size(); ++t)
            for (const Link& l : arm.links()) {
                double d = distance(tr.states[t].positions[static_cast<std::size_t>(l.a)],
                                    tr.states[t].positions[static_cast<std::size_t>(l.b)]);
                L += lambda[c++] * (d - l.length);
            }
        return L;
    };

    auto flat = flatten_interior(traj);
    const std::size_t dim = flat.size();
    double h = 1e-5;
    std::vector<std::vector<double>> fd(dim, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            auto pp = flat, pm = flat, mp = flat, mm = flat;
            pp[i] += h; pp[j] += h;
            pm[i] += h; pm[j] -= h;
            mp[i] -= h; mp[j] += h;
            mm[i] -= h; mm[j] -= h;
            fd[i][j] = (lagrangian(pp) - lagrangian(pm) - lagrangian(mp) + lagrangian(mm)) / (4 * h * h);
        }
    }

    // Analytic Hessian via the diagnostic's eigen-decomposition cannot be
    // read back directly; rebuild it from the block formula instead.
    const std::size_t kpts = arm.keypoint_count();
    auto idx = [&](std::size_t t, std::size_t k) { return ((t - 1) * kpts + k) * 2; };
    std::vector<std::vector<double>> H(dim, std::vector<double>(dim, 0.0));
    auto add_pair = [&](bool a_in, std::size_t ia, bool b_in, std::size_t ib, const Vec2& d, double w) {
        double nd = norm(d);
        double inv3 = 1.0 / (nd * nd * nd);
        double hxx = d.y * d.y * inv3 * w;
        double hyy = d.x * d.x * inv3 * w;
        double hxy = -d.x * d.y * inv3 * w;
        auto add = [&](std::size_t r, std::size_t c, double sign) {
            H[r][c] += sign * hxx;
            H[r + 1][c + 1] += sign * hyy;
            H[r][c + 1] += sign * hxy;
            H[r + 1][c] += sign * hxy;
        };
        if (a_in) add(ia, ia, 1.0);
        if (b_in) add(ib, ib, 1.0);
        if (a_in && b_in) {
            add(ia, ib, -1.0);
            add(ib, ia, -1.0);
        }
    };
    const std::size_t n = traj.states.size();
    for (std::size_t k = 0; k < kpts; ++k)
        for (std::size_t t = 0; t + 1 < n; ++t)
            add_pair(t >= 1 && t + 1 < n, t >= 1 ? idx(t, k) : 0, t + 1 >= 1 && t + 2 < n,
                     t + 2 < n ? idx(t + 1, k) : 0,
                     traj.states[t].positions[k] - traj.states[t + 1].positions[k], 1.0);
    std::size_t c = 0;
    for (std::size_t t = 1; t + 1 < n; ++t)
        for (const Link& l : arm.links()) {
            add_pair(true, idx(t, static_cast<std::size_t>(l.a)), true,
                     idx(t, static_cast<std::size_t>(l.b)),
                     traj.states[t].positions[static_cast<std::size_t>(l.a)] -
                         traj.states[t].positions[static_cast<std::size_t>(l.b)],
                     lambda[c++]);
        }

    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            CHECK(std::abs(H[i][j] - fd[i][j]) < 1e-5 * std::max(1.0, std::abs(fd[i][j])));
}

TEST_CASE("hessian diagnostic runs at a converged solution and flags degeneracy") {
    Scene scene = empty_scene(10.0);
    RobotModel arm = chain_arm(2, 0.6, 0.08, 0.1);
    RobotState a = chain_state(arm, {0, 0}, {0.1, 0.2});
    RobotState b = chain_state(arm, {1.2, 0.4}, {0.1, 0.2});
    CoordinationConfig config;
    config.waypoints_per_segment = 20;
    CoordinationResult res = coordinate({{a, b, {}}}, arm, scene, config);
    HessianDiagnostic diag = hessian_diagnostic(res.trajectory, arm);
    CHECK(diag.coordinate_count > 0);
    CHECK(diag.constraint_count > 0);
    // Pure translation converges to straight paths: objective-dominated and
    // positive semi-definite.
    CHECK(diag.min_eigenvalue >= -1e-8);
    CHECK(diag.diagonal_blocks_positive == diag.diagonal_blocks_total);

    // Degenerate (coincident) link endpoints are rejected.
    KeypointTrajectory degen = res.trajectory;
    degen.states[1].positions[1] = degen.states[1].positions[0];
    CHECK_THROWS_AS(hessian_diagnostic(degen, arm), Error);
}

TEST_CASE("two points at exact distance with zero multipliers give a PSD objective Hessian") {
    RobotModel arm = chain_arm(1, 1.0, 0.1, 0.1);
    KeypointTrajectory traj;
    for (int t = 0; t < 4; ++t) {
        RobotState st;
        st.positions = {{0.3 * t, 0.0}, {0.3 * t, -1.0}};
        traj.states.push_back(st);
    }
    std::vector<double> zeros(2, 0.0);
    HessianDiagnostic diag = hessian_diagnostic(traj, arm, &zeros);
    CHECK(diag.min_eigenvalue >= -1e-10);
}
