#include "nonholo.hpp"

#include "error.hpp"

#include <cmath>

namespace wsplan {

namespace {

constexpr double kUnitTol = 1e-6;

void require_unit_v1(const VelocityPair& vel) {
    if (std::abs(norm(vel.v1) - 1.0) > kUnitTol)
        throw Error(Errc::bad_argument, "velocity of the reference point must be normalized");
    if (vel.dt <= 0) throw Error(Errc::bad_argument, "dt must be positive");
}

} // namespace

RigidBodyState::RigidBodyState(Point p1_, Point p2_) : p1(p1_), p2(p2_) {
    if (!finite(p1) || !finite(p2)) throw Error(Errc::bad_argument, "state not finite");
    if (std::abs(distance(p1, p2) - 1.0) > kUnitTol)
        throw Error(Errc::bad_argument, "heading point must sit at unit distance");
}

double cspace_side_slip_residual(double theta, const std::array<double, 3>& qdot,
                                 bool literal_theta_term) {
    double r = -qdot[0] * std::sin(theta) + qdot[1] * std::cos(theta);
    if (literal_theta_term) r += qdot[2];
    return r;
}

double workspace_residual(const RigidBodyState& state, const VelocityPair& vel) {
    require_unit_v1(vel);
    double ax = state.p2.x + vel.v2.x * vel.dt - state.p1.x - vel.v1.x * vel.dt;
    double ay = state.p2.y + vel.v2.y * vel.dt - state.p1.y - vel.v1.y * vel.dt;
    return ax * (-vel.v1.y) + ay * vel.v1.x;
}

std::array<double, 4> constraint_gradient(const RigidBodyState& state, const VelocityPair& vel) {
    require_unit_v1(vel);
    const double dt = vel.dt;
    return {
        state.p2.y - state.p1.y + vel.v2.y * dt,
        state.p1.x - state.p2.x - vel.v2.x * dt,
        -vel.v1.y * dt,
        vel.v1.x * dt,
    };
}

std::pair<double, double> to_v_omega(const RigidBodyState& state, const VelocityPair& vel) {
    Vec2 u = state.p2 - state.p1; // unit by the state invariant
    double v = dot(vel.v1, u);
    double omega = cross(u, vel.v2 - vel.v1);
    return {v, omega};
}

FlowResult gradient_flow_demo(const RigidBodyState& state, const VelocityPair& initial, double step,
                              int iters) {
    require_unit_v1(initial);
    if (step <= 0 || iters <= 0) throw Error(Errc::bad_argument, "step and iters must be positive");

    FlowResult out;
    VelocityPair vel = initial;
    for (int it = 0; it < iters; ++it) {
        double c = workspace_residual(state, vel);
        auto g = constraint_gradient(state, vel);
        vel.v1.x -= step * c * g[0];
        vel.v1.y -= step * c * g[1];
        vel.v2.x -= step * c * g[2];
        vel.v2.y -= step * c * g[3];
        double n1 = norm(vel.v1);
        if (n1 > kEpsGeom) vel.v1 = vel.v1 / n1;
        auto [v, omega] = to_v_omega(state, vel);
        out.samples.push_back({it, v, omega, c});
        if (norm(vel.v1) > 1e6 || norm(vel.v2) > 1e6) {
            out.diverged = true;
            break;
        }
    }
    return out;
}

} // namespace wsplan
