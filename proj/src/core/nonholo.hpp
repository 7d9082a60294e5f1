#pragma once

#include "geom.hpp"

#include <array>
#include <vector>

namespace wsplan {

// Planar rigid body tracked by a reference point p1 and a heading point p2
// at unit distance.
struct RigidBodyState {
    Point p1;
    Point p2;

    RigidBodyState(Point p1_, Point p2_);
};

struct VelocityPair {
    Vec2 v1;
    Vec2 v2;
    double dt = 0.1;
};

// Classical no-side-slip residual in configuration space; the literal form
// keeps the published third component (+theta_dot) instead of 0.
double cspace_side_slip_residual(double theta, const std::array<double, 3>& qdot,
                                 bool literal_theta_term = false);

// Workspace residual: predicted link vector dotted with the left-normal of
// the reference-point velocity. Requires ||v1|| = 1.
double workspace_residual(const RigidBodyState& state, const VelocityPair& vel);

// Analytic gradient of workspace_residual with respect to
// (v1.x, v1.y, v2.x, v2.y). Requires ||v1|| = 1.
std::array<double, 4> constraint_gradient(const RigidBodyState& state, const VelocityPair& vel);

// Forward speed along the link and angular rate of the link.
std::pair<double, double> to_v_omega(const RigidBodyState& state, const VelocityPair& vel);

struct FlowSample {
    int iter = 0;
    double v = 0.0;
    double omega = 0.0;
    double residual = 0.0;
};

struct FlowResult {
    std::vector<FlowSample> samples;
    bool diverged = false;
};

// Iterates the squared-residual descent vel <- vel - step * C * gradC,
// renormalizing ||v1|| = 1 each iteration, and records (v, omega, residual).
FlowResult gradient_flow_demo(const RigidBodyState& state, const VelocityPair& initial, double step,
                              int iters);

} // namespace wsplan
