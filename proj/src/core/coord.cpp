#include "coord.hpp"

#include "error.hpp"
#include "search.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

namespace wsplan {

void CoordinationConfig::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(Errc::bad_argument, "alpha must be in (0, 1]");
    if (eps_constraint <= 0 || eps_length <= 0) throw Error(Errc::bad_argument, "tolerances must be positive");
    if (waypoints_per_segment < 2) throw Error(Errc::bad_argument, "waypoints_per_segment must be >= 2");
    for (auto [k, v] : step_limit)
        if (v <= 0) throw Error(Errc::bad_argument, "step limits must be positive");
}

double total_path_length(const KeypointTrajectory& traj) {
    double len = 0.0;
    for (std::size_t t = 0; t + 1 < traj.states.size(); ++t)
        for (std::size_t k = 0; k < traj.states[t].positions.size(); ++k)
            len += distance(traj.states[t].positions[k], traj.states[t + 1].positions[k]);
    return len;
}

double max_violation(const KeypointTrajectory& traj, const RobotModel& model) {
    double worst = 0.0;
    for (const RobotState& st : traj.states) worst = std::max(worst, constraint_violation(st, model));
    return worst;
}

double max_step_length(const KeypointTrajectory& traj, int keypoint) {
    double worst = 0.0;
    for (std::size_t t = 0; t + 1 < traj.states.size(); ++t)
        worst = std::max(worst, distance(traj.states[t].positions[static_cast<std::size_t>(keypoint)],
                                         traj.states[t + 1].positions[static_cast<std::size_t>(keypoint)]));
    return worst;
}

namespace {

// Previous-time link direction for degenerate links; walks back to t = 0.
Vec2 fallback_link_direction(const KeypointTrajectory& traj, std::size_t t, const Link& link) {
    for (std::size_t back = t; back-- > 0;) {
        Vec2 d = traj.states[back].positions[static_cast<std::size_t>(link.a)] -
                 traj.states[back].positions[static_cast<std::size_t>(link.b)];
        if (norm(d) > kEpsGeom) return normalized(d);
    }
    throw Error(Errc::degenerate_input,
                "link " + std::to_string(link.a) + "-" + std::to_string(link.b) +
                    " degenerate with no earlier direction");
}

} // namespace

KeypointTrajectory distance_project(const KeypointTrajectory& traj, const RobotModel& model,
                                    const CoordinationConfig& config) {
    if (traj.states.size() < 2) return traj;
    for (const RobotState& st : traj.states)
        if (st.positions.size() != model.keypoint_count())
            throw Error(Errc::bad_argument, "trajectory states do not cover model keypoints");

    KeypointTrajectory out = traj;
    for (std::size_t t = 1; t + 1 < out.states.size(); ++t) {
        RobotState& st = out.states[t];
        for (int sweep = 0; sweep < config.inner_projection_sweeps; ++sweep) {
            for (const Link& link : model.bfs_links()) {
                Point& pa = st.positions[static_cast<std::size_t>(link.a)];
                Point& pb = st.positions[static_cast<std::size_t>(link.b)];
                Vec2 diff = pa - pb;
                double d = norm(diff);
                Vec2 u = d > kEpsGeom ? diff / d : fallback_link_direction(out, t, link);
                double corr = (link.length - d) / 2.0;
                pa += u * corr;
                pb -= u * corr;
            }
            if (constraint_violation(st, model) <= config.eps_constraint) break;
        }
    }
    return out;
}

KeypointTrajectory length_descent_step(const KeypointTrajectory& traj, const RobotModel& model,
                                       const Scene* scene, const CoordinationConfig& config) {
    const std::size_t n = traj.states.size();
    if (n < 3) return traj;
    const std::size_t kpts = traj.states.front().positions.size();

    auto unit_or_zero = [](const Vec2& d) {
        double nd = norm(d);
        return nd > kEpsGeom ? d / nd : Vec2{0.0, 0.0};
    };

    // Collision screening compares against the pre-step overlap set.
    std::vector<std::set<std::pair<int, int>>> baseline;
    if (scene) {
        baseline.resize(n);
        for (std::size_t t = 1; t + 1 < n; ++t)
            for (const CollisionEntry& e : robot_collides(traj.states[t], model, *scene))
                baseline[t].insert({e.link, e.obstacle});
    }

    KeypointTrajectory out = traj;
    for (std::size_t k = 0; k < kpts; ++k) {
        for (std::size_t t = 1; t + 1 < n; ++t) {
            Vec2 u1 = unit_or_zero(traj.states[t].positions[k] - traj.states[t - 1].positions[k]);
            Vec2 u2 = unit_or_zero(traj.states[t + 1].positions[k] - traj.states[t].positions[k]);
            Vec2 update = (u1 - u2) * config.alpha;
            if (norm(update) <= 0.0) continue;
            if (scene) {
                RobotState probe = traj.states[t];
                probe.positions[k] -= update;
                bool introduces = false;
                for (const CollisionEntry& e : robot_collides(probe, model, *scene)) {
                    if (!baseline[t].count({e.link, e.obstacle})) {
                        introduces = true;
                        break;
                    }
                }
                if (introduces) continue;
            }
            out.states[t].positions[k] -= update;
        }
    }
    return out;
}

KeypointTrajectory velocity_project(const KeypointTrajectory& traj, const CoordinationConfig& config) {
    if (config.step_limit.empty() || traj.states.size() < 2) return traj;
    KeypointTrajectory out = traj;
    const std::size_t n = out.states.size();
    for (auto [k, limit] : config.step_limit) {
        auto kk = static_cast<std::size_t>(k);
        for (std::size_t t = 0; t + 1 < n; ++t) {
            Point& a = out.states[t].positions[kk];
            Point& b = out.states[t + 1].positions[kk];
            double s = distance(a, b);
            if (s <= limit + kEpsGeom) continue;
            Vec2 u = normalized(b - a);
            double excess = s - limit;
            bool a_fixed = (t == 0);
            bool b_fixed = (t + 2 == n);
            if (a_fixed && b_fixed) continue;
            if (a_fixed) {
                b -= u * excess;
            } else if (b_fixed) {
                a += u * excess;
            } else {
                a += u * (excess / 2);
                b -= u * (excess / 2);
            }
        }
    }
    return out;
}

namespace {

std::vector<Point> resample_polyline(const std::vector<Point>& poly, int n) {
    std::vector<double> cum{0.0};
    for (std::size_t i = 0; i + 1 < poly.size(); ++i)
        cum.push_back(cum.back() + distance(poly[i], poly[i + 1]));
    double total = cum.back();
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double target = total * i / (n - 1);
        std::size_t seg = 0;
        while (seg + 2 < cum.size() && cum[seg + 1] < target) ++seg;
        double span = cum[seg + 1] - cum[seg];
        double t = span > 0 ? (target - cum[seg]) / span : 0.0;
        out.push_back(poly[seg] + (poly[seg + 1] - poly[seg]) * t);
    }
    if (poly.size() == 1) out.assign(static_cast<std::size_t>(n), poly[0]);
    return out;
}

KeypointTrajectory resample_bundle(const PathBundle& bundle, std::size_t kpts, int n) {
    KeypointTrajectory traj;
    traj.states.assign(static_cast<std::size_t>(n), RobotState{});
    for (auto& st : traj.states) st.positions.assign(kpts, Point{});
    for (std::size_t k = 0; k < kpts; ++k) {
        std::vector<Point> poly;
        if (k < bundle.polylines.size() && bundle.polylines[k].size() >= 2)
            poly = bundle.polylines[k];
        else
            poly = {bundle.from.positions[k], bundle.to.positions[k]};
        std::vector<Point> samples = resample_polyline(poly, n);
        for (int t = 0; t < n; ++t) traj.states[static_cast<std::size_t>(t)].positions[k] = samples[static_cast<std::size_t>(t)];
    }
    // Boundary states are the intermediate states themselves, bit-identical.
    traj.states.front() = bundle.from;
    traj.states.back() = bundle.to;
    return traj;
}

bool velocity_satisfied(const KeypointTrajectory& traj, const CoordinationConfig& config) {
    for (auto [k, limit] : config.step_limit)
        if (max_step_length(traj, k) > limit + config.eps_constraint) return false;
    return true;
}

struct SegmentOutcome {
    KeypointTrajectory traj;
    int iterations = 0;
};

SegmentOutcome optimize_segment(const PathBundle& bundle, const RobotModel& model, const Scene& scene,
                                const CoordinationConfig& config, std::vector<IterationLogRow>* log) {
    KeypointTrajectory traj =
        resample_bundle(bundle, model.keypoint_count(), config.waypoints_per_segment);

    double prev_feasible_length = std::numeric_limits<double>::quiet_NaN();
    KeypointTrajectory best = traj;
    double best_length = std::numeric_limits<double>::infinity();
    bool have_feasible = false;
    int iterations = 0;
    double residual = std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < config.max_outer_iters; ++iter) {
        KeypointTrajectory before = traj;
        traj = length_descent_step(traj, model, &scene, config);
        traj = velocity_project(traj, config);
        traj = distance_project(traj, model, config);

        double violation = max_violation(traj, model);
        double length = total_path_length(traj);
        residual = violation;

        bool changed = false;
        for (std::size_t t = 0; t < traj.states.size() && !changed; ++t)
            changed = state_distance(traj.states[t], before.states[t]) > 0.0;
        if (changed) ++iterations;
        if (log) log->push_back({iterations, violation, length});

        if (violation <= config.eps_constraint && velocity_satisfied(traj, config)) {
            if (length < best_length) {
                best_length = length;
                best = traj;
            }
            if (have_feasible && (prev_feasible_length - length) < config.eps_length) break;
            have_feasible = true;
            prev_feasible_length = length;
        }
        if (!changed) break;
    }

    if (!have_feasible)
        throw Error(Errc::non_convergence,
                    "coordination did not reach feasibility (residual " + std::to_string(residual) + ")");
    return {best, iterations};
}

// Dense per-pair validation over the coordinated trajectory: link sweeps at
// every consecutive pair plus interpolated self-crossing samples.
bool trajectory_valid(const KeypointTrajectory& traj, const RobotModel& model, const Scene& scene,
                      const CoordinationConfig& config, std::size_t* bad_index,
                      std::vector<std::pair<int, int>>* crossings) {
    SearchParams sp;
    sp.sweep_steps = config.validation_sweep_steps;
    sp.self_cross_samples = config.validation_self_cross_samples;
    for (std::size_t t = 0; t + 1 < traj.states.size(); ++t) {
        for (std::size_t li = 0; li < model.links().size(); ++li) {
            if (!sweep_check(static_cast<int>(li), traj.states[t], traj.states[t + 1], model, scene,
                             sp.sweep_steps)
                     .pass) {
                if (bad_index) *bad_index = t;
                if (crossings) crossings->clear();
                return false;
            }
        }
        auto crossing = self_crossing(traj.states[t], model);
        if (crossing.empty() && t + 2 == traj.states.size())
            crossing = self_crossing(traj.states[t + 1], model);
        if (!crossing.empty()) {
            if (bad_index) *bad_index = t;
            if (crossings) *crossings = crossing;
            return false;
        }
        // Interpolated self-crossing between consecutive waypoints.
        for (int s = 1; s < 4; ++s) {
            RobotState mid = interpolate_states(traj.states[t], traj.states[t + 1], s / 4.0);
            auto cr = self_crossing(mid, model);
            if (!cr.empty()) {
                if (bad_index) *bad_index = t;
                if (crossings) *crossings = cr;
                return false;
            }
        }
    }
    return true;
}

void coordinate_bundle(const PathBundle& bundle, const RobotModel& model, const Scene& scene,
                       const CoordinationConfig& config, int depth, CoordinationResult& result) {
    SegmentOutcome outcome = optimize_segment(bundle, model, scene, config, &result.log);
    result.outer_iterations = std::max(result.outer_iterations, outcome.iterations);

    std::size_t bad_index = 0;
    std::vector<std::pair<int, int>> crossings;
    if (trajectory_valid(outcome.traj, model, scene, config, &bad_index, &crossings)) {
        ++result.segments;
        bool skip_first = !result.trajectory.states.empty();
        for (std::size_t t = skip_first ? 1 : 0; t < outcome.traj.states.size(); ++t)
            result.trajectory.states.push_back(outcome.traj.states[t]);
        return;
    }

    if (depth >= config.max_subdivisions)
        throw Error(Errc::planning_failure, "coordination validation exceeded max subdivisions");

    // Insert an intermediate state at the failure and re-coordinate the two
    // halves as straight-line bundles.
    SearchParams sp;
    sp.sweep_steps = config.validation_sweep_steps;
    sp.self_cross_samples = config.validation_self_cross_samples;
    sp.max_subdivisions = config.max_subdivisions;
    const RobotState& a = bundle.from;
    const RobotState& b = bundle.to;
    RobotState mid;
    bool have_mid = false;
    if (!crossings.empty()) {
        mid = insert_unfolding_state(a, b, crossings, model, scene, sp);
        have_mid = true;
    } else {
        // Prefer a clean state already on the optimized trajectory near the
        // failure; fall back to a visibility detour of the failing keypoint.
        const auto& states = outcome.traj.states;
        for (std::size_t off = 0; off < states.size() && !have_mid; ++off) {
            for (long dir : {1L, -1L}) {
                long c = static_cast<long>(bad_index) + dir * static_cast<long>(off);
                if (c <= 0 || c + 1 >= static_cast<long>(states.size())) continue;
                const RobotState& cand = states[static_cast<std::size_t>(c)];
                if (constraint_violation(cand, model) > config.eps_constraint) continue;
                if (!robot_collides(cand, model, scene).empty()) continue;
                if (!self_crossing(cand, model).empty()) continue;
                if (state_distance(cand, a) <= 1e-9 || state_distance(cand, b) <= 1e-9) continue;
                mid = cand;
                have_mid = true;
                break;
            }
        }
        if (!have_mid) {
            mid = insert_visibility_state(a, b, model, scene, sp);
            have_mid = true;
        }
    }
    PathBundle first{a, mid, {}};
    PathBundle second{mid, b, {}};
    coordinate_bundle(first, model, scene, config, depth + 1, result);
    coordinate_bundle(second, model, scene, config, depth + 1, result);
}

} // namespace

CoordinationResult coordinate(const std::vector<PathBundle>& segments, const RobotModel& model,
                              const Scene& scene, const CoordinationConfig& config) {
    config.validate();
    if (segments.empty()) throw Error(Errc::bad_argument, "no segments to coordinate");
    for (const PathBundle& bundle : segments) {
        if (constraint_violation(bundle.from, model) > config.eps_constraint ||
            constraint_violation(bundle.to, model) > config.eps_constraint)
            throw Error(Errc::invalid_endpoint, "segment endpoints violate distance constraints");
    }
    CoordinationResult result;
    for (const PathBundle& bundle : segments)
        coordinate_bundle(bundle, model, scene, config, 0, result);
    return result;
}

std::vector<double> length_gradient(const KeypointTrajectory& traj) {
    const std::size_t n = traj.states.size();
    const std::size_t kpts = traj.states.front().positions.size();
    std::vector<double> g((n - 2) * kpts * 2, 0.0);
    auto idx = [&](std::size_t t, std::size_t k) { return ((t - 1) * kpts + k) * 2; };
    for (std::size_t k = 0; k < kpts; ++k) {
        for (std::size_t t = 1; t + 1 < n; ++t) {
            const Point& p = traj.states[t].positions[k];
            for (const Point& q : {traj.states[t - 1].positions[k], traj.states[t + 1].positions[k]}) {
                Vec2 d = p - q;
                double nd = norm(d);
                if (nd <= kEpsGeom) continue;
                g[idx(t, k)] += d.x / nd;
                g[idx(t, k) + 1] += d.y / nd;
            }
        }
    }
    return g;
}

namespace {

struct ConstraintRef {
    std::size_t t;
    Link link;
};

std::vector<ConstraintRef> interior_constraints(const KeypointTrajectory& traj, const RobotModel& model) {
    std::vector<ConstraintRef> out;
    for (std::size_t t = 1; t + 1 < traj.states.size(); ++t)
        for (const Link& l : model.links()) out.push_back({t, l});
    return out;
}

// 2x2 second-derivative block of ||p - q|| with respect to p: (I - uu^T)/d.
Eigen::Matrix2d pair_hessian_block(const Vec2& d) {
    double nd = norm(d);
    Eigen::Matrix2d h;
    double inv3 = 1.0 / (nd * nd * nd);
    h(0, 0) = d.y * d.y * inv3;
    h(1, 1) = d.x * d.x * inv3;
    h(0, 1) = h(1, 0) = -d.x * d.y * inv3;
    return h;
}

} // namespace

std::vector<double> estimate_multipliers(const KeypointTrajectory& traj, const RobotModel& model) {
    const std::size_t n = traj.states.size();
    const std::size_t kpts = traj.states.front().positions.size();
    const std::size_t dim = (n - 2) * kpts * 2;
    auto idx = [&](std::size_t t, std::size_t k) {
        return static_cast<Eigen::Index>(((t - 1) * kpts + k) * 2);
    };

    auto cons = interior_constraints(traj, model);
    Eigen::MatrixXd J(dim, cons.size());
    J.setZero();
    for (std::size_t c = 0; c < cons.size(); ++c) {
        const auto& [t, link] = cons[c];
        Vec2 d = traj.states[t].positions[static_cast<std::size_t>(link.a)] -
                 traj.states[t].positions[static_cast<std::size_t>(link.b)];
        double nd = norm(d);
        if (nd <= kEpsGeom) throw Error(Errc::singular_configuration, "degenerate link in trajectory");
        Vec2 u = d / nd;
        J(idx(t, static_cast<std::size_t>(link.a)), static_cast<Eigen::Index>(c)) += u.x;
        J(idx(t, static_cast<std::size_t>(link.a)) + 1, static_cast<Eigen::Index>(c)) += u.y;
        J(idx(t, static_cast<std::size_t>(link.b)), static_cast<Eigen::Index>(c)) -= u.x;
        J(idx(t, static_cast<std::size_t>(link.b)) + 1, static_cast<Eigen::Index>(c)) -= u.y;
    }
    auto g = length_gradient(traj);
    Eigen::VectorXd grad = Eigen::Map<Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(g.size()));
    Eigen::VectorXd lambda = J.colPivHouseholderQr().solve(-grad);
    return {lambda.data(), lambda.data() + lambda.size()};
}

HessianDiagnostic hessian_diagnostic(const KeypointTrajectory& traj, const RobotModel& model,
                                     const std::vector<double>* multipliers) {
    if (traj.states.size() < 3) throw Error(Errc::bad_argument, "trajectory too short for the diagnostic");
    const std::size_t n = traj.states.size();
    const std::size_t kpts = traj.states.front().positions.size();
    const std::size_t dim = (n - 2) * kpts * 2;
    auto idx = [&](std::size_t t, std::size_t k) -> Eigen::Index {
        return static_cast<Eigen::Index>(((t - 1) * kpts + k) * 2);
    };
    auto interior = [&](std::size_t t) { return t >= 1 && t + 1 < n; };

    // Degenerate links make the Hessian undefined.
    for (std::size_t t = 0; t < n; ++t)
        for (const Link& l : model.links()) {
            Vec2 d = traj.states[t].positions[static_cast<std::size_t>(l.a)] -
                     traj.states[t].positions[static_cast<std::size_t>(l.b)];
            if (norm(d) <= kEpsGeom)
                throw Error(Errc::singular_configuration, "degenerate link in trajectory");
        }

    std::vector<double> lambda = multipliers ? *multipliers : estimate_multipliers(traj, model);
    auto cons = interior_constraints(traj, model);
    if (lambda.size() != cons.size())
        throw Error(Errc::bad_argument, "multiplier count does not match constraints");

    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    HessianDiagnostic diag;

    auto add_pair = [&](std::size_t ta, std::size_t ka, std::size_t tb, std::size_t kb, const Vec2& d,
                        double weight) {
        if (norm(d) <= kEpsGeom) return;
        Eigen::Matrix2d h = pair_hessian_block(d) * weight;
        bool a_in = interior(ta), b_in = interior(tb);
        if (a_in) H.block<2, 2>(idx(ta, ka), idx(ta, ka)) += h;
        if (b_in) H.block<2, 2>(idx(tb, kb), idx(tb, kb)) += h;
        if (a_in && b_in) {
            H.block<2, 2>(idx(ta, ka), idx(tb, kb)) -= h;
            H.block<2, 2>(idx(tb, kb), idx(ta, ka)) -= h;
        }
    };

    // Objective: time-adjacent pairs per keypoint.
    for (std::size_t k = 0; k < kpts; ++k)
        for (std::size_t t = 0; t + 1 < n; ++t)
            add_pair(t, k, t + 1, k, traj.states[t].positions[k] - traj.states[t + 1].positions[k], 1.0);

    // Constraints: link pairs at interior time steps, weighted by multipliers.
    for (std::size_t c = 0; c < cons.size(); ++c) {
        const auto& [t, link] = cons[c];
        add_pair(t, static_cast<std::size_t>(link.a), t, static_cast<std::size_t>(link.b),
                 traj.states[t].positions[static_cast<std::size_t>(link.a)] -
                     traj.states[t].positions[static_cast<std::size_t>(link.b)],
                 lambda[c]);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
    diag.min_eigenvalue = solver.eigenvalues().minCoeff();
    diag.coordinate_count = static_cast<int>(dim);
    diag.constraint_count = static_cast<int>(cons.size());

    // Stationarity residual of the multiplier fit.
    {
        auto g = length_gradient(traj);
        Eigen::VectorXd grad = Eigen::Map<Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(g.size()));
        Eigen::VectorXd r = grad;
        for (std::size_t c = 0; c < cons.size(); ++c) {
            const auto& [t, link] = cons[c];
            Vec2 d = traj.states[t].positions[static_cast<std::size_t>(link.a)] -
                     traj.states[t].positions[static_cast<std::size_t>(link.b)];
            Vec2 u = normalized(d);
            r(idx(t, static_cast<std::size_t>(link.a))) += lambda[c] * u.x;
            r(idx(t, static_cast<std::size_t>(link.a)) + 1) += lambda[c] * u.y;
            r(idx(t, static_cast<std::size_t>(link.b))) -= lambda[c] * u.x;
            r(idx(t, static_cast<std::size_t>(link.b)) + 1) -= lambda[c] * u.y;
        }
        diag.stationarity_residual = r.norm();
    }

    // Block sign pattern (A/C diagonal blocks positive, B blocks negative).
    for (std::size_t k = 0; k < kpts; ++k) {
        for (std::size_t t = 1; t + 1 < n; ++t) {
            ++diag.diagonal_blocks_total;
            Eigen::Matrix2d blk = H.block<2, 2>(idx(t, k), idx(t, k));
            if (blk(0, 0) >= -1e-12 && blk(1, 1) >= -1e-12) ++diag.diagonal_blocks_positive;
        }
    }
    for (std::size_t k = 0; k < kpts; ++k) {
        for (std::size_t t = 1; t + 2 < n; ++t) {
            ++diag.coupling_blocks_total;
            Eigen::Matrix2d blk = H.block<2, 2>(idx(t, k), idx(t + 1, k));
            if (blk(0, 0) <= 1e-12 && blk(1, 1) <= 1e-12) ++diag.coupling_blocks_negative;
        }
    }
    return diag;
}

} // namespace wsplan
