#include "search.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace wsplan {

namespace {

bool keypoint_clear(const Point& p, double radius, const Scene& scene) {
    if (!scene.bounds().contains(p)) return false;
    for (const Polygon& obs : scene.obstacles())
        if (penetration_vector(DiskProbe{p, radius}, obs)) return false;
    return true;
}

// Disk + body rectangle of one oriented link placement.
bool placement_clear(const Point& parent, const Point& child, const Link& link,
                     const RobotModel& model, const Scene& scene) {
    if (!scene.bounds().contains(child)) return false;
    if (!keypoint_clear(child, model.radius(link.b), scene)) return false;
    RectProbe body{{parent, child}, link.width / 2};
    for (const Polygon& obs : scene.obstacles())
        if (penetration_vector(body, obs)) return false;
    return true;
}

Point adjust_root(const Point& target, double radius, const Scene& scene, const SearchParams& params) {
    Point p = target;
    for (int push = 0; push <= params.max_penetration_pushes; ++push) {
        if (keypoint_clear(p, radius, scene)) return p;
        if (push == params.max_penetration_pushes) break;
        bool moved = false;
        for (const Polygon& obs : scene.obstacles()) {
            if (auto mtv = penetration_vector(DiskProbe{p, radius}, obs)) {
                p += *mtv * (1.0 + 1e-9);
                moved = true;
                break;
            }
        }
        if (!moved) break; // outside bounds, not an obstacle overlap
    }
    throw Error(Errc::planning_failure, "base keypoint unadjustable at waypoint");
}

// Place a child keypoint at distance `length` from the parent, preferring
// direction `dir`; translation pushes first, then an alternating rotational
// sweep about the parent.
Point place_child(const Point& parent, Vec2 dir, const Link& link, const RobotModel& model,
                  const Scene& scene, const SearchParams& params) {
    if (norm(dir) <= kEpsGeom) dir = {1.0, 0.0};
    dir = normalized(dir);
    Point candidate = parent + dir * link.length;

    for (int push = 0; push < params.max_penetration_pushes; ++push) {
        if (placement_clear(parent, candidate, link, model, scene)) return candidate;
        Vec2 mtv;
        if (!link_collides(parent, candidate, link, model, scene, &mtv)) break;
        candidate += mtv * (1.0 + 1e-9);
        // Restore the exact link length after the push.
        Vec2 d = candidate - parent;
        if (norm(d) <= kEpsGeom) break;
        candidate = parent + normalized(d) * link.length;
    }
    if (placement_clear(parent, candidate, link, model, scene)) return candidate;

    for (int k = 1; k * 2 <= params.max_rotations; ++k) {
        for (double sign : {1.0, -1.0}) {
            Vec2 rotated_dir = rotated(dir, sign * k * params.delta_phi);
            Point cand = parent + rotated_dir * link.length;
            if (placement_clear(parent, cand, link, model, scene)) return cand;
        }
    }
    throw Error(Errc::planning_failure, "keypoint unadjustable (rotation sweep exhausted)");
}

std::size_t nearest_waypoint(const std::vector<Point>& path, const Point& p) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < path.size(); ++i) {
        double d = distance(path[i], p);
        if (d < best_d - kEpsGeom) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

std::vector<std::pair<int, int>> interpolated_self_crossings(const RobotState& a, const RobotState& b,
                                                             const RobotModel& model, int samples) {
    std::set<std::pair<int, int>> found;
    for (int i = 0; i <= samples; ++i) {
        RobotState st = interpolate_states(a, b, static_cast<double>(i) / samples);
        for (auto pair : self_crossing(st, model)) found.insert(pair);
    }
    return {found.begin(), found.end()};
}

// Chain of keypoints from the root to `tip` (inclusive), following BFS
// parent links.
std::vector<int> path_from_root(const RobotModel& model, int tip) {
    std::map<int, int> parent;
    for (const Link& l : model.bfs_links()) parent[l.b] = l.a;
    std::vector<int> chain{tip};
    while (chain.back() != model.root()) chain.push_back(parent.at(chain.back()));
    std::reverse(chain.begin(), chain.end());
    return chain;
}

double link_length_between(const RobotModel& model, int a, int b) {
    for (const Link& l : model.links())
        if ((l.a == a && l.b == b) || (l.a == b && l.b == a)) return l.length;
    throw Error(Errc::bad_argument, "no link between keypoints");
}

// BFS state construction: root placed (and adjusted) at targets[root], each
// child placed toward targets[child] from its parent's new position.
RobotState build_state_toward(const RobotState& targets, const RobotModel& model, const Scene& scene,
                              const SearchParams& params) {
    RobotState out;
    out.positions.assign(model.keypoint_count(), Point{});
    int root = model.root();
    out.positions[static_cast<std::size_t>(root)] =
        adjust_root(targets.positions[static_cast<std::size_t>(root)], model.radius(root), scene, params);
    for (const Link& l : model.bfs_links()) {
        const Point& parent_new = out.positions[static_cast<std::size_t>(l.a)];
        Vec2 dir = targets.positions[static_cast<std::size_t>(l.b)] - parent_new;
        out.positions[static_cast<std::size_t>(l.b)] =
            place_child(parent_new, dir, l, model, scene, params);
    }
    return out;
}

} // namespace

RobotState find_next_state(const RobotState& current, const std::vector<Point>& base_path,
                           const RobotModel& model, const Scene& scene, const SearchParams& params) {
    if (base_path.empty()) throw Error(Errc::bad_argument, "empty base path");
    const int root = model.root();
    const Point& cur_root = current.positions[static_cast<std::size_t>(root)];

    std::size_t at = nearest_waypoint(base_path, cur_root);
    std::size_t next = std::min(at + 1, base_path.size() - 1);

    RobotState out;
    out.positions.assign(model.keypoint_count(), Point{});
    out.positions[static_cast<std::size_t>(root)] =
        adjust_root(base_path[next], model.radius(root), scene, params);

    for (const Link& l : model.bfs_links()) {
        const Point& parent_new = out.positions[static_cast<std::size_t>(l.a)];
        // Direction from the parent's new position toward the child's
        // previous position; falls back to the previous link direction when
        // degenerate.
        Vec2 dir = current.positions[static_cast<std::size_t>(l.b)] - parent_new;
        if (norm(dir) <= kEpsGeom)
            dir = current.positions[static_cast<std::size_t>(l.b)] -
                  current.positions[static_cast<std::size_t>(l.a)];
        out.positions[static_cast<std::size_t>(l.b)] =
            place_child(parent_new, dir, l, model, scene, params);
    }
    return out;
}

bool interpolation_valid(const RobotState& a, const RobotState& b, const RobotModel& model,
                         const Scene& scene, const SearchParams& params) {
    for (std::size_t li = 0; li < model.links().size(); ++li) {
        if (!sweep_check(static_cast<int>(li), a, b, model, scene, params.sweep_steps).pass)
            return false;
    }
    return interpolated_self_crossings(a, b, model, params.self_cross_samples).empty();
}

RobotState insert_unfolding_state(const RobotState& a, const RobotState& b,
                                  const std::vector<std::pair<int, int>>& crossing,
                                  const RobotModel& model, const Scene& scene,
                                  const SearchParams& params) {
    if (state_distance(a, b) <= params.eps_state) return a;
    if (crossing.empty()) throw Error(Errc::bad_argument, "no crossing link pairs given");

    // Span of the crossing links along the chain from the root.
    int lo_link = crossing.front().first, hi_link = crossing.front().second;
    for (auto [i, j] : crossing) {
        lo_link = std::min({lo_link, i, j});
        hi_link = std::max({hi_link, i, j});
    }
    const Link& first = model.bfs_links()[static_cast<std::size_t>(lo_link)];
    const Link& last = model.bfs_links()[static_cast<std::size_t>(hi_link)];
    int proximal = first.a;
    int distal = last.b;

    RobotState mid_guess = interpolate_states(a, b, 0.5);
    const Point proximal_pos = mid_guess.positions[static_cast<std::size_t>(proximal)];
    Point distal_mid = (a.positions[static_cast<std::size_t>(distal)] +
                        b.positions[static_cast<std::size_t>(distal)]) *
                       0.5;
    Vec2 straighten = distal_mid - proximal_pos;
    if (norm(straighten) <= kEpsGeom) straighten = {1.0, 0.0};
    straighten = normalized(straighten);

    std::vector<int> chain = path_from_root(model, distal);
    auto chain_index = [&](int kp) {
        auto it = std::find(chain.begin(), chain.end(), kp);
        return it == chain.end() ? -1 : static_cast<int>(it - chain.begin());
    };
    int from = chain_index(proximal);
    if (from < 0) throw Error(Errc::bad_argument, "crossing links not on one root chain");

    for (int k = 0; k <= params.max_rotations; ++k) {
        for (double sign : {1.0, -1.0}) {
            if (k == 0 && sign < 0) continue;
            Vec2 dir = rotated(straighten, sign * k * params.delta_phi);
            // Targets: straightened sub-chain, mid-interpolated elsewhere.
            RobotState targets = mid_guess;
            Point cur = proximal_pos;
            for (std::size_t ci = static_cast<std::size_t>(from); ci + 1 < chain.size(); ++ci) {
                double l = link_length_between(model, chain[ci], chain[ci + 1]);
                cur += dir * l;
                targets.positions[static_cast<std::size_t>(chain[ci + 1])] = cur;
            }
            RobotState cand;
            try {
                cand = build_state_toward(targets, model, scene, params);
            } catch (const Error&) {
                continue;
            }
            if (!self_crossing(cand, model).empty()) continue;
            if (!robot_collides(cand, model, scene).empty()) continue;
            return cand;
        }
    }
    throw Error(Errc::planning_failure, "unfolding state search exhausted");
}

RobotState insert_visibility_state(const RobotState& a, const RobotState& b, const RobotModel& model,
                                   const Scene& scene, const SearchParams& params) {
    int fail_link = -1;
    double fail_t = 0.5;
    for (std::size_t li = 0; li < model.links().size(); ++li) {
        auto res = sweep_check(static_cast<int>(li), a, b, model, scene, params.sweep_steps);
        if (!res.pass) {
            fail_link = static_cast<int>(li);
            fail_t = res.first_failure_t;
            break;
        }
    }
    if (fail_link < 0) throw Error(Errc::planning_failure, "interpolation invalid without witness");
    int kp = model.bfs_links()[static_cast<std::size_t>(fail_link)].b;
    VisibilityGraph local(scene, model.radius(kp));
    std::vector<Point> detour = local.shortest_path(a.positions[static_cast<std::size_t>(kp)],
                                                    b.positions[static_cast<std::size_t>(kp)]);
    Point via = detour[detour.size() / 2];
    if (detour.size() == 2) via = (detour[0] + detour[1]) * 0.5;
    RobotState targets = interpolate_states(a, b, std::clamp(fail_t, 0.05, 0.95));
    targets.positions[static_cast<std::size_t>(kp)] = via;
    return build_state_toward(targets, model, scene, params);
}

namespace {

// Greedy prune: keep the farthest state reachable by a valid interpolation.
std::vector<RobotState> prune_states(const std::vector<RobotState>& states, const RobotModel& model,
                                     const Scene& scene, const SearchParams& params) {
    if (states.size() <= 2) return states;
    std::vector<RobotState> out{states.front()};
    std::size_t i = 0;
    while (i + 1 < states.size()) {
        std::size_t best = i + 1;
        for (std::size_t j = states.size() - 1; j > i; --j) {
            if (interpolation_valid(states[i], states[j], model, scene, params)) {
                best = j;
                break;
            }
        }
        out.push_back(states[best]);
        i = best;
    }
    return out;
}

void append_with_repair(std::vector<RobotState>& seq, const RobotState& next, const RobotModel& model,
                        const Scene& scene, const SearchParams& params, int depth) {
    const RobotState& prev = seq.back();
    if (state_distance(prev, next) <= params.eps_state) return;
    if (interpolation_valid(prev, next, model, scene, params)) {
        seq.push_back(next);
        return;
    }
    if (depth >= params.max_subdivisions)
        throw Error(Errc::planning_failure, "interpolation repair exceeded max subdivisions");

    auto crossings = interpolated_self_crossings(prev, next, model, params.self_cross_samples);
    RobotState mid;
    if (!crossings.empty()) {
        mid = insert_unfolding_state(prev, next, crossings, model, scene, params);
    } else {
        mid = insert_visibility_state(prev, next, model, scene, params);
    }
    if (state_distance(mid, prev) <= params.eps_state || state_distance(mid, next) <= params.eps_state)
        throw Error(Errc::planning_failure, "interpolation repair made no progress");
    append_with_repair(seq, mid, model, scene, params, depth + 1);
    append_with_repair(seq, next, model, scene, params, depth + 1);
}

// Largest per-link direction change between two states (radians).
double orientation_error(const RobotState& a, const RobotState& b, const RobotModel& model) {
    double worst = 0.0;
    for (const Link& l : model.links()) {
        Vec2 da = a.positions[static_cast<std::size_t>(l.b)] - a.positions[static_cast<std::size_t>(l.a)];
        Vec2 db = b.positions[static_cast<std::size_t>(l.b)] - b.positions[static_cast<std::size_t>(l.a)];
        double ang = std::atan2(std::abs(cross(da, db)), dot(da, db));
        worst = std::max(worst, ang);
    }
    return worst;
}

// In-place reorientation: interpolate every link direction by its shortest
// angular difference, rebuilding states from the root outward.
std::vector<RobotState> reorientation_states(const RobotState& from, const RobotState& goal,
                                             const RobotModel& model, const Scene& scene,
                                             const SearchParams& params) {
    double err = orientation_error(from, goal, model);
    int steps = std::max(1, static_cast<int>(std::ceil(err / (M_PI / 8))));
    std::vector<RobotState> out;
    for (int s = 1; s <= steps; ++s) {
        double t = static_cast<double>(s) / steps;
        RobotState targets = from;
        targets.positions[static_cast<std::size_t>(model.root())] =
            goal.positions[static_cast<std::size_t>(model.root())];
        for (const Link& l : model.bfs_links()) {
            Vec2 da = from.positions[static_cast<std::size_t>(l.b)] -
                      from.positions[static_cast<std::size_t>(l.a)];
            Vec2 dg = goal.positions[static_cast<std::size_t>(l.b)] -
                      goal.positions[static_cast<std::size_t>(l.a)];
            double a0 = std::atan2(da.y, da.x);
            double a1 = std::atan2(dg.y, dg.x);
            double diff = std::remainder(a1 - a0, 2 * M_PI);
            double ang = a0 + diff * t;
            targets.positions[static_cast<std::size_t>(l.b)] =
                targets.positions[static_cast<std::size_t>(l.a)] +
                Vec2{std::cos(ang), std::sin(ang)} * l.length;
        }
        out.push_back(build_state_toward(targets, model, scene, params));
    }
    return out;
}

} // namespace

std::vector<RobotState> plan_intermediate_states(const RobotState& start, const RobotState& goal,
                                                 const RobotModel& model, const Scene& scene,
                                                 const Decomposition& decomposition,
                                                 const SearchParams& params) {
    for (const RobotState* st : {&start, &goal}) {
        if (st->positions.size() != model.keypoint_count())
            throw Error(Errc::bad_argument, "state does not cover all model keypoints");
        if (constraint_violation(*st, model) > 1e-6)
            throw Error(Errc::invalid_endpoint, "endpoint state violates distance constraints");
        if (!robot_collides(*st, model, scene).empty())
            throw Error(Errc::invalid_endpoint, "endpoint state in collision");
        if (!self_crossing(*st, model).empty())
            throw Error(Errc::invalid_endpoint, "endpoint state self-crossing");
    }
    if (state_distance(start, goal) <= params.eps_state) return {start};
    if (interpolation_valid(start, goal, model, scene, params)) return {start, goal};

    const int root = model.root();
    const Point start_root = start.positions[static_cast<std::size_t>(root)];
    const Point goal_root = goal.positions[static_cast<std::size_t>(root)];
    int start_region = decomposition.locate_region(start_root);
    int goal_region = decomposition.locate_region(goal_root);
    if (start_region < 0 || goal_region < 0)
        throw Error(Errc::invalid_endpoint, "endpoint root outside free space");

    auto routes =
        region_routes_k_best(decomposition.graph, start_region, goal_region, params.k_best_routes);
    VisibilityGraph vis(scene, model.radius(root));

    std::string last_failure = "no routes";
    for (const auto& route : routes) {
        std::set<int> route_set(route.begin(), route.end());
        auto admissible = [&](const Segment& seg) {
            // Split by triangulation edges and require every piece midpoint
            // to locate inside the route's regions.
            std::vector<double> params_list{0.0, 1.0};
            Vec2 d = seg.b - seg.a;
            double len2 = norm_sq(d);
            if (len2 <= kEpsGeom * kEpsGeom) {
                int r = decomposition.locate_region(seg.a);
                return r >= 0 && route_set.count(r) > 0;
            }
            const auto& tri = decomposition.triangulation;
            for (const Triangle& t : tri.triangles()) {
                if (!t.free) continue;
                for (int j = 0; j < 3; ++j) {
                    Segment e{tri.vertices()[static_cast<std::size_t>(t.v[j])].p,
                              tri.vertices()[static_cast<std::size_t>(t.v[(j + 1) % 3])].p};
                    auto res = segment_intersect(seg, e);
                    if (res.kind == SegmentIntersection::Kind::point)
                        params_list.push_back(std::clamp(dot(res.point - seg.a, d) / len2, 0.0, 1.0));
                }
            }
            std::sort(params_list.begin(), params_list.end());
            for (std::size_t i = 0; i + 1 < params_list.size(); ++i) {
                if (params_list[i + 1] - params_list[i] <= 1e-9) continue;
                Point midp = seg.a + d * (0.5 * (params_list[i] + params_list[i + 1]));
                int r = decomposition.locate_region(midp);
                if (r < 0 || !route_set.count(r)) return false;
            }
            return true;
        };

        try {
            std::vector<Point> base_path = vis.shortest_path_filtered(start_root, goal_root, admissible);

            // Densify so one advance never exceeds the shortest link length.
            std::vector<Point> dense;
            double max_step = model.min_link_length();
            for (std::size_t i = 0; i + 1 < base_path.size(); ++i) {
                const Point& a = base_path[i];
                const Point& b = base_path[i + 1];
                int pieces = std::max(1, static_cast<int>(std::ceil(distance(a, b) / max_step)));
                for (int s = 0; s < pieces; ++s)
                    dense.push_back(a + (b - a) * (static_cast<double>(s) / pieces));
            }
            dense.push_back(base_path.back());

            std::vector<RobotState> states{start};
            RobotState cur = start;
            std::size_t guard = dense.size() * 4 + 16;
            while (distance(cur.positions[static_cast<std::size_t>(root)], dense.back()) >
                   params.eps_state) {
                RobotState next = find_next_state(cur, dense, model, scene, params);
                if (state_distance(next, cur) <= params.eps_state) break;
                states.push_back(next);
                cur = next;
                if (states.size() > guard)
                    throw Error(Errc::planning_failure, "state search did not reach the path end");
            }

            if (orientation_error(cur, goal, model) > M_PI / 2) {
                for (RobotState& st : reorientation_states(cur, goal, model, scene, params)) {
                    states.push_back(st);
                    cur = states.back();
                }
            }
            states.push_back(goal);

            states = prune_states(states, model, scene, params);

            std::vector<RobotState> repaired{states.front()};
            for (std::size_t i = 1; i < states.size(); ++i)
                append_with_repair(repaired, states[i], model, scene, params, 0);
            return repaired;
        } catch (const Error& e) {
            if (e.code() == Errc::invalid_endpoint) throw;
            last_failure = e.what();
        }
    }
    throw Error(Errc::planning_failure, "all topological routes exhausted: " + last_failure);
}

} // namespace wsplan
