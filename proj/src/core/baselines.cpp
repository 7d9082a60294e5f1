#include "baselines.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <set>

namespace wsplan {

namespace {

double wrap_angle(double a) { return std::remainder(a, 2.0 * M_PI); }

} // namespace

RobotState forward_kinematics(const ArmConfiguration& config, const RobotModel& model) {
    if (config.angles.size() != model.links().size())
        throw Error(Errc::bad_argument, "angle count must equal link count");
    RobotState st;
    st.positions.assign(model.keypoint_count(), config.base);
    // Cumulative angle along each root-to-leaf chain, in BFS order.
    std::vector<double> heading(model.keypoint_count(), 0.0);
    for (std::size_t li = 0; li < model.bfs_links().size(); ++li) {
        const Link& l = model.bfs_links()[li];
        double base_heading = (l.a == model.root()) ? 0.0 : heading[static_cast<std::size_t>(l.a)];
        double ang = (li == 0) ? config.angles[0] : base_heading + config.angles[li];
        heading[static_cast<std::size_t>(l.b)] = ang;
        st.positions[static_cast<std::size_t>(l.b)] =
            st.positions[static_cast<std::size_t>(l.a)] + Vec2{std::cos(ang), std::sin(ang)} * l.length;
    }
    return st;
}

double configuration_distance(const ArmConfiguration& a, const ArmConfiguration& b,
                              const RobotModel& model) {
    double reach = model.total_reach();
    double d2 = norm_sq(a.base - b.base);
    for (std::size_t i = 0; i < a.angles.size(); ++i) {
        double da = wrap_angle(a.angles[i] - b.angles[i]) * reach;
        d2 += da * da;
    }
    return std::sqrt(d2);
}

ArmConfiguration interpolate_configuration(const ArmConfiguration& a, const ArmConfiguration& b,
                                           double t) {
    ArmConfiguration out;
    out.base = a.base + (b.base - a.base) * t;
    out.angles.reserve(a.angles.size());
    for (std::size_t i = 0; i < a.angles.size(); ++i)
        out.angles.push_back(a.angles[i] + wrap_angle(b.angles[i] - a.angles[i]) * t);
    return out;
}

bool configuration_valid(const ArmConfiguration& config, const RobotModel& model, const Scene& scene) {
    RobotState st = forward_kinematics(config, model);
    for (const Point& p : st.positions)
        if (!scene.bounds().contains(p)) return false;
    if (!robot_collides(st, model, scene).empty()) return false;
    return self_crossing(st, model).empty();
}

namespace {

bool edge_valid(const ArmConfiguration& a, const ArmConfiguration& b, const RobotModel& model,
                const Scene& scene, int resolution) {
    for (int s = 1; s < resolution; ++s) {
        if (!configuration_valid(interpolate_configuration(a, b, static_cast<double>(s) / resolution),
                                 model, scene))
            return false;
    }
    return true;
}

ArmConfiguration sample_configuration(std::mt19937_64& rng, const Bounds& bounds, std::size_t angles) {
    std::uniform_real_distribution<double> ux(bounds.xmin, bounds.xmax);
    std::uniform_real_distribution<double> uy(bounds.ymin, bounds.ymax);
    std::uniform_real_distribution<double> ua(-M_PI, M_PI);
    ArmConfiguration c;
    c.base = {ux(rng), uy(rng)};
    c.angles.reserve(angles);
    for (std::size_t i = 0; i < angles; ++i) c.angles.push_back(ua(rng));
    return c;
}

double path_metric_length(const std::vector<ArmConfiguration>& path, const RobotModel& model) {
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        len += configuration_distance(path[i], path[i + 1], model);
    return len;
}

} // namespace

BaselineResult prm_plan(const ArmConfiguration& start, const ArmConfiguration& goal,
                        const RobotModel& model, const Scene& scene, const SamplerParams& params) {
    if (!configuration_valid(start, model, scene) || !configuration_valid(goal, model, scene))
        throw Error(Errc::invalid_endpoint, "start or goal configuration invalid");
    if (params.n_samples <= 0) throw Error(Errc::bad_argument, "n_samples must be positive");

    std::mt19937_64 rng(params.seed);
    std::vector<ArmConfiguration> nodes{start, goal};
    const int attempt_cap = params.n_samples * 200;
    int attempts = 0;
    while (static_cast<int>(nodes.size()) - 2 < params.n_samples && attempts < attempt_cap) {
        ++attempts;
        ArmConfiguration c = sample_configuration(rng, scene.bounds(), model.links().size());
        if (configuration_valid(c, model, scene)) nodes.push_back(c);
    }
    const int placed = static_cast<int>(nodes.size()) - 2;

    const std::size_t n = nodes.size();
    int k = params.k_neighbors;
    if (params.use_star_k) {
        double dim = 2.0 + static_cast<double>(model.links().size());
        k = static_cast<int>(std::ceil(std::exp(1.0) * (1.0 + 1.0 / dim) * std::log(static_cast<double>(n))));
    }
    k = std::max(1, std::min(k, static_cast<int>(n) - 1));

    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<double, int>> dists;
        dists.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            dists.emplace_back(configuration_distance(nodes[i], nodes[j], model), static_cast<int>(j));
        }
        std::sort(dists.begin(), dists.end());
        int connected = 0;
        for (const auto& [d, j] : dists) {
            if (connected >= k) break;
            bool already = false;
            for (const auto& [jj, dd] : adj[i])
                if (jj == j) already = true;
            if (already) {
                ++connected;
                continue;
            }
            if (edge_valid(nodes[i], nodes[static_cast<std::size_t>(j)], model, scene,
                           params.edge_check_resolution)) {
                adj[i].emplace_back(j, d);
                adj[static_cast<std::size_t>(j)].emplace_back(static_cast<int>(i), d);
            }
            ++connected;
        }
    }

    // Dijkstra start (0) -> goal (1).
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> prev(n, -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[0] = 0;
    heap.push({0.0, 0});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[static_cast<std::size_t>(u)]) continue;
        if (u == 1) break;
        for (auto [v, w] : adj[static_cast<std::size_t>(u)]) {
            if (d + w < dist[static_cast<std::size_t>(v)]) {
                dist[static_cast<std::size_t>(v)] = d + w;
                prev[static_cast<std::size_t>(v)] = u;
                heap.push({d + w, v});
            }
        }
    }

    BaselineResult result;
    result.stats.samples_placed = placed;
    {
        // Component count via union-find over roadmap edges.
        std::vector<int> parent(n);
        for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
        std::function<int(int)> find = [&](int x) {
            while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
            return x;
        };
        for (std::size_t i = 0; i < n; ++i)
            for (auto [j, w] : adj[i]) {
                int a = find(static_cast<int>(i)), b = find(j);
                if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
            }
        std::set<int> roots;
        for (std::size_t i = 0; i < n; ++i) roots.insert(find(static_cast<int>(i)));
        result.stats.components = static_cast<int>(roots.size());
    }
    if (std::isfinite(dist[1])) {
        for (int cur = 1; cur != -1; cur = prev[static_cast<std::size_t>(cur)])
            result.path.push_back(nodes[static_cast<std::size_t>(cur)]);
        std::reverse(result.path.begin(), result.path.end());
        result.stats.success = true;
        result.stats.path_length = path_metric_length(result.path, model);
    }
    return result;
}

BaselineResult rrt_plan(const ArmConfiguration& start, const ArmConfiguration& goal,
                        const RobotModel& model, const Scene& scene, const SamplerParams& params) {
    if (!configuration_valid(start, model, scene) || !configuration_valid(goal, model, scene))
        throw Error(Errc::invalid_endpoint, "start or goal configuration invalid");

    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<ArmConfiguration> nodes{start};
    std::vector<int> parent{-1};

    BaselineResult result;
    for (int expansion = 0; expansion < params.n_samples; ++expansion) {
        result.stats.samples_placed = expansion + 1;
        ArmConfiguration target = (coin(rng) < params.goal_bias)
                                      ? goal
                                      : sample_configuration(rng, scene.bounds(), model.links().size());
        std::size_t nearest = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            double d = configuration_distance(nodes[i], target, model);
            if (d < best) {
                best = d;
                nearest = i;
            }
        }
        double t = best > params.rrt_step ? params.rrt_step / best : 1.0;
        ArmConfiguration leaf = interpolate_configuration(nodes[nearest], target, t);
        if (!configuration_valid(leaf, model, scene)) continue;
        if (!edge_valid(nodes[nearest], leaf, model, scene, params.edge_check_resolution)) continue;
        nodes.push_back(leaf);
        parent.push_back(static_cast<int>(nearest));

        if (configuration_distance(leaf, goal, model) <= params.rrt_step &&
            edge_valid(leaf, goal, model, scene, params.edge_check_resolution)) {
            std::vector<ArmConfiguration> path{goal};
            for (int cur = static_cast<int>(nodes.size()) - 1; cur != -1;
                 cur = parent[static_cast<std::size_t>(cur)])
                path.push_back(nodes[static_cast<std::size_t>(cur)]);
            std::reverse(path.begin(), path.end());
            result.path = std::move(path);
            result.stats.success = true;
            result.stats.path_length = path_metric_length(result.path, model);
            return result;
        }
    }
    return result;
}

WorkspaceLengths workspace_path_lengths(const std::vector<ArmConfiguration>& path,
                                        const RobotModel& model, int samples_per_edge) {
    WorkspaceLengths out;
    if (path.size() < 2) return out;
    std::vector<double> per_keypoint(model.keypoint_count(), 0.0);
    RobotState prev = forward_kinematics(path[0], model);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        for (int s = 1; s <= samples_per_edge; ++s) {
            RobotState cur = forward_kinematics(
                interpolate_configuration(path[i], path[i + 1],
                                          static_cast<double>(s) / samples_per_edge),
                model);
            for (std::size_t k = 0; k < per_keypoint.size(); ++k)
                per_keypoint[k] += distance(prev.positions[k], cur.positions[k]);
            prev = cur;
        }
    }
    for (double len : per_keypoint) {
        out.sum += len;
        out.max_single = std::max(out.max_single, len);
    }
    return out;
}

} // namespace wsplan
