#include "visibility.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

namespace wsplan {

namespace {

// Min signed clearance of a point against all obstacles (negative inside).
double point_obstacle_clearance(const Scene& scene, const Point& p) {
    double d = std::numeric_limits<double>::infinity();
    for (const Polygon& obs : scene.obstacles())
        d = std::min(d, point_polygon_signed_distance(p, obs));
    return d;
}

// Does any open sub-interval of the segment lie strictly inside the polygon?
bool segment_enters_interior(const Segment& s, const Polygon& poly) {
    std::vector<double> params{0.0, 1.0};
    Vec2 d = s.b - s.a;
    double len2 = norm_sq(d);
    for (std::size_t i = 0; i < poly.size(); ++i) {
        auto res = segment_intersect(s, poly.edge(i));
        if (res.kind == SegmentIntersection::Kind::point) {
            if (len2 > 0) params.push_back(std::clamp(dot(res.point - s.a, d) / len2, 0.0, 1.0));
        } else if (res.kind == SegmentIntersection::Kind::overlap) {
            if (len2 > 0) {
                params.push_back(std::clamp(dot(res.overlap.a - s.a, d) / len2, 0.0, 1.0));
                params.push_back(std::clamp(dot(res.overlap.b - s.a, d) / len2, 0.0, 1.0));
            }
        }
    }
    std::sort(params.begin(), params.end());
    for (std::size_t i = 0; i + 1 < params.size(); ++i) {
        if (params[i + 1] - params[i] <= 1e-12) continue;
        Point mid = s.a + d * (0.5 * (params[i] + params[i + 1]));
        if (point_in_polygon(mid, poly) == Containment::inside) return true;
    }
    return false;
}

} // namespace

VisibilityGraph::VisibilityGraph(const Scene& scene, double clearance)
    : scene_(scene), clearance_(clearance) {
    if (clearance < 0) throw Error(Errc::bad_argument, "clearance must be non-negative");

    for (std::size_t k = 0; k < scene.obstacle_count(); ++k) {
        const Polygon& poly = scene.obstacles()[k];
        const auto& v = poly.vertices();
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Point& prev = v[(i + v.size() - 1) % v.size()];
            const Point& cur = v[i];
            const Point& next = v[(i + 1) % v.size()];
            // Reflex vertices generate no nodes.
            if (cross(cur - prev, next - cur) <= kEpsGeom) continue;
            Point node = cur;
            if (clearance > 0) {
                Vec2 u1 = normalized(prev - cur);
                Vec2 u2 = normalized(next - cur);
                Vec2 exterior = normalized((u1 + u2) * -1.0);
                double cos_theta = std::clamp(dot(u1, u2), -1.0, 1.0);
                double sin_half = std::sqrt(std::max(0.0, (1.0 - cos_theta) / 2.0));
                if (sin_half <= kEpsGeom) continue;
                node = cur + exterior * (clearance / sin_half);
            }
            if (!scene.bounds().contains(node)) {
                warnings_.push_back("inflated node for obstacle " + std::to_string(k) + " vertex " +
                                    std::to_string(i) + " falls outside bounds; dropped");
                continue;
            }
            nodes_.push_back(node);
        }
    }

    edges_.assign(nodes_.size(), {});
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes_.size(); ++j) {
            if (edge_feasible(nodes_[i], nodes_[j])) {
                edges_[i].push_back(static_cast<int>(j));
                edges_[j].push_back(static_cast<int>(i));
            }
        }
    }
}

double VisibilityGraph::segment_clearance(const Segment& s) const {
    double best = std::numeric_limits<double>::infinity();
    for (const Polygon& obs : scene_.obstacles()) {
        if (segment_enters_interior(s, obs)) return -1.0;
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < obs.size(); ++i)
            d = std::min(d, segment_segment_distance(s, obs.edge(i)));
        best = std::min(best, d);
    }
    return best;
}

bool VisibilityGraph::edge_feasible(const Point& a, const Point& b) const {
    double c = segment_clearance({a, b});
    if (c < 0) return false;
    return c >= clearance_ - kEpsGeom;
}

std::vector<Point> VisibilityGraph::shortest_path(const Point& start, const Point& goal) const {
    return shortest_path_filtered(start, goal, [](const Segment&) { return true; });
}

std::vector<Point> VisibilityGraph::shortest_path_filtered(
    const Point& start, const Point& goal,
    const std::function<bool(const Segment&)>& admissible) const {
    for (const Point* p : {&start, &goal}) {
        if (point_obstacle_clearance(scene_, *p) < clearance_ - kEpsGeom)
            throw Error(Errc::invalid_endpoint, "path endpoint violates clearance");
        if (!scene_.bounds().contains(*p))
            throw Error(Errc::invalid_endpoint, "path endpoint outside bounds");
    }

    // Per-query overlay: shared nodes plus start (index n) and goal (n+1).
    const std::size_t n = nodes_.size();
    auto node_at = [&](std::size_t i) -> const Point& {
        if (i < n) return nodes_[i];
        return i == n ? start : goal;
    };
    auto connects = [&](std::size_t i, std::size_t j) {
        Segment s{node_at(i), node_at(j)};
        if (!admissible(s)) return false;
        if (i >= n || j >= n) return edge_feasible(s.a, s.b);
        // Shared edges were precomputed; re-test only the filter above.
        return std::binary_search(edges_[i].begin(), edges_[i].end(), static_cast<int>(j)) ||
               std::find(edges_[i].begin(), edges_[i].end(), static_cast<int>(j)) != edges_[i].end();
    };

    const std::size_t total = n + 2;
    const std::size_t src = n, dst = n + 1;
    std::vector<double> dist(total, std::numeric_limits<double>::infinity());
    std::vector<int> hops(total, 1 << 30);
    std::vector<int> prev(total, -1);
    using Item = std::tuple<double, int, std::size_t>; // (length, hops, node)
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[src] = 0.0;
    hops[src] = 0;
    heap.push({0.0, 0, src});

    auto relax = [&](std::size_t u, std::size_t v) {
        double w = distance(node_at(u), node_at(v));
        double nd = dist[u] + w;
        int nh = hops[u] + 1;
        bool better = nd < dist[v] - 1e-12;
        bool tie = std::abs(nd - dist[v]) <= 1e-12;
        if (better || (tie && nh < hops[v]) ||
            (tie && nh == hops[v] && prev[v] >= 0 && static_cast<int>(u) < prev[v])) {
            dist[v] = std::min(nd, dist[v]);
            hops[v] = nh;
            prev[v] = static_cast<int>(u);
            heap.push({nd, nh, v});
        }
    };

    while (!heap.empty()) {
        auto [d, h, u] = heap.top();
        heap.pop();
        if (d > dist[u] + 1e-12) continue;
        if (u == dst) break;
        if (u == src) {
            for (std::size_t v = 0; v < n; ++v)
                if (connects(src, v)) relax(src, v);
            if (connects(src, dst)) relax(src, dst);
        } else if (u < n) {
            for (int v : edges_[u]) {
                Segment s{node_at(u), node_at(static_cast<std::size_t>(v))};
                if (admissible(s)) relax(u, static_cast<std::size_t>(v));
            }
            if (connects(u, dst)) relax(u, dst);
        }
    }

    if (!std::isfinite(dist[dst]))
        throw Error(Errc::no_route, "no collision-free path between endpoints");
    std::vector<Point> path;
    for (int cur = static_cast<int>(dst); cur != -1; cur = prev[static_cast<std::size_t>(cur)])
        path.push_back(node_at(static_cast<std::size_t>(cur)));
    std::reverse(path.begin(), path.end());
    return path;
}

} // namespace wsplan
