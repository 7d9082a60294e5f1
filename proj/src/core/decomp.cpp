#include "decomp.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <queue>

namespace wsplan {

namespace {

std::vector<std::uint64_t> primes_up_to_count(std::size_t count) {
    std::vector<std::uint64_t> primes;
    std::uint64_t cand = 2;
    while (primes.size() < count) {
        bool is_prime = true;
        for (std::uint64_t p : primes) {
            if (p * p > cand) break;
            if (cand % p == 0) { is_prime = false; break; }
        }
        if (is_prime) primes.push_back(cand);
        ++cand;
    }
    return primes;
}

} // namespace

std::uint64_t godel_code(const std::set<int>& label) {
    if (label.empty()) return 1;
    int max_member = *label.rbegin();
    auto primes = primes_up_to_count(static_cast<std::size_t>(max_member + 2));
    std::uint64_t code = 1;
    for (int member : label) {
        std::uint64_t p = primes[static_cast<std::size_t>(member + 1)];
        if (code > std::numeric_limits<std::uint64_t>::max() / p)
            throw Error(Errc::validation, "godel code overflow for label");
        code *= p;
    }
    return code;
}

std::vector<std::set<int>> group_obstacles_by_hull(const Scene& scene) {
    const std::size_t m = scene.obstacle_count();
    std::vector<int> parent(m);
    for (std::size_t i = 0; i < m; ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
        return x;
    };

    std::vector<Polygon> hulls;
    hulls.reserve(m);
    for (const Polygon& obs : scene.obstacles()) hulls.push_back(convex_hull(obs.vertices()));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            if (polygons_intersect(hulls[i], hulls[j])) {
                int ri = find(static_cast<int>(i)), rj = find(static_cast<int>(j));
                if (ri != rj) parent[static_cast<std::size_t>(std::max(ri, rj))] = std::min(ri, rj);
            }
        }
    }
    std::vector<std::set<int>> groups(m);
    for (std::size_t i = 0; i < m; ++i) {
        int r = find(static_cast<int>(i));
        for (std::size_t j = 0; j < m; ++j)
            if (find(static_cast<int>(j)) == r) groups[i].insert(static_cast<int>(j));
    }
    return groups;
}

std::vector<FreeRegion> classify_regions(const Triangulation& tri, const Scene& scene) {
    auto groups = group_obstacles_by_hull(scene);
    auto group_rep = [&](int obstacle) { return *groups[static_cast<std::size_t>(obstacle)].begin(); };

    const auto free_tris = tri.free_triangle_indices();
    // Tag set per free triangle: union of vertex source tags, with obstacles
    // collapsed to their hull-group representative.
    std::map<int, std::set<int>> tri_tags;        // representative tags (for counting)
    std::map<int, std::set<int>> tri_label_tags;  // expanded original ids + boundary
    for (int t : free_tris) {
        std::set<int> reps, label;
        for (int j = 0; j < 3; ++j) {
            int vi = tri.triangles()[static_cast<std::size_t>(t)].v[j];
            for (int tag : tri.vertices()[static_cast<std::size_t>(vi)].tags) {
                if (tag == kBoundaryTag) {
                    reps.insert(kBoundaryTag);
                    label.insert(kBoundaryTag);
                } else {
                    reps.insert(group_rep(tag));
                    label.insert(groups[static_cast<std::size_t>(tag)].begin(),
                                 groups[static_cast<std::size_t>(tag)].end());
                }
            }
        }
        tri_tags[t] = std::move(reps);
        tri_label_tags[t] = std::move(label);
    }

    auto obstacle_tag_count = [&](const std::set<int>& tags) {
        return static_cast<int>(tags.size()) - (tags.count(kBoundaryTag) ? 1 : 0);
    };

    // Edge adjacency among free triangles.
    auto edge_neighbors = [&](int t) {
        std::vector<int> out;
        for (int j = 0; j < 3; ++j) {
            int n = tri.neighbor(t, j);
            if (n >= 0 && tri.triangles()[static_cast<std::size_t>(n)].free) out.push_back(n);
        }
        return out;
    };

    std::map<int, int> assigned; // triangle -> region id
    std::vector<FreeRegion> regions;

    // Junction triangles (tags from >= 3 obstacle groups) merge with adjacent
    // junction triangles into common regions.
    for (int t : free_tris) {
        if (assigned.count(t) || obstacle_tag_count(tri_tags[t]) < 3) continue;
        FreeRegion region;
        std::deque<int> queue{t};
        assigned[t] = static_cast<int>(regions.size());
        while (!queue.empty()) {
            int cur = queue.front();
            queue.pop_front();
            region.triangles.push_back(cur);
            region.label.insert(tri_label_tags[cur].begin(), tri_label_tags[cur].end());
            for (int n : edge_neighbors(cur)) {
                if (assigned.count(n) || obstacle_tag_count(tri_tags[n]) < 3) continue;
                assigned[n] = static_cast<int>(regions.size());
                queue.push_back(n);
            }
        }
        regions.push_back(std::move(region));
    }

    // Remaining triangles group by identical tag set and edge connectivity.
    for (int t : free_tris) {
        if (assigned.count(t)) continue;
        FreeRegion region;
        const std::set<int>& tags = tri_tags[t];
        std::deque<int> queue{t};
        assigned[t] = static_cast<int>(regions.size());
        while (!queue.empty()) {
            int cur = queue.front();
            queue.pop_front();
            region.triangles.push_back(cur);
            region.label.insert(tri_label_tags[cur].begin(), tri_label_tags[cur].end());
            for (int n : edge_neighbors(cur)) {
                if (assigned.count(n)) continue;
                if (tri_tags[n] != tags) continue;
                assigned[n] = static_cast<int>(regions.size());
                queue.push_back(n);
            }
        }
        regions.push_back(std::move(region));
    }

    for (FreeRegion& region : regions) {
        std::sort(region.triangles.begin(), region.triangles.end());
        region.code = godel_code(region.label);
        double area = 0.0;
        Vec2 c{0, 0};
        for (int t : region.triangles) {
            double a = tri.triangle_area(t);
            area += a;
            c += tri.triangle_centroid(t) * a;
        }
        region.area = area;
        region.centroid = area > 0 ? c / area : tri.triangle_centroid(region.triangles.front());
    }
    // Deterministic region ids: sort by smallest triangle index.
    std::sort(regions.begin(), regions.end(),
              [](const FreeRegion& a, const FreeRegion& b) { return a.triangles.front() < b.triangles.front(); });
    return regions;
}

RegionAdjacencyGraph build_adjacency(const Triangulation& tri, const std::vector<FreeRegion>& regions) {
    RegionAdjacencyGraph graph;
    graph.node_count = static_cast<int>(regions.size());
    std::map<int, int> region_of;
    for (std::size_t r = 0; r < regions.size(); ++r)
        for (int t : regions[r].triangles) region_of[t] = static_cast<int>(r);

    std::set<std::pair<int, int>> seen;
    for (std::size_t r = 0; r < regions.size(); ++r) {
        for (int t : regions[r].triangles) {
            for (int j = 0; j < 3; ++j) {
                int n = tri.neighbor(t, j);
                if (n < 0 || !tri.triangles()[static_cast<std::size_t>(n)].free) continue;
                int rn = region_of.at(n);
                if (rn == static_cast<int>(r)) continue;
                std::pair<int, int> key{std::min(static_cast<int>(r), rn), std::max(static_cast<int>(r), rn)};
                if (!seen.insert(key).second) continue;
                graph.edges.push_back({key.first, key.second,
                                       distance(regions[static_cast<std::size_t>(key.first)].centroid,
                                                regions[static_cast<std::size_t>(key.second)].centroid)});
            }
        }
    }
    std::sort(graph.edges.begin(), graph.edges.end(), [](const RegionEdge& a, const RegionEdge& b) {
        return a.a < b.a || (a.a == b.a && a.b < b.b);
    });
    return graph;
}

std::vector<std::vector<std::pair<int, double>>> RegionAdjacencyGraph::adjacency() const {
    std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(node_count));
    for (const RegionEdge& e : edges) {
        adj[static_cast<std::size_t>(e.a)].emplace_back(e.b, e.weight);
        adj[static_cast<std::size_t>(e.b)].emplace_back(e.a, e.weight);
    }
    return adj;
}

int RegionAdjacencyGraph::component_count() const {
    auto adj = adjacency();
    std::vector<bool> visited(static_cast<std::size_t>(node_count), false);
    int comps = 0;
    for (int s = 0; s < node_count; ++s) {
        if (visited[static_cast<std::size_t>(s)]) continue;
        ++comps;
        std::deque<int> queue{s};
        visited[static_cast<std::size_t>(s)] = true;
        while (!queue.empty()) {
            int cur = queue.front();
            queue.pop_front();
            for (auto [n, w] : adj[static_cast<std::size_t>(cur)]) {
                if (!visited[static_cast<std::size_t>(n)]) {
                    visited[static_cast<std::size_t>(n)] = true;
                    queue.push_back(n);
                }
            }
        }
    }
    return comps;
}

namespace {

// Dijkstra with banned nodes/edges; returns (path, weight) or empty path.
std::pair<std::vector<int>, double> dijkstra(const std::vector<std::vector<std::pair<int, double>>>& adj,
                                             int start, int goal, const std::set<int>& banned_nodes,
                                             const std::set<std::pair<int, int>>& banned_edges) {
    const std::size_t n = adj.size();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> prev(n, -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[static_cast<std::size_t>(start)] = 0;
    heap.push({0.0, start});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[static_cast<std::size_t>(u)]) continue;
        if (u == goal) break;
        for (auto [v, w] : adj[static_cast<std::size_t>(u)]) {
            if (banned_nodes.count(v)) continue;
            if (banned_edges.count({u, v}) || banned_edges.count({v, u})) continue;
            double nd = d + w;
            if (nd < dist[static_cast<std::size_t>(v)] - 1e-15) {
                dist[static_cast<std::size_t>(v)] = nd;
                prev[static_cast<std::size_t>(v)] = u;
                heap.push({nd, v});
            }
        }
    }
    if (!std::isfinite(dist[static_cast<std::size_t>(goal)])) return {{}, 0.0};
    std::vector<int> path;
    for (int cur = goal; cur != -1; cur = prev[static_cast<std::size_t>(cur)]) path.push_back(cur);
    std::reverse(path.begin(), path.end());
    return {path, dist[static_cast<std::size_t>(goal)]};
}

double path_weight(const std::vector<std::vector<std::pair<int, double>>>& adj, const std::vector<int>& path) {
    double w = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        for (auto [v, ew] : adj[static_cast<std::size_t>(path[i])]) {
            if (v == path[i + 1]) {
                w += ew;
                break;
            }
        }
    }
    return w;
}

} // namespace

std::vector<int> region_route(const RegionAdjacencyGraph& graph, int start_region, int goal_region) {
    if (start_region < 0 || start_region >= graph.node_count || goal_region < 0 ||
        goal_region >= graph.node_count)
        throw Error(Errc::bad_argument, "region id out of range");
    if (start_region == goal_region) return {start_region};
    auto [path, w] = dijkstra(graph.adjacency(), start_region, goal_region, {}, {});
    if (path.empty())
        throw Error(Errc::no_route, "regions " + std::to_string(start_region) + " and " +
                                        std::to_string(goal_region) + " are disconnected");
    return path;
}

std::vector<std::vector<int>> region_routes_k_best(const RegionAdjacencyGraph& graph, int start_region,
                                                   int goal_region, int k) {
    std::vector<std::vector<int>> result;
    if (k <= 0) return result;
    if (start_region == goal_region) {
        result.push_back({start_region});
        return result;
    }
    auto adj = graph.adjacency();
    auto [best, bw] = dijkstra(adj, start_region, goal_region, {}, {});
    if (best.empty()) throw Error(Errc::no_route, "regions disconnected");
    result.push_back(best);

    // Yen's algorithm over loopless paths.
    std::vector<std::pair<double, std::vector<int>>> candidates;
    while (static_cast<int>(result.size()) < k) {
        const std::vector<int>& last = result.back();
        for (std::size_t i = 0; i + 1 < last.size(); ++i) {
            std::vector<int> root(last.begin(), last.begin() + static_cast<std::ptrdiff_t>(i) + 1);
            std::set<std::pair<int, int>> banned_edges;
            for (const auto& p : result) {
                if (p.size() > i && std::equal(root.begin(), root.end(), p.begin()))
                    banned_edges.insert({p[i], p[i + 1]});
            }
            std::set<int> banned_nodes(root.begin(), root.end() - 1);
            auto [spur, sw] =
                dijkstra(adj, last[i], goal_region, banned_nodes, banned_edges);
            if (spur.empty()) continue;
            std::vector<int> total = root;
            total.insert(total.end(), spur.begin() + 1, spur.end());
            bool dup = false;
            for (const auto& [cw, cp] : candidates)
                if (cp == total) { dup = true; break; }
            for (const auto& p : result)
                if (p == total) { dup = true; break; }
            if (!dup) candidates.emplace_back(path_weight(adj, total), total);
        }
        if (candidates.empty()) break;
        auto it = std::min_element(candidates.begin(), candidates.end(),
                                   [](const auto& a, const auto& b) {
                                       if (a.first != b.first) return a.first < b.first;
                                       return a.second < b.second;
                                   });
        result.push_back(it->second);
        candidates.erase(it);
    }
    return result;
}

Decomposition::Decomposition(const Scene& scene) : triangulation(scene) {
    regions = classify_regions(triangulation, scene);
    graph = build_adjacency(triangulation, regions);
}

int Decomposition::locate_region(const Point& p) const {
    for (std::size_t r = 0; r < regions.size(); ++r)
        for (int t : regions[r].triangles)
            if (triangulation.point_in_triangle(p, t)) return static_cast<int>(r);
    return -1;
}

} // namespace wsplan
