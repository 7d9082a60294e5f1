#include "triangulation.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace wsplan {

namespace {

struct WorkTri {
    int a, b, c;
    bool alive = true;
};

// Sign of the incircle determinant with a floating-point error filter:
// +1 strictly inside the circumcircle of CCW (a,b,c), -1 strictly outside,
// 0 when within rounding of cocircular.
int incircle_sign(const Point& pa, const Point& pb, const Point& pc, const Point& pd) {
    double adx = pa.x - pd.x, ady = pa.y - pd.y;
    double bdx = pb.x - pd.x, bdy = pb.y - pd.y;
    double cdx = pc.x - pd.x, cdy = pc.y - pd.y;
    double ad = adx * adx + ady * ady;
    double bd = bdx * bdx + bdy * bdy;
    double cd = cdx * cdx + cdy * cdy;
    double det =
        adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
    double mag = std::abs(adx) * (std::abs(bdy) * cd + bd * std::abs(cdy)) +
                 std::abs(ady) * (std::abs(bdx) * cd + bd * std::abs(cdx)) +
                 ad * (std::abs(bdx) * std::abs(cdy) + std::abs(bdy) * std::abs(cdx));
    double bound = 1e-12 * mag;
    if (det > bound) return 1;
    if (det < -bound) return -1;
    return 0;
}

double orient(const Point& a, const Point& b, const Point& c) { return cross(b - a, c - a); }

struct EdgeKey {
    int u, v;
    EdgeKey(int a, int b) : u(std::min(a, b)), v(std::max(a, b)) {}
    bool operator<(const EdgeKey& o) const { return u < o.u || (u == o.u && v < o.v); }
};

class Builder {
  public:
    std::vector<Point> pts;
    std::vector<WorkTri> tris;
    std::set<EdgeKey> constrained;
    double scale = 1.0;

    void delaunay() {
        // Super-triangle comfortably enclosing all points.
        double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
        for (const Point& p : pts) {
            xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
        }
        double d = std::max(xmax - xmin, ymax - ymin);
        scale = std::max(1.0, d);
        double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
        n_real_ = static_cast<int>(pts.size());
        pts.push_back({cx - 20 * d - 1, cy - 10 * d - 1});
        pts.push_back({cx + 20 * d + 1, cy - 10 * d - 1});
        pts.push_back({cx, cy + 20 * d + 1});
        tris.push_back({n_real_, n_real_ + 1, n_real_ + 2});

        for (int i = 0; i < n_real_; ++i) insert_point(i);
    }

    // Drops super-triangle fans; call only after constraint enforcement so
    // the real hull (which may be concave against the supers) is pinned.
    void strip_super() {
        for (WorkTri& t : tris)
            if (t.alive && (t.a >= n_real_ || t.b >= n_real_ || t.c >= n_real_)) t.alive = false;
        compact();
    }

    void enforce_edge(int a, int b) {
        for (int guard = 0; guard < 10000; ++guard) {
            if (edge_exists(a, b)) {
                constrained.insert(EdgeKey(a, b));
                return;
            }
            auto crossing = find_crossing_edge(a, b);
            if (!crossing) {
                throw Error(Errc::validation, "cannot enforce constraint edge (geometry degenerate)");
            }
            auto [u, v] = *crossing;
            if (!flip_edge(u, v))
                throw Error(Errc::validation, "constraint edge blocked by unflippable configuration");
        }
        throw Error(Errc::validation, "constraint enforcement did not terminate");
    }

    void restore_delaunay() {
        for (int pass = 0; pass < 200; ++pass) {
            bool any = false;
            auto edges = collect_edges();
            for (const auto& [key, ts] : edges) {
                if (ts.size() != 2) continue;
                if (constrained.count(key)) continue;
                int t1 = ts[0], t2 = ts[1];
                if (!tris[t1].alive || !tris[t2].alive) continue;
                int p = opposite_vertex(t1, key.u, key.v);
                int q = opposite_vertex(t2, key.u, key.v);
                if (p < 0 || q < 0) continue;
                if (incircle_of(t1, pts[q]) > 0) {
                    if (flip_edge(key.u, key.v)) any = true;
                }
            }
            if (!any) return;
        }
    }

    int real_count() const { return n_real_; }

  private:
    int n_real_ = 0;

    double eps_area() const { return 1e-14 * scale * scale; }

    void insert_point(int pi) {
        const Point& p = pts[static_cast<std::size_t>(pi)];
        // Cavity: all alive triangles whose circumcircle strictly contains p.
        std::vector<int> bad;
        for (int ti = 0; ti < static_cast<int>(tris.size()); ++ti) {
            if (!tris[ti].alive) continue;
            if (incircle_of(ti, p) > 0) bad.push_back(ti);
        }
        if (bad.empty()) {
            // On or outside every circumcircle (degenerate); take containing triangle.
            for (int ti = 0; ti < static_cast<int>(tris.size()); ++ti) {
                if (!tris[ti].alive) continue;
                if (contains(ti, p)) { bad.push_back(ti); break; }
            }
            if (bad.empty()) throw Error(Errc::validation, "triangulation insertion failed");
        }
        std::map<EdgeKey, std::pair<int, int>> edge_count;
        for (int ti : bad) {
            const WorkTri& t = tris[ti];
            int vs[3] = {t.a, t.b, t.c};
            for (int j = 0; j < 3; ++j) {
                EdgeKey k(vs[j], vs[(j + 1) % 3]);
                auto it = edge_count.find(k);
                if (it == edge_count.end())
                    edge_count[k] = {vs[j], vs[(j + 1) % 3]};
                else
                    edge_count.erase(it);
            }
            tris[ti].alive = false;
        }
        for (const auto& [key, dir] : edge_count) {
            int u = dir.first, v = dir.second;
            double o = orient(pts[u], pts[v], p);
            if (std::abs(o) <= eps_area()) {
                continue;
            }
            if (o > 0)
                tris.push_back({u, v, pi});
            else
                tris.push_back({v, u, pi});
        }
    }

    bool contains(int ti, const Point& p) const {
        const WorkTri& t = tris[ti];
        double e = -1e-9 * scale;
        return orient(pts[t.a], pts[t.b], p) >= e && orient(pts[t.b], pts[t.c], p) >= e &&
               orient(pts[t.c], pts[t.a], p) >= e;
    }

    int incircle_of(int ti, const Point& p) const {
        const WorkTri& t = tris[ti];
        return incircle_sign(pts[t.a], pts[t.b], pts[t.c], p);
    }

    bool edge_exists(int a, int b) const {
        for (const WorkTri& t : tris) {
            if (!t.alive) continue;
            int vs[3] = {t.a, t.b, t.c};
            for (int j = 0; j < 3; ++j) {
                int u = vs[j], v = vs[(j + 1) % 3];
                if ((u == a && v == b) || (u == b && v == a)) return true;
            }
        }
        return false;
    }

    std::map<EdgeKey, std::vector<int>> collect_edges() const {
        std::map<EdgeKey, std::vector<int>> out;
        for (int ti = 0; ti < static_cast<int>(tris.size()); ++ti) {
            if (!tris[ti].alive) continue;
            int vs[3] = {tris[ti].a, tris[ti].b, tris[ti].c};
            for (int j = 0; j < 3; ++j) out[EdgeKey(vs[j], vs[(j + 1) % 3])].push_back(ti);
        }
        return out;
    }

    int opposite_vertex(int ti, int u, int v) const {
        int vs[3] = {tris[ti].a, tris[ti].b, tris[ti].c};
        for (int j = 0; j < 3; ++j)
            if (vs[j] != u && vs[j] != v) return vs[j];
        return -1;
    }

    // First triangulation edge properly crossing segment a-b whose endpoints
    // are not a or b.
    std::optional<std::pair<int, int>> find_crossing_edge(int a, int b) const {
        Segment sab{pts[a], pts[b]};
        for (const auto& [key, ts] : collect_edges()) {
            if (key.u == a || key.u == b || key.v == a || key.v == b) continue;
            Segment e{pts[key.u], pts[key.v]};
            if (segments_properly_cross(sab, e)) return std::make_pair(key.u, key.v);
        }
        return std::nullopt;
    }

    bool flip_edge(int u, int v) {
        auto edges = collect_edges();
        auto it = edges.find(EdgeKey(u, v));
        if (it == edges.end() || it->second.size() != 2) return false;
        int t1 = it->second[0], t2 = it->second[1];
        int p = opposite_vertex(t1, u, v);
        int q = opposite_vertex(t2, u, v);
        if (p < 0 || q < 0) return false;
        // Flippable only when the quad is strictly convex.
        if (!segments_properly_cross(Segment{pts[p], pts[q]}, Segment{pts[u], pts[v]})) return false;
        tris[t1].alive = false;
        tris[t2].alive = false;
        if (orient(pts[p], pts[u], pts[q]) > 0)
            tris.push_back({p, u, q});
        else
            tris.push_back({p, q, u});
        if (orient(pts[p], pts[v], pts[q]) > 0)
            tris.push_back({p, v, q});
        else
            tris.push_back({p, q, v});
        return true;
    }

    void compact() {
        std::vector<WorkTri> keep;
        for (const WorkTri& t : tris)
            if (t.alive) keep.push_back(t);
        tris = std::move(keep);
    }
};

} // namespace

Triangulation::Triangulation(const Scene& scene) {
    const Bounds& b = scene.bounds();

    for (std::size_t k = 0; k < scene.obstacle_count(); ++k) {
        for (const Point& p : scene.obstacles()[k].vertices()) {
            if (!b.strictly_contains(p))
                throw Error(Errc::validation,
                            "obstacle " + std::to_string(k) + " overlaps the bounds boundary");
        }
    }
    for (std::size_t i = 0; i < scene.obstacle_count(); ++i) {
        for (std::size_t j = i + 1; j < scene.obstacle_count(); ++j) {
            const Polygon& pi = scene.obstacles()[i];
            const Polygon& pj = scene.obstacles()[j];
            for (std::size_t e1 = 0; e1 < pi.size(); ++e1)
                for (std::size_t e2 = 0; e2 < pj.size(); ++e2)
                    if (segments_properly_cross(pi.edge(e1), pj.edge(e2)))
                        throw Error(Errc::validation, "obstacles " + std::to_string(i) + " and " +
                                                          std::to_string(j) + " overlap");
        }
    }

    // Gather vertices, merging coincident points and unioning their tags.
    auto add_vertex = [&](const Point& p, int tag) -> int {
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            if (distance(vertices_[i].p, p) <= kEpsGeom) {
                vertices_[i].tags.insert(tag);
                return static_cast<int>(i);
            }
        }
        vertices_.push_back({p, {tag}});
        return static_cast<int>(vertices_.size()) - 1;
    };

    std::vector<std::pair<int, int>> constraint_edges;
    int corner_idx[4];
    for (int c = 0; c < 4; ++c) corner_idx[c] = add_vertex(b.corner(c), kBoundaryTag);
    for (int c = 0; c < 4; ++c) constraint_edges.emplace_back(corner_idx[c], corner_idx[(c + 1) % 4]);

    for (std::size_t k = 0; k < scene.obstacle_count(); ++k) {
        const Polygon& poly = scene.obstacles()[k];
        std::vector<int> ids;
        for (const Point& p : poly.vertices()) ids.push_back(add_vertex(p, static_cast<int>(k)));
        for (std::size_t v = 0; v < ids.size(); ++v)
            constraint_edges.emplace_back(ids[v], ids[(v + 1) % ids.size()]);
    }

    Builder builder;
    for (const TriVertex& v : vertices_) builder.pts.push_back(v.p);
    builder.delaunay();
    for (auto [u, v] : constraint_edges) builder.enforce_edge(u, v);
    builder.strip_super();
    builder.restore_delaunay();

    for (const WorkTri& t : builder.tris) {
        if (!t.alive) continue;
        Triangle tri{{t.a, t.b, t.c}, true};
        Point c = (vertices_[static_cast<std::size_t>(t.a)].p + vertices_[static_cast<std::size_t>(t.b)].p +
                   vertices_[static_cast<std::size_t>(t.c)].p) /
                  3.0;
        for (const Polygon& obs : scene.obstacles()) {
            if (point_in_polygon(c, obs) == Containment::inside) {
                tri.free = false;
                break;
            }
        }
        triangles_.push_back(tri);
    }
    build_neighbors();
}

void Triangulation::build_neighbors() {
    neighbors_.assign(triangles_.size(), {-1, -1, -1});
    std::map<std::pair<int, int>, std::pair<int, int>> edge_owner; // sorted edge -> (tri, slot)
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        for (int j = 0; j < 3; ++j) {
            int u = triangles_[t].v[j], v = triangles_[t].v[(j + 1) % 3];
            std::pair<int, int> key{std::min(u, v), std::max(u, v)};
            auto it = edge_owner.find(key);
            if (it == edge_owner.end()) {
                edge_owner[key] = {static_cast<int>(t), j};
            } else {
                neighbors_[t][static_cast<std::size_t>(j)] = it->second.first;
                neighbors_[static_cast<std::size_t>(it->second.first)][static_cast<std::size_t>(it->second.second)] =
                    static_cast<int>(t);
            }
        }
    }
}

std::vector<int> Triangulation::free_triangle_indices() const {
    std::vector<int> out;
    for (std::size_t t = 0; t < triangles_.size(); ++t)
        if (triangles_[t].free) out.push_back(static_cast<int>(t));
    return out;
}

Point Triangulation::triangle_centroid(int t) const {
    const Triangle& tr = triangles_[static_cast<std::size_t>(t)];
    return (vertices_[static_cast<std::size_t>(tr.v[0])].p + vertices_[static_cast<std::size_t>(tr.v[1])].p +
            vertices_[static_cast<std::size_t>(tr.v[2])].p) /
           3.0;
}

double Triangulation::triangle_area(int t) const {
    const Triangle& tr = triangles_[static_cast<std::size_t>(t)];
    const Point& a = vertices_[static_cast<std::size_t>(tr.v[0])].p;
    const Point& b = vertices_[static_cast<std::size_t>(tr.v[1])].p;
    const Point& c = vertices_[static_cast<std::size_t>(tr.v[2])].p;
    return 0.5 * std::abs(cross(b - a, c - a));
}

double Triangulation::longest_edge(int t) const {
    const Triangle& tr = triangles_[static_cast<std::size_t>(t)];
    double best = 0.0;
    for (int j = 0; j < 3; ++j)
        best = std::max(best, distance(vertices_[static_cast<std::size_t>(tr.v[j])].p,
                                       vertices_[static_cast<std::size_t>(tr.v[(j + 1) % 3])].p));
    return best;
}

bool Triangulation::has_edge(int a, int b) const {
    for (const Triangle& t : triangles_) {
        for (int j = 0; j < 3; ++j) {
            int u = t.v[j], v = t.v[(j + 1) % 3];
            if ((u == a && v == b) || (u == b && v == a)) return true;
        }
    }
    return false;
}

int Triangulation::neighbor(int t, int j) const {
    return neighbors_[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)];
}

bool Triangulation::point_in_triangle(const Point& p, int t) const {
    const Triangle& tr = triangles_[static_cast<std::size_t>(t)];
    const Point& a = vertices_[static_cast<std::size_t>(tr.v[0])].p;
    const Point& b = vertices_[static_cast<std::size_t>(tr.v[1])].p;
    const Point& c = vertices_[static_cast<std::size_t>(tr.v[2])].p;
    double scale = std::max({1.0, norm(b - a), norm(c - b)});
    double e = -kEpsGeom * scale;
    return cross(b - a, p - a) >= e && cross(c - b, p - b) >= e && cross(a - c, p - c) >= e;
}

int Triangulation::locate_free(const Point& p) const {
    for (std::size_t t = 0; t < triangles_.size(); ++t)
        if (triangles_[t].free && point_in_triangle(p, static_cast<int>(t))) return static_cast<int>(t);
    return -1;
}

} // namespace wsplan
