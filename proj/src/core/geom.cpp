#include "geom.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wsplan {

double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
double norm(const Vec2& v) { return std::hypot(v.x, v.y); }
double norm_sq(const Vec2& v) { return v.x * v.x + v.y * v.y; }
double distance(const Point& a, const Point& b) { return norm(b - a); }
Vec2 perp(const Vec2& v) { return {-v.y, v.x}; }

Vec2 normalized(const Vec2& v) {
    double n = norm(v);
    if (n <= 0.0) return {0.0, 0.0};
    return v / n;
}

Vec2 rotated(const Vec2& v, double angle) {
    double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

bool finite(const Vec2& v) { return std::isfinite(v.x) && std::isfinite(v.y); }

namespace {

// Orientation of c relative to the directed line a->b: +1 left, -1 right,
// 0 within kEpsGeom of the line (scaled by segment length).
int orientation(const Point& a, const Point& b, const Point& c) {
    double d = cross(b - a, c - a);
    double scale = std::max(1.0, norm(b - a));
    if (d > kEpsGeom * scale) return 1;
    if (d < -kEpsGeom * scale) return -1;
    return 0;
}

bool on_segment_collinear(const Point& p, const Segment& s) {
    return std::min(s.a.x, s.b.x) - kEpsGeom <= p.x && p.x <= std::max(s.a.x, s.b.x) + kEpsGeom &&
           std::min(s.a.y, s.b.y) - kEpsGeom <= p.y && p.y <= std::max(s.a.y, s.b.y) + kEpsGeom;
}

double polar_angle(const Vec2& v) {
    double a = std::atan2(v.y, v.x);
    if (a < 0) a += 2.0 * std::acos(-1.0);
    return a;
}

} // namespace

double signed_area(const std::vector<Point>& verts) {
    double a = 0.0;
    for (std::size_t i = 0; i < verts.size(); ++i) {
        const Point& p = verts[i];
        const Point& q = verts[(i + 1) % verts.size()];
        a += cross(p, q);
    }
    return 0.5 * a;
}

bool is_simple_polyline_loop(const std::vector<Point>& verts) {
    const std::size_t n = verts.size();
    for (std::size_t i = 0; i < n; ++i) {
        Segment si{verts[i], verts[(i + 1) % n]};
        for (std::size_t j = i + 1; j < n; ++j) {
            Segment sj{verts[j], verts[(j + 1) % n]};
            bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            auto res = segment_intersect(si, sj);
            if (res.kind == SegmentIntersection::Kind::none) continue;
            if (res.kind == SegmentIntersection::Kind::overlap) return false;
            if (!adjacent) return false;
            // Adjacent edges may only share their common endpoint.
            const Point& shared = (j == i + 1) ? verts[j] : verts[i];
            if (distance(res.point, shared) > kEpsGeom) return false;
        }
    }
    return true;
}

Polygon::Polygon(std::vector<Point> vertices) : verts_(std::move(vertices)) {
    if (verts_.size() < 3) throw Error(Errc::validation, "polygon needs at least 3 vertices");
    for (const Point& p : verts_)
        if (!finite(p)) throw Error(Errc::validation, "polygon vertex not finite");
    for (std::size_t i = 0; i < verts_.size(); ++i) {
        if (distance(verts_[i], verts_[(i + 1) % verts_.size()]) <= kEpsGeom)
            throw Error(Errc::validation, "polygon has repeated consecutive vertices");
    }
    if (!is_simple_polyline_loop(verts_)) throw Error(Errc::validation, "polygon not simple");
    if (signed_area(verts_) <= 0.0) throw Error(Errc::validation, "polygon not counter-clockwise");
}

double Polygon::area() const { return signed_area(verts_); }

Point Polygon::centroid() const {
    double a = 0.0;
    Vec2 c{0.0, 0.0};
    for (std::size_t i = 0; i < verts_.size(); ++i) {
        const Point& p = verts_[i];
        const Point& q = verts_[(i + 1) % verts_.size()];
        double w = cross(p, q);
        a += w;
        c += (p + q) * w;
    }
    return c / (3.0 * a);
}

bool Polygon::is_convex() const {
    for (std::size_t i = 0; i < verts_.size(); ++i) {
        const Point& a = verts_[i];
        const Point& b = verts_[(i + 1) % verts_.size()];
        const Point& c = verts_[(i + 2) % verts_.size()];
        if (cross(b - a, c - b) < -kEpsGeom) return false;
    }
    return true;
}

SegmentIntersection segment_intersect(const Segment& s1, const Segment& s2) {
    SegmentIntersection out;
    const Vec2 d1 = s1.b - s1.a;
    const Vec2 d2 = s2.b - s2.a;
    const double denom = cross(d1, d2);

    int o1 = orientation(s1.a, s1.b, s2.a);
    int o2 = orientation(s1.a, s1.b, s2.b);
    int o3 = orientation(s2.a, s2.b, s1.a);
    int o4 = orientation(s2.a, s2.b, s1.b);

    // Degenerate segments reduce to point containment.
    if (norm(d1) <= kEpsGeom && norm(d2) <= kEpsGeom) {
        if (distance(s1.a, s2.a) <= kEpsGeom) {
            out.kind = SegmentIntersection::Kind::point;
            out.point = s1.a;
        }
        return out;
    }
    if (norm(d1) <= kEpsGeom) {
        if (orientation(s2.a, s2.b, s1.a) == 0 && on_segment_collinear(s1.a, s2)) {
            out.kind = SegmentIntersection::Kind::point;
            out.point = s1.a;
        }
        return out;
    }
    if (norm(d2) <= kEpsGeom) {
        if (orientation(s1.a, s1.b, s2.a) == 0 && on_segment_collinear(s2.a, s1)) {
            out.kind = SegmentIntersection::Kind::point;
            out.point = s2.a;
        }
        return out;
    }

    if (o1 == 0 && o2 == 0 && o3 == 0 && o4 == 0) {
        // Collinear: compute overlap interval along s1's direction.
        Vec2 u = normalized(d1);
        double t1a = 0.0, t1b = dot(d1, u);
        double t2a = dot(s2.a - s1.a, u), t2b = dot(s2.b - s1.a, u);
        if (t2a > t2b) std::swap(t2a, t2b);
        double lo = std::max(t1a, t2a), hi = std::min(t1b, t2b);
        if (hi < lo - kEpsGeom) return out;
        Point plo = s1.a + u * lo;
        Point phi = s1.a + u * hi;
        if (hi - lo <= kEpsGeom) {
            out.kind = SegmentIntersection::Kind::point;
            out.point = plo;
        } else {
            out.kind = SegmentIntersection::Kind::overlap;
            out.overlap = {plo, phi};
        }
        return out;
    }

    if (o1 != o2 && o3 != o4 && std::abs(denom) > kEpsGeom * std::max(1.0, norm(d1) * norm(d2))) {
        double t = cross(s2.a - s1.a, d2) / denom;
        t = std::clamp(t, 0.0, 1.0);
        out.kind = SegmentIntersection::Kind::point;
        out.point = s1.a + d1 * t;
        return out;
    }

    // Endpoint touching one segment's interior or endpoint.
    if (o1 == 0 && on_segment_collinear(s2.a, s1)) {
        out.kind = SegmentIntersection::Kind::point;
        out.point = s2.a;
        return out;
    }
    if (o2 == 0 && on_segment_collinear(s2.b, s1)) {
        out.kind = SegmentIntersection::Kind::point;
        out.point = s2.b;
        return out;
    }
    if (o3 == 0 && on_segment_collinear(s1.a, s2)) {
        out.kind = SegmentIntersection::Kind::point;
        out.point = s1.a;
        return out;
    }
    if (o4 == 0 && on_segment_collinear(s1.b, s2)) {
        out.kind = SegmentIntersection::Kind::point;
        out.point = s1.b;
        return out;
    }
    return out;
}

bool segments_touch(const Segment& s1, const Segment& s2) {
    return segment_intersect(s1, s2).kind != SegmentIntersection::Kind::none;
}

bool segments_properly_cross(const Segment& s1, const Segment& s2) {
    int o1 = orientation(s1.a, s1.b, s2.a);
    int o2 = orientation(s1.a, s1.b, s2.b);
    int o3 = orientation(s2.a, s2.b, s1.a);
    int o4 = orientation(s2.a, s2.b, s1.b);
    return o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 && o1 != o2 && o3 != o4;
}

Containment point_in_polygon(const Point& p, const Polygon& poly) {
    if (point_polygon_boundary_distance(p, poly) <= kEpsGeom) return Containment::boundary;
    // Even-odd ray cast; boundary contact already classified above.
    bool inside = false;
    const auto& v = poly.vertices();
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        if ((v[i].y > p.y) != (v[j].y > p.y)) {
            double xi = v[j].x + (v[i].x - v[j].x) * (p.y - v[j].y) / (v[i].y - v[j].y);
            if (p.x < xi) inside = !inside;
        }
    }
    return inside ? Containment::inside : Containment::outside;
}

Polygon convex_hull(const std::vector<Point>& points) {
    std::vector<Point> pts = points;
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Point& a, const Point& b) { return distance(a, b) <= kEpsGeom; }),
              pts.end());
    if (pts.size() < 3) throw Error(Errc::degenerate_input, "convex hull needs at least 3 distinct points");

    auto build = [&](auto begin, auto end) {
        std::vector<Point> chain;
        for (auto it = begin; it != end; ++it) {
            while (chain.size() >= 2 &&
                   cross(chain.back() - chain[chain.size() - 2], *it - chain.back()) <= kEpsGeom)
                chain.pop_back();
            chain.push_back(*it);
        }
        return chain;
    };
    std::vector<Point> lower = build(pts.begin(), pts.end());
    std::vector<Point> upper = build(pts.rbegin(), pts.rend());
    lower.pop_back();
    upper.pop_back();
    lower.insert(lower.end(), upper.begin(), upper.end());
    if (lower.size() < 3) throw Error(Errc::degenerate_input, "convex hull input is collinear");
    return Polygon(lower);
}

Point closest_point_on_segment(const Point& p, const Segment& s) {
    Vec2 d = s.b - s.a;
    double len2 = norm_sq(d);
    if (len2 <= 0.0) return s.a;
    double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
    return s.a + d * t;
}

double point_segment_distance(const Point& p, const Segment& s) {
    return distance(p, closest_point_on_segment(p, s));
}

double segment_segment_distance(const Segment& a, const Segment& b) {
    if (segments_touch(a, b)) return 0.0;
    double d = point_segment_distance(a.a, b);
    d = std::min(d, point_segment_distance(a.b, b));
    d = std::min(d, point_segment_distance(b.a, a));
    d = std::min(d, point_segment_distance(b.b, a));
    return d;
}

double point_polygon_boundary_distance(const Point& p, const Polygon& poly) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i)
        best = std::min(best, point_segment_distance(p, poly.edge(i)));
    return best;
}

double point_polygon_signed_distance(const Point& p, const Polygon& poly) {
    double d = point_polygon_boundary_distance(p, poly);
    Containment c = point_in_polygon(p, poly);
    if (c == Containment::inside) return -d;
    if (c == Containment::boundary) return 0.0;
    return d;
}

namespace {

// Outward normal of the polygon edge (CCW polygon => outward is -perp(dir)).
Vec2 outward_edge_normal(const Segment& e) {
    return normalized(Vec2{e.b.y - e.a.y, e.a.x - e.b.x});
}

struct DirectionCandidate {
    Vec2 dir;
    double dist;
};

// Nearest boundary feature direction with polar-angle tie-breaking.
DirectionCandidate nearest_escape_direction(const Point& p, const Polygon& poly, bool push_outward) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i)
        best = std::min(best, point_segment_distance(p, poly.edge(i)));

    Vec2 best_dir{0, 0};
    double best_angle = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i) {
        Segment e = poly.edge(i);
        double d = point_segment_distance(p, e);
        if (d > best + kEpsGeom) continue;
        Point q = closest_point_on_segment(p, e);
        Vec2 dir;
        if (d <= kEpsGeom) {
            dir = outward_edge_normal(e);
        } else if (push_outward) {
            dir = normalized(q - p); // inside: toward boundary, through it
        } else {
            dir = normalized(p - q); // outside: away from boundary
        }
        double ang = polar_angle(dir);
        if (ang < best_angle) {
            best_angle = ang;
            best_dir = dir;
        }
    }
    return {best_dir, best};
}

} // namespace

std::optional<Vec2> penetration_vector(const DiskProbe& probe, const Polygon& poly) {
    Containment c = point_in_polygon(probe.center, poly);
    if (c == Containment::outside) {
        double d = point_polygon_boundary_distance(probe.center, poly);
        if (d >= probe.radius) return std::nullopt;
        auto cand = nearest_escape_direction(probe.center, poly, false);
        return cand.dir * (probe.radius - cand.dist);
    }
    if (c == Containment::boundary) {
        auto cand = nearest_escape_direction(probe.center, poly, true);
        return cand.dir * probe.radius;
    }
    auto cand = nearest_escape_direction(probe.center, poly, true);
    return cand.dir * (cand.dist + probe.radius);
}

std::vector<Point> rect_probe_corners(const RectProbe& probe) {
    Vec2 d = probe.spine.b - probe.spine.a;
    if (norm(d) <= kEpsGeom) return {};
    Vec2 n = perp(normalized(d)) * probe.half_width;
    return {probe.spine.a - n, probe.spine.b - n, probe.spine.b + n, probe.spine.a + n};
}

namespace {

bool point_strictly_in_convex(const Point& p, const std::vector<Point>& verts) {
    for (std::size_t i = 0; i < verts.size(); ++i) {
        const Point& a = verts[i];
        const Point& b = verts[(i + 1) % verts.size()];
        if (cross(b - a, p - a) <= kEpsGeom * std::max(1.0, norm(b - a))) return false;
    }
    return true;
}

bool rect_intersects_polygon(const std::vector<Point>& rect, const Polygon& poly) {
    for (const Point& p : rect)
        if (point_in_polygon(p, poly) == Containment::inside) return true;
    for (const Point& v : poly.vertices())
        if (point_strictly_in_convex(v, rect)) return true;
    for (std::size_t i = 0; i < rect.size(); ++i) {
        Segment re{rect[i], rect[(i + 1) % rect.size()]};
        for (std::size_t j = 0; j < poly.size(); ++j)
            if (segments_properly_cross(re, poly.edge(j))) return true;
    }
    return false;
}

struct Interval {
    double lo, hi;
};

Interval project(const std::vector<Point>& pts, const Vec2& axis) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Point& p : pts) {
        double t = dot(p, axis);
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    return {lo, hi};
}

// SAT minimum translation of `a` away from convex `b`; nullopt if separated.
std::optional<Vec2> sat_mtv(const std::vector<Point>& a, const std::vector<Point>& b) {
    std::vector<Vec2> axes;
    auto add_axes = [&](const std::vector<Point>& poly) {
        for (std::size_t i = 0; i < poly.size(); ++i) {
            Vec2 e = poly[(i + 1) % poly.size()] - poly[i];
            if (norm(e) <= kEpsGeom) continue;
            axes.push_back(normalized(perp(e)));
        }
    };
    add_axes(a);
    add_axes(b);
    if (axes.empty()) return std::nullopt;

    double best = std::numeric_limits<double>::infinity();
    Vec2 best_axis{0, 0};
    for (const Vec2& axis : axes) {
        Interval ia = project(a, axis);
        Interval ib = project(b, axis);
        if (ia.hi < ib.lo || ib.hi < ia.lo) return std::nullopt;
        // Escape distance along +axis / -axis; covers containment.
        double t_pos = ib.hi - ia.lo;
        double t_neg = ia.hi - ib.lo;
        double t = std::min(t_pos, t_neg);
        if (t < best) {
            best = t;
            best_axis = (t_pos < t_neg) ? axis : axis * -1.0;
        }
    }
    return best_axis * best;
}

} // namespace

std::vector<std::array<Point, 3>> ear_clip(const Polygon& poly) {
    std::vector<Point> v = poly.vertices();
    std::vector<std::array<Point, 3>> tris;
    while (v.size() > 3) {
        bool clipped = false;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Point& a = v[(i + v.size() - 1) % v.size()];
            const Point& b = v[i];
            const Point& c = v[(i + 1) % v.size()];
            double turn = cross(b - a, c - b);
            if (turn < -kEpsGeom) continue;
            bool ear = true;
            for (std::size_t j = 0; j < v.size() && ear; ++j) {
                if (j == i || j == (i + v.size() - 1) % v.size() || j == (i + 1) % v.size()) continue;
                if (turn <= kEpsGeom) break; // degenerate ear, clip without test
                const Point& p = v[j];
                if (cross(b - a, p - a) >= 0 && cross(c - b, p - b) >= 0 && cross(a - c, p - c) >= 0)
                    ear = false;
            }
            if (!ear) continue;
            if (turn > kEpsGeom) tris.push_back({a, b, c});
            v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
            clipped = true;
            break;
        }
        if (!clipped) {
            // Numerical fallback: clip the widest corner.
            std::size_t best = 0;
            double best_turn = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < v.size(); ++i) {
                const Point& a = v[(i + v.size() - 1) % v.size()];
                const Point& b = v[i];
                const Point& c = v[(i + 1) % v.size()];
                double t = cross(b - a, c - b);
                if (t > best_turn) {
                    best_turn = t;
                    best = i;
                }
            }
            const Point& a = v[(best + v.size() - 1) % v.size()];
            const Point& b = v[best];
            const Point& c = v[(best + 1) % v.size()];
            tris.push_back({a, b, c});
            v.erase(v.begin() + static_cast<std::ptrdiff_t>(best));
        }
    }
    tris.push_back({v[0], v[1], v[2]});
    return tris;
}

std::optional<Vec2> penetration_vector(const RectProbe& probe, const Polygon& poly) {
    std::vector<Point> rect = rect_probe_corners(probe);
    if (rect.empty()) {
        // Degenerate spine: fall back to a disk of radius half_width.
        return penetration_vector(DiskProbe{probe.spine.a, probe.half_width}, poly);
    }
    if (!rect_intersects_polygon(rect, poly)) return std::nullopt;

    std::vector<Vec2> candidates;
    if (poly.is_convex()) {
        if (auto mtv = sat_mtv(rect, poly.vertices())) candidates.push_back(*mtv);
    } else {
        for (const auto& tri : ear_clip(poly)) {
            std::vector<Point> tv(tri.begin(), tri.end());
            if (auto mtv = sat_mtv(rect, tv)) candidates.push_back(*mtv);
        }
    }
    if (candidates.empty()) return std::nullopt;

    std::sort(candidates.begin(), candidates.end(), [](const Vec2& a, const Vec2& b) {
        double na = norm(a), nb = norm(b);
        if (std::abs(na - nb) > kEpsGeom) return na < nb;
        return polar_angle(a) < polar_angle(b);
    });
    // Shortest candidate that actually separates, checked against the whole
    // polygon; the deepest one otherwise (callers iterate).
    for (const Vec2& cand : candidates) {
        Vec2 shift = cand * (1.0 + 1e-9);
        std::vector<Point> moved = rect;
        for (Point& p : moved) p += shift;
        if (!rect_intersects_polygon(moved, poly)) return cand;
    }
    return candidates.back();
}

double polygon_polygon_distance(const Polygon& a, const Polygon& b) {
    if (polygons_intersect(a, b)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            best = std::min(best, segment_segment_distance(a.edge(i), b.edge(j)));
    return best;
}

bool polygons_intersect(const Polygon& a, const Polygon& b) {
    for (const Point& p : a.vertices())
        if (point_in_polygon(p, b) != Containment::outside) return true;
    for (const Point& p : b.vertices())
        if (point_in_polygon(p, a) != Containment::outside) return true;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if (segments_touch(a.edge(i), b.edge(j))) return true;
    return false;
}

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::io: return "io";
        case Errc::parse: return "parse";
        case Errc::validation: return "validation";
        case Errc::degenerate_input: return "degenerate-input";
        case Errc::invalid_endpoint: return "invalid-endpoint";
        case Errc::no_route: return "no-route";
        case Errc::non_convergence: return "non-convergence";
        case Errc::planning_failure: return "planning-failure";
        case Errc::singular_configuration: return "singular-configuration";
        case Errc::bad_argument: return "bad-argument";
    }
    return "unknown";
}

} // namespace wsplan
