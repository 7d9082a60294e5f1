#pragma once

#include <array>
#include <optional>
#include <vector>

namespace wsplan {

// Tolerance for boundary and degeneracy classification (meters).
inline constexpr double kEpsGeom = 1e-9;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
};

using Point = Vec2;

inline Vec2 operator*(double s, const Vec2& v) { return {v.x * s, v.y * s}; }

double dot(const Vec2& a, const Vec2& b);
double cross(const Vec2& a, const Vec2& b);
double norm(const Vec2& v);
double norm_sq(const Vec2& v);
double distance(const Point& a, const Point& b);
Vec2 perp(const Vec2& v); // rotate +90 degrees
Vec2 normalized(const Vec2& v); // zero vector stays zero
Vec2 rotated(const Vec2& v, double angle);
bool finite(const Vec2& v);

struct Segment {
    Point a;
    Point b;
};

// Simple CCW polygon. Construction validates the invariants.
class Polygon {
  public:
    explicit Polygon(std::vector<Point> vertices);

    const std::vector<Point>& vertices() const { return verts_; }
    std::size_t size() const { return verts_.size(); }
    const Point& operator[](std::size_t i) const { return verts_[i]; }
    Segment edge(std::size_t i) const { return {verts_[i], verts_[(i + 1) % verts_.size()]}; }

    double area() const;
    Point centroid() const;
    bool is_convex() const;

  private:
    std::vector<Point> verts_;
};

double signed_area(const std::vector<Point>& verts);
bool is_simple_polyline_loop(const std::vector<Point>& verts);

enum class Containment { inside, boundary, outside };

struct SegmentIntersection {
    enum class Kind { none, point, overlap } kind = Kind::none;
    Point point;     // valid when kind == point
    Segment overlap; // valid when kind == overlap
};

// Shared-point detection for segments, including collinear overlaps and
// endpoint touches. Symmetric in its arguments.
SegmentIntersection segment_intersect(const Segment& s1, const Segment& s2);
bool segments_touch(const Segment& s1, const Segment& s2);
// True crossing with interior overlap (shared interior point that is interior
// to at least one of the segments), used for simplicity checks.
bool segments_properly_cross(const Segment& s1, const Segment& s2);

Containment point_in_polygon(const Point& p, const Polygon& poly);

Polygon convex_hull(const std::vector<Point>& points);

double point_segment_distance(const Point& p, const Segment& s);
Point closest_point_on_segment(const Point& p, const Segment& s);
double segment_segment_distance(const Segment& a, const Segment& b);
// Min distance from a point to the polygon boundary.
double point_polygon_boundary_distance(const Point& p, const Polygon& poly);
// Signed distance: negative inside, positive outside, 0 on the boundary.
double point_polygon_signed_distance(const Point& p, const Polygon& poly);

struct DiskProbe {
    Point center;
    double radius = 0.0;
};

// Rectangle swept by a segment with a half-width. half_width == 0 degrades
// to the bare segment.
struct RectProbe {
    Segment spine;
    double half_width = 0.0;
};

// Minimum translation that separates the probe from the polygon, or nullopt
// when they do not intersect. Directions are unit * depth.
std::optional<Vec2> penetration_vector(const DiskProbe& probe, const Polygon& poly);
std::optional<Vec2> penetration_vector(const RectProbe& probe, const Polygon& poly);

// Corner points of the rectangle swept by the probe spine (CCW), empty for a
// degenerate spine.
std::vector<Point> rect_probe_corners(const RectProbe& probe);

// Fan triangulation by ear clipping; works for any simple CCW polygon.
std::vector<std::array<Point, 3>> ear_clip(const Polygon& poly);

double polygon_polygon_distance(const Polygon& a, const Polygon& b);
bool polygons_intersect(const Polygon& a, const Polygon& b);

} // namespace wsplan
