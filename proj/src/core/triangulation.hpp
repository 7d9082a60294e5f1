#pragma once

#include "scene.hpp"

#include <set>
#include <vector>

namespace wsplan {

// Vertex source tag: obstacle id >= 0, boundary = -1.
inline constexpr int kBoundaryTag = -1;

struct TriVertex {
    Point p;
    std::set<int> tags;
};

struct Triangle {
    int v[3]; // CCW vertex indices
    bool free = true; // outside every obstacle
};

// Constrained Delaunay triangulation of the scene: vertices are all obstacle
// vertices plus the 4 bounds corners, with obstacle edges and bounds edges as
// constrained edges. Triangles inside obstacles carry free = false.
class Triangulation {
  public:
    explicit Triangulation(const Scene& scene);

    const std::vector<TriVertex>& vertices() const { return vertices_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    std::vector<int> free_triangle_indices() const;

    Point triangle_centroid(int t) const;
    double triangle_area(int t) const;
    double longest_edge(int t) const;
    bool has_edge(int a, int b) const;
    // Neighbor triangle across edge j of triangle t (edge (v[j], v[j+1])),
    // or -1 at the outer boundary.
    int neighbor(int t, int j) const;
    // Index of the free triangle containing p (boundary inclusive), or -1.
    int locate_free(const Point& p) const;
    bool point_in_triangle(const Point& p, int t) const;

  private:
    std::vector<TriVertex> vertices_;
    std::vector<Triangle> triangles_;
    std::vector<std::array<int, 3>> neighbors_;

    void build_neighbors();
};

} // namespace wsplan
