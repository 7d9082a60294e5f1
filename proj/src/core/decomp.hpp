#pragma once

#include "triangulation.hpp"

#include <cstdint>
#include <set>
#include <vector>

namespace wsplan {

struct FreeRegion {
    std::vector<int> triangles;  // indices into the triangulation
    std::set<int> label;         // adjacent obstacle ids, -1 for the boundary
    std::uint64_t code = 0;      // Godel code of the label
    Point centroid;              // area-weighted centroid
    double area = 0.0;
};

struct RegionEdge {
    int a = 0;
    int b = 0;
    double weight = 0.0; // centroid distance (meters)
};

struct RegionAdjacencyGraph {
    int node_count = 0;
    std::vector<RegionEdge> edges;

    std::vector<std::vector<std::pair<int, double>>> adjacency() const;
    int component_count() const;
};

// Injective prime-product code over a label set; -1 maps to the first prime.
std::uint64_t godel_code(const std::set<int>& label);

// Obstacle grouping by intersecting convex hulls (union-find over hull
// overlaps); returns for each obstacle the sorted set of obstacle ids in its
// group.
std::vector<std::set<int>> group_obstacles_by_hull(const Scene& scene);

std::vector<FreeRegion> classify_regions(const Triangulation& tri, const Scene& scene);

RegionAdjacencyGraph build_adjacency(const Triangulation& tri, const std::vector<FreeRegion>& regions);

// Minimum-total-weight node path between regions (Dijkstra).
std::vector<int> region_route(const RegionAdjacencyGraph& graph, int start_region, int goal_region);

// K best loopless routes in increasing weight order (Yen's algorithm); the
// first entry equals region_route's result.
std::vector<std::vector<int>> region_routes_k_best(const RegionAdjacencyGraph& graph, int start_region,
                                                   int goal_region, int k);

struct Decomposition {
    Triangulation triangulation;
    std::vector<FreeRegion> regions;
    RegionAdjacencyGraph graph;

    explicit Decomposition(const Scene& scene);
    // Region containing p (boundary-inclusive, lowest region id wins), or -1.
    int locate_region(const Point& p) const;
};

} // namespace wsplan
