#pragma once

#include "scene.hpp"

#include <functional>
#include <string>
#include <vector>

namespace wsplan {

// Clearance-aware visibility graph over inflated obstacle vertices. Query
// endpoints are inserted as a per-query overlay; the shared graph is never
// mutated after construction.
class VisibilityGraph {
  public:
    VisibilityGraph(const Scene& scene, double clearance);

    const std::vector<Point>& nodes() const { return nodes_; }
    const std::vector<std::vector<int>>& edges() const { return edges_; }
    double clearance() const { return clearance_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    // Min distance from the segment to any obstacle; negative when the
    // segment passes through an obstacle interior.
    double segment_clearance(const Segment& s) const;
    bool edge_feasible(const Point& a, const Point& b) const;

    std::vector<Point> shortest_path(const Point& start, const Point& goal) const;
    // Same, but every edge must also satisfy `admissible`; used to confine a
    // query to a region corridor.
    std::vector<Point> shortest_path_filtered(
        const Point& start, const Point& goal,
        const std::function<bool(const Segment&)>& admissible) const;

  private:
    const Scene& scene_;
    double clearance_;
    std::vector<Point> nodes_;
    std::vector<std::vector<int>> edges_; // adjacency by node index
    std::vector<std::string> warnings_;
};

} // namespace wsplan
