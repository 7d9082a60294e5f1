#pragma once

#include "geom.hpp"

#include <map>
#include <string>
#include <vector>

namespace wsplan {

struct Bounds {
    double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    bool contains(const Point& p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
    bool strictly_contains(const Point& p, double margin = kEpsGeom) const {
        return p.x > xmin + margin && p.x < xmax - margin && p.y > ymin + margin && p.y < ymax - margin;
    }
    Point corner(int i) const; // 0..3 CCW from (xmin,ymin)
};

class Scene {
  public:
    Scene(Bounds bounds, std::vector<Polygon> obstacles);

    const Bounds& bounds() const { return bounds_; }
    const std::vector<Polygon>& obstacles() const { return obstacles_; }
    std::size_t obstacle_count() const { return obstacles_.size(); }

    // Distance from a point to the nearest obstacle boundary or bounds edge;
    // negative when inside an obstacle or outside the bounds.
    double clearance(const Point& p) const;

  private:
    Bounds bounds_;
    std::vector<Polygon> obstacles_;
};

struct Keypoint {
    int id = 0;
    double radius = 0.0;
};

struct Link {
    int a = 0;
    int b = 0;
    double length = 0.0;
    double width = 0.0;
};

class RobotModel {
  public:
    RobotModel(std::vector<Keypoint> keypoints, std::vector<Link> links, int root);

    const std::vector<Keypoint>& keypoints() const { return keypoints_; }
    const std::vector<Link>& links() const { return links_; }
    int root() const { return root_; }
    std::size_t keypoint_count() const { return keypoints_.size(); }

    double radius(int keypoint_id) const;
    // Links in breadth-first order from the root; each link is oriented
    // (parent keypoint `a`, child keypoint `b`).
    const std::vector<Link>& bfs_links() const { return bfs_links_; }
    const std::vector<int>& bfs_order() const { return bfs_order_; }
    std::vector<int> neighbors(int keypoint_id) const;
    double min_link_length() const;
    double total_reach() const;

  private:
    std::vector<Keypoint> keypoints_;
    std::vector<Link> links_;
    int root_;
    std::vector<Link> bfs_links_;
    std::vector<int> bfs_order_;
};

struct RobotState {
    std::vector<Point> positions; // indexed by keypoint id
};

struct KeypointTrajectory {
    std::vector<RobotState> states;

    std::size_t size() const { return states.size(); }
    bool empty() const { return states.empty(); }
};

// Max over links of | ||p_a - p_b|| - length |.
double constraint_violation(const RobotState& state, const RobotModel& model);

double state_distance(const RobotState& a, const RobotState& b);
RobotState interpolate_states(const RobotState& a, const RobotState& b, double t);

} // namespace wsplan
