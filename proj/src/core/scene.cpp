#include "scene.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace wsplan {

Point Bounds::corner(int i) const {
    switch (i & 3) {
        case 0: return {xmin, ymin};
        case 1: return {xmax, ymin};
        case 2: return {xmax, ymax};
        default: return {xmin, ymax};
    }
}

Scene::Scene(Bounds bounds, std::vector<Polygon> obstacles)
    : bounds_(bounds), obstacles_(std::move(obstacles)) {
    if (!(bounds_.xmax > bounds_.xmin) || !(bounds_.ymax > bounds_.ymin))
        throw Error(Errc::validation, "scene bounds are empty");
    for (std::size_t k = 0; k < obstacles_.size(); ++k) {
        for (const Point& p : obstacles_[k].vertices()) {
            if (!bounds_.contains(p))
                throw Error(Errc::validation, "obstacle " + std::to_string(k) + " vertex outside bounds");
        }
    }
    for (std::size_t i = 0; i < obstacles_.size(); ++i) {
        for (std::size_t j = i + 1; j < obstacles_.size(); ++j) {
            if (obstacles_[i].size() != obstacles_[j].size()) continue;
            bool identical = true;
            for (std::size_t v = 0; v < obstacles_[i].size() && identical; ++v)
                identical = distance(obstacles_[i][v], obstacles_[j][v]) <= kEpsGeom;
            if (identical)
                throw Error(Errc::validation,
                            "obstacles " + std::to_string(i) + " and " + std::to_string(j) + " identical");
        }
    }
}

double Scene::clearance(const Point& p) const {
    double d = std::min({p.x - bounds_.xmin, bounds_.xmax - p.x, p.y - bounds_.ymin, bounds_.ymax - p.y});
    for (const Polygon& obs : obstacles_)
        d = std::min(d, point_polygon_signed_distance(p, obs));
    return d;
}

RobotModel::RobotModel(std::vector<Keypoint> keypoints, std::vector<Link> links, int root)
    : keypoints_(std::move(keypoints)), links_(std::move(links)), root_(root) {
    const int n = static_cast<int>(keypoints_.size());
    if (n == 0) throw Error(Errc::validation, "robot has no keypoints");
    std::vector<bool> seen(keypoints_.size(), false);
    for (std::size_t i = 0; i < keypoints_.size(); ++i) {
        const Keypoint& kp = keypoints_[i];
        if (kp.id < 0 || kp.id >= n || seen[static_cast<std::size_t>(kp.id)])
            throw Error(Errc::validation, "keypoint ids must be dense 0..n-1");
        if (kp.id != static_cast<int>(i))
            throw Error(Errc::validation, "keypoints must be listed in id order");
        seen[static_cast<std::size_t>(kp.id)] = true;
        if (kp.radius < 0) throw Error(Errc::validation, "keypoint radius negative");
    }
    if (root_ < 0 || root_ >= n) throw Error(Errc::validation, "root keypoint out of range");
    if (links_.size() + 1 != keypoints_.size())
        throw Error(Errc::validation, "link graph is not a tree (need n-1 links)");

    std::vector<std::vector<std::size_t>> incident(keypoints_.size());
    for (std::size_t li = 0; li < links_.size(); ++li) {
        const Link& l = links_[li];
        if (l.a < 0 || l.a >= n || l.b < 0 || l.b >= n || l.a == l.b)
            throw Error(Errc::validation, "link endpoints invalid");
        if (l.length <= 0) throw Error(Errc::validation, "link length must be positive");
        if (l.width < 0) throw Error(Errc::validation, "link width negative");
        if (keypoints_[static_cast<std::size_t>(l.a)].radius < l.width / 2 - kEpsGeom ||
            keypoints_[static_cast<std::size_t>(l.b)].radius < l.width / 2 - kEpsGeom)
            throw Error(Errc::validation, "keypoint radius smaller than half link width");
        incident[static_cast<std::size_t>(l.a)].push_back(li);
        incident[static_cast<std::size_t>(l.b)].push_back(li);
    }

    // BFS from the root, orienting links parent -> child; rejects cycles and
    // disconnected graphs.
    std::vector<bool> visited(keypoints_.size(), false);
    std::deque<int> queue{root_};
    visited[static_cast<std::size_t>(root_)] = true;
    bfs_order_.push_back(root_);
    while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        std::vector<std::pair<int, std::size_t>> children;
        for (std::size_t li : incident[static_cast<std::size_t>(cur)]) {
            int other = links_[li].a == cur ? links_[li].b : links_[li].a;
            if (visited[static_cast<std::size_t>(other)]) continue;
            children.emplace_back(other, li);
        }
        std::sort(children.begin(), children.end());
        for (auto [child, li] : children) {
            visited[static_cast<std::size_t>(child)] = true;
            Link oriented = links_[li];
            if (oriented.a != cur) std::swap(oriented.a, oriented.b);
            bfs_links_.push_back(oriented);
            bfs_order_.push_back(child);
            queue.push_back(child);
        }
    }
    for (bool v : visited)
        if (!v) throw Error(Errc::validation, "link graph is not connected");
}

double RobotModel::radius(int keypoint_id) const {
    return keypoints_.at(static_cast<std::size_t>(keypoint_id)).radius;
}

std::vector<int> RobotModel::neighbors(int keypoint_id) const {
    std::vector<int> out;
    for (const Link& l : links_) {
        if (l.a == keypoint_id) out.push_back(l.b);
        if (l.b == keypoint_id) out.push_back(l.a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double RobotModel::min_link_length() const {
    double m = std::numeric_limits<double>::infinity();
    for (const Link& l : links_) m = std::min(m, l.length);
    return m;
}

double RobotModel::total_reach() const {
    double r = 0.0;
    for (const Link& l : links_) r += l.length;
    return r;
}

double constraint_violation(const RobotState& state, const RobotModel& model) {
    if (state.positions.size() != model.keypoint_count())
        throw Error(Errc::bad_argument, "state does not cover all model keypoints");
    double worst = 0.0;
    for (const Link& l : model.links()) {
        double d = distance(state.positions[static_cast<std::size_t>(l.a)],
                            state.positions[static_cast<std::size_t>(l.b)]);
        worst = std::max(worst, std::abs(d - l.length));
    }
    return worst;
}

double state_distance(const RobotState& a, const RobotState& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.positions.size(); ++i)
        worst = std::max(worst, distance(a.positions[i], b.positions[i]));
    return worst;
}

RobotState interpolate_states(const RobotState& a, const RobotState& b, double t) {
    RobotState out;
    out.positions.reserve(a.positions.size());
    for (std::size_t i = 0; i < a.positions.size(); ++i)
        out.positions.push_back(a.positions[i] * (1.0 - t) + b.positions[i] * t);
    return out;
}

} // namespace wsplan
