#include "scene_io.hpp"

#include "error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace wsplan {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::io, "cannot write " + path);
    out << text;
}

json parse(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::parse, std::string(what) + ": " + e.what());
    }
}

Point parse_point(const json& j, const std::string& ctx) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error(Errc::parse, ctx + ": expected [x, y]");
    Point p{j[0].get<double>(), j[1].get<double>()};
    if (!finite(p)) throw Error(Errc::validation, ctx + ": coordinates not finite");
    return p;
}

json point_json(const Point& p) { return json::array({p.x, p.y}); }

RobotState parse_state(const json& j, const std::string& ctx) {
    if (!j.is_object() || !j.contains("positions"))
        throw Error(Errc::parse, ctx + ": expected {\"positions\": [...]}");
    RobotState st;
    std::size_t i = 0;
    for (const auto& pj : j.at("positions"))
        st.positions.push_back(parse_point(pj, ctx + ".positions[" + std::to_string(i++) + "]"));
    return st;
}

json state_json(const RobotState& st) {
    json positions = json::array();
    for (const Point& p : st.positions) positions.push_back(point_json(p));
    return json{{"positions", positions}};
}

} // namespace

Scene scene_from_json(const std::string& text) {
    json j = parse(text, "scene");
    if (!j.contains("bounds") || !j.at("bounds").is_array() || j.at("bounds").size() != 4)
        throw Error(Errc::parse, "scene.bounds: expected [xmin, ymin, xmax, ymax]");
    Bounds b;
    b.xmin = j.at("bounds")[0].get<double>();
    b.ymin = j.at("bounds")[1].get<double>();
    b.xmax = j.at("bounds")[2].get<double>();
    b.ymax = j.at("bounds")[3].get<double>();

    std::vector<Polygon> obstacles;
    if (j.contains("obstacles")) {
        std::vector<std::pair<int, std::vector<Point>>> raw;
        for (const auto& oj : j.at("obstacles")) {
            if (!oj.contains("id") || !oj.contains("vertices"))
                throw Error(Errc::parse, "scene.obstacles: expected {\"id\", \"vertices\"}");
            int id = oj.at("id").get<int>();
            std::vector<Point> verts;
            std::size_t vi = 0;
            for (const auto& vj : oj.at("vertices"))
                verts.push_back(parse_point(vj, "obstacle " + std::to_string(id) + ".vertices[" +
                                                    std::to_string(vi++) + "]"));
            raw.emplace_back(id, std::move(verts));
        }
        std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t k = 0; k < raw.size(); ++k) {
            if (raw[k].first != static_cast<int>(k))
                throw Error(Errc::validation, "obstacle ids must be dense 0..m-1");
            try {
                obstacles.emplace_back(std::move(raw[k].second));
            } catch (const Error& e) {
                throw Error(Errc::validation,
                            "obstacle " + std::to_string(k) + " " +
                                (std::string(e.what()).find("not simple") != std::string::npos
                                     ? "not simple"
                                     : std::string(e.what())));
            }
        }
    }
    return Scene(b, std::move(obstacles));
}

std::string scene_to_json(const Scene& scene) {
    json j;
    j["bounds"] = {scene.bounds().xmin, scene.bounds().ymin, scene.bounds().xmax, scene.bounds().ymax};
    j["obstacles"] = json::array();
    for (std::size_t k = 0; k < scene.obstacle_count(); ++k) {
        json verts = json::array();
        for (const Point& p : scene.obstacles()[k].vertices()) verts.push_back(point_json(p));
        j["obstacles"].push_back({{"id", static_cast<int>(k)}, {"vertices", verts}});
    }
    return j.dump(2) + "\n";
}

Scene load_scene(const std::string& path) { return scene_from_json(read_file(path)); }
void save_scene(const Scene& scene, const std::string& path) { write_file(path, scene_to_json(scene)); }

RobotModel robot_from_json(const std::string& text) {
    json j = parse(text, "robot");
    std::vector<Keypoint> kps;
    for (const auto& kj : j.at("keypoints"))
        kps.push_back({kj.at("id").get<int>(), kj.at("radius").get<double>()});
    std::sort(kps.begin(), kps.end(), [](const Keypoint& a, const Keypoint& b) { return a.id < b.id; });
    std::vector<Link> links;
    for (const auto& lj : j.at("links"))
        links.push_back({lj.at("a").get<int>(), lj.at("b").get<int>(), lj.at("length").get<double>(),
                         lj.value("width", 0.0)});
    int root = j.value("root", 0);
    return RobotModel(std::move(kps), std::move(links), root);
}

std::string robot_to_json(const RobotModel& model) {
    json j;
    j["keypoints"] = json::array();
    for (const Keypoint& kp : model.keypoints())
        j["keypoints"].push_back({{"id", kp.id}, {"radius", kp.radius}});
    j["links"] = json::array();
    for (const Link& l : model.links())
        j["links"].push_back({{"a", l.a}, {"b", l.b}, {"length", l.length}, {"width", l.width}});
    j["root"] = model.root();
    return j.dump(2) + "\n";
}

RobotModel load_robot(const std::string& path) { return robot_from_json(read_file(path)); }

RobotState state_from_json(const std::string& text) { return parse_state(parse(text, "state"), "state"); }
std::string state_to_json(const RobotState& state) { return state_json(state).dump(2) + "\n"; }
RobotState load_state(const std::string& path) { return state_from_json(read_file(path)); }
void save_state(const RobotState& state, const std::string& path) { write_file(path, state_to_json(state)); }

KeypointTrajectory trajectory_from_json(const std::string& text) {
    json j = parse(text, "trajectory");
    KeypointTrajectory traj;
    std::size_t i = 0;
    for (const auto& sj : j.at("states"))
        traj.states.push_back(parse_state(sj, "states[" + std::to_string(i++) + "]"));
    if (traj.states.size() < 2) throw Error(Errc::validation, "trajectory needs at least 2 states");
    for (const RobotState& st : traj.states)
        if (st.positions.size() != traj.states.front().positions.size())
            throw Error(Errc::validation, "trajectory states reference different keypoint sets");
    return traj;
}

std::string trajectory_to_json(const KeypointTrajectory& traj) {
    json j;
    j["states"] = json::array();
    for (const RobotState& st : traj.states) j["states"].push_back(state_json(st));
    return j.dump(2) + "\n";
}

KeypointTrajectory load_trajectory(const std::string& path) { return trajectory_from_json(read_file(path)); }
void save_trajectory(const KeypointTrajectory& traj, const std::string& path) {
    write_file(path, trajectory_to_json(traj));
}

} // namespace wsplan
