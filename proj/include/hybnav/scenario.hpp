#pragma once

// Scenario file loading and validation. Scenarios are JSON documents with
// explicit SI units (meters, seconds, radians).

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hybnav/controller.hpp"
#include "hybnav/hybrid_sim.hpp"
#include "hybnav/sensor.hpp"
#include "hybnav/world.hpp"

namespace hybnav {

struct Scenario {
    std::vector<ConvexShape> obstacles;
    double robot_radius = 0.0;
    double safety_margin = 0.1;
    ControllerParams controller;
    bool auto_direction = false;  // resolve s per start from x(0,0)
    std::optional<SensorConfig> sensor;
    SimConfig sim;
    std::vector<Vec2> starts;
    bool sensor_based = false;
    double p_frac = 0.5;

    WorldModel world() const {
        return WorldModel(obstacles, robot_radius, safety_margin);
    }
};

struct ScenarioLoad {
    std::optional<Scenario> scenario;
    std::vector<std::string> errors;  // messages carry JSON field paths
    bool ok() const { return scenario.has_value() && errors.empty(); }
};

namespace detail {

inline std::optional<Vec2> parse_vec2(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        return std::nullopt;
    return Vec2{j[0].get<double>(), j[1].get<double>()};
}

}  // namespace detail

inline ScenarioLoad parse_scenario(const nlohmann::json& doc) {
    ScenarioLoad result;
    auto& errors = result.errors;
    Scenario sc;

    if (!doc.contains("world") || !doc["world"].contains("obstacles")) {
        errors.push_back("world.obstacles: missing");
    } else {
        std::size_t idx = 0;
        for (const auto& jo : doc["world"]["obstacles"]) {
            const std::string path = "world.obstacles[" + std::to_string(idx++) + "]";
            const std::string type = jo.value("type", "");
            try {
                if (type == "disc") {
                    const auto c = detail::parse_vec2(jo.at("center"));
                    if (!c || !jo.contains("radius")) {
                        errors.push_back(path + ": disc needs center [x,y] and radius");
                        continue;
                    }
                    sc.obstacles.push_back(
                        ConvexShape::disc(*c, jo["radius"].get<double>()));
                } else if (type == "polygon") {
                    std::vector<Vec2> verts;
                    for (const auto& jv : jo.at("vertices")) {
                        const auto v = detail::parse_vec2(jv);
                        if (!v) {
                            errors.push_back(path + ".vertices: bad vertex");
                            break;
                        }
                        verts.push_back(*v);
                    }
                    sc.obstacles.push_back(ConvexShape::polygon(std::move(verts)));
                } else {
                    errors.push_back(path + ".type: must be 'disc' or 'polygon'");
                }
            } catch (const std::exception& e) {
                errors.push_back(path + ": " + e.what());
            }
        }
    }

    const auto& robot = doc.value("robot", nlohmann::json::object());
    sc.robot_radius = robot.value("radius", 0.0);
    sc.safety_margin = robot.value("safety_margin", 0.1);
    if (sc.robot_radius < 0.0) errors.push_back("robot.radius: must be >= 0");
    if (sc.safety_margin <= 0.0) errors.push_back("robot.safety_margin: must be > 0");

    const auto& ctrl = doc.value("controller", nlohmann::json::object());
    sc.controller.gamma = ctrl.value("gamma", 0.2);
    if (sc.controller.gamma <= 0.0) errors.push_back("controller.gamma: must be > 0");
    sc.controller.set.eps_d = ctrl.value("eps_d", 0.35);
    sc.controller.set.eps_s = ctrl.value("eps_s", sc.controller.set.eps_d * 0.5);
    sc.controller.set.eps = ctrl.value("eps", sc.controller.set.eps_s * 0.5);
    sc.p_frac = ctrl.value("p_frac", 0.5);
    if (!(sc.p_frac > 0.0 && sc.p_frac < 1.0))
        errors.push_back("controller.p_frac: must lie in (0, 1)");
    if (!sc.controller.set.valid())
        errors.push_back("controller.eps/eps_s/eps_d: need 0 < eps < eps_s < eps_d");
    if (ctrl.contains("s")) {
        if (ctrl["s"].is_string() && ctrl["s"] == "auto") {
            sc.auto_direction = true;
        } else if (const auto s = detail::parse_vec2(ctrl["s"])) {
            if (s->norm() == 0.0)
                errors.push_back("controller.s: must be nonzero");
            else
                sc.controller.s = *s;
        } else {
            errors.push_back("controller.s: expected [x,y] or \"auto\"");
        }
    } else {
        sc.auto_direction = true;
    }

    if (doc.contains("sensor")) {
        const auto& js = doc["sensor"];
        SensorConfig cfg;
        cfg.max_range = js.value("max_range", 1.5);
        const double res_deg = js.value("resolution_deg", 0.5);
        cfg.angular_resolution = res_deg * kPi / 180.0;
        cfg.noise_std = js.value("noise_std", 0.0);
        cfg.rng_seed = js.value("seed", std::uint64_t{0});
        cfg.gap_threshold = js.value("gap_threshold",
                                     std::max(2.0 * sc.robot_radius, 0.2));
        if (cfg.max_range <= sc.robot_radius + sc.safety_margin + sc.controller.set.eps_d)
            errors.push_back("sensor.max_range: must exceed r_a + eps_d");
        if (cfg.beam_count() < 8)
            errors.push_back("sensor.resolution_deg: must give at least 8 beams");
        if (cfg.noise_std < 0.0) errors.push_back("sensor.noise_std: must be >= 0");
        sc.sensor = cfg;
    }

    const auto& sim = doc.value("sim", nlohmann::json::object());
    sc.sim.h = sim.value("dt", 1e-3);
    sc.sim.dwell = sim.value("dwell", 10.0 * sc.sim.h);
    sc.sim.max_time = sim.value("max_time", 600.0);
    sc.sim.convergence_radius = sim.value("convergence_radius", 0.05);
    sc.sim.flow_priority = sim.value("flow_priority", true);
    if (sc.sim.h <= 0.0) errors.push_back("sim.dt: must be > 0");
    if (sc.sim.dwell < 0.0) errors.push_back("sim.dwell: must be >= 0");

    if (!doc.contains("starts") || !doc["starts"].is_array() || doc["starts"].empty()) {
        errors.push_back("starts: need at least one [x,y] start");
    } else {
        std::size_t idx = 0;
        for (const auto& js : doc["starts"]) {
            const auto v = detail::parse_vec2(js);
            if (!v)
                errors.push_back("starts[" + std::to_string(idx) + "]: expected [x,y]");
            else
                sc.starts.push_back(*v);
            ++idx;
        }
    }

    const std::string mode = doc.value("mode", "known-map");
    if (mode == "sensor-based") {
        sc.sensor_based = true;
        if (!sc.sensor) errors.push_back("sensor: required for sensor-based mode");
    } else if (mode != "known-map") {
        errors.push_back("mode: must be 'known-map' or 'sensor-based'");
    }

    // World-level feasibility.
    if (errors.empty()) {
        const auto report = validate_world(sc.world(), sc.controller.set.eps_d);
        for (const auto& issue : report.issues)
            errors.push_back("world: [" + issue.code + "] " + issue.message);
        const WorldModel w = sc.world();
        std::size_t idx = 0;
        for (const auto& s : sc.starts) {
            if (!w.in_free_workspace(s))
                errors.push_back("starts[" + std::to_string(idx) +
                                 "]: start lies outside the free workspace");
            ++idx;
        }
        // Noise layer lint: layer separations must exceed 3 sigma.
        if (sc.sensor && sc.sensor->noise_std > 0.0) {
            const double delta = 3.0 * sc.sensor->noise_std;
            const auto& p = sc.controller.set;
            if (!sc.sensor_based && (p.eps_d - p.eps_s <= delta || p.eps <= delta))
                errors.push_back(
                    "sensor.noise_std: layer separations must exceed 3 sigma");
        }
    }

    if (errors.empty()) result.scenario = std::move(sc);
    return result;
}

inline ScenarioLoad load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) return {std::nullopt, {"cannot open scenario file: " + path}};
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        return {std::nullopt, {std::string("JSON parse error: ") + e.what()}};
    }
    return parse_scenario(doc);
}

}  // namespace hybnav
