#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "hybnav/hybrid_sim.hpp"
#include "hybnav/io.hpp"
#include "hybnav/scenario.hpp"

using namespace hybnav;
using nlohmann::json;

namespace {

json minimal_doc() {
    return json{
        {"world", {{"obstacles", json::array({{{"type", "disc"},
                                               {"center", {4.0, 0.0}},
                                               {"radius", 1.0}}})}}},
        {"robot", {{"radius", 0.0}, {"safety_margin", 0.1}}},
        {"controller",
         {{"gamma", 0.2}, {"eps_d", 0.35}, {"eps_s", 0.175}, {"eps", 0.0875},
          {"s", {0.0, -1.0}}}},
        {"sim", {{"dt", 1e-3}, {"max_time", 300.0}}},
        {"starts", json::array({{8.0, 0.3}})},
    };
}

bool has_error_containing(const ScenarioLoad& load, const std::string& needle) {
    return std::any_of(load.errors.begin(), load.errors.end(),
                       [&](const std::string& e) {
                           return e.find(needle) != std::string::npos;
                       });
}

}  // namespace

TEST_CASE("minimal scenario parses and builds a consistent world") {
    const auto load = parse_scenario(minimal_doc());
    CAPTURE(load.errors);
    REQUIRE(load.ok());
    const Scenario& sc = *load.scenario;
    CHECK(sc.obstacles.size() == 1);
    CHECK(sc.controller.gamma == 0.2);
    CHECK(sc.controller.s.y == -1.0);
    CHECK_FALSE(sc.auto_direction);
    CHECK_FALSE(sc.sensor_based);
    CHECK(sc.world().r_a() == Catch::Approx(0.1));
    CHECK(sc.sim.h == 1e-3);
    REQUIRE(sc.starts.size() == 1);
    CHECK(sc.starts[0].x == 8.0);
}

TEST_CASE("layer ordering violations name the offending fields") {
    auto doc = minimal_doc();
    doc["controller"]["eps_s"] = 0.4;  // > eps_d
    const auto load = parse_scenario(doc);
    CHECK_FALSE(load.ok());
    CHECK(has_error_containing(load, "eps_s"));
    CHECK(has_error_containing(load, "eps_d"));
}

TEST_CASE("omitted s enables per-start auto direction") {
    auto doc = minimal_doc();
    doc["controller"].erase("s");
    const auto load = parse_scenario(doc);
    REQUIRE(load.ok());
    CHECK(load.scenario->auto_direction);
    // Auto resolution for a start on the negative x axis.
    const Vec2 s = auto_direction_vector({-22, 0});
    CHECK(s.x == Catch::Approx(0.0).margin(1e-12));
    CHECK(s.y == Catch::Approx(-1.0));
}

TEST_CASE("explicit auto string is accepted, junk is rejected") {
    auto doc = minimal_doc();
    doc["controller"]["s"] = "auto";
    CHECK(parse_scenario(doc).ok());
    doc["controller"]["s"] = "sideways";
    const auto bad = parse_scenario(doc);
    CHECK_FALSE(bad.ok());
    CHECK(has_error_containing(bad, "controller.s"));
}

TEST_CASE("malformed documents report field paths instead of throwing") {
    auto doc = minimal_doc();
    doc["world"]["obstacles"][0].erase("radius");
    doc["starts"] = json::array();
    const auto load = parse_scenario(doc);
    CHECK_FALSE(load.ok());
    CHECK(has_error_containing(load, "world.obstacles[0]"));
    CHECK(has_error_containing(load, "starts"));
}

TEST_CASE("start inside an obstacle is rejected with its index") {
    auto doc = minimal_doc();
    doc["starts"] = json::array({{8.0, 0.3}, {4.0, 0.0}});
    const auto load = parse_scenario(doc);
    CHECK_FALSE(load.ok());
    CHECK(has_error_containing(load, "starts[1]"));
}

TEST_CASE("sensor-based mode requires a sensor block") {
    auto doc = minimal_doc();
    doc["mode"] = "sensor-based";
    const auto missing = parse_scenario(doc);
    CHECK_FALSE(missing.ok());
    CHECK(has_error_containing(missing, "sensor"));
    doc["sensor"] = {{"max_range", 1.5}, {"resolution_deg", 0.5}};
    const auto ok = parse_scenario(doc);
    CAPTURE(ok.errors);
    REQUIRE(ok.ok());
    CHECK(ok.scenario->sensor_based);
    CHECK(ok.scenario->sensor.has_value());
}

TEST_CASE("noise larger than a third of the layer gaps is linted") {
    auto doc = minimal_doc();
    doc["sensor"] = {{"max_range", 1.5}, {"noise_std", 0.08}};
    const auto load = parse_scenario(doc);  // known-map: fixed layers
    CHECK_FALSE(load.ok());
    CHECK(has_error_containing(load, "noise_std"));
}

TEST_CASE("world feasibility failures surface through the loader") {
    auto doc = minimal_doc();
    doc["world"]["obstacles"].push_back(
        {{"type", "disc"}, {"center", {6.2, 0.0}}, {"radius", 1.0}});
    const auto load = parse_scenario(doc);  // surface gap 0.2 < 2 (r_a + eps_d)
    CHECK_FALSE(load.ok());
    CHECK(has_error_containing(load, "world:"));
}

TEST_CASE("trajectory CSV has the fixed header and nine significant digits") {
    const WorldModel w({}, 0.3, 0.1);
    ControllerParams cp;
    cp.gamma = 0.2;
    cp.s = {0, -1};
    cp.set = SetParams{0.35, 0.2, 0.1};
    SimConfig sim;
    sim.h = 1e-3;
    const auto traj = run({w, cp, sim, {1.0 / 3.0, 1}});
    std::ostringstream out;
    write_trajectory_csv(out, traj);
    std::istringstream in(out.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "t,j,x,y,m,k,ux,uy,dmin");
    REQUIRE(std::getline(in, line));
    CHECK(line == "0,0,0.333333333,1,0,0,-0.0666666667,-0.2,inf");
    std::size_t rows = 1;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == traj.samples.size());
}

TEST_CASE("jump CSV rows mirror the jump records") {
    const WorldModel w({ConvexShape::disc({4, 0}, 1)}, 0.0, 0.1);
    ControllerParams cp;
    cp.gamma = 0.2;
    cp.s = {0, -1};
    cp.set = SetParams{0.35, 0.2, 0.1};
    SimConfig sim;
    sim.h = 1e-3;
    const auto traj = run({w, cp, sim, {8, 0.3}});
    REQUIRE(traj.jumps.size() == 2);
    std::ostringstream out;
    write_jump_csv(out, traj);
    std::istringstream in(out.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "t,j,m_old,m_new,k_old,k_new,trigger");
    REQUIRE(std::getline(in, line));
    CHECK(line.find("enter_avoidance") != std::string::npos);
    REQUIRE(std::getline(in, line));
    CHECK(line.find("exit_avoidance") != std::string::npos);
}

TEST_CASE("run summary carries the termination and crossing diagnostics") {
    const WorldModel w({ConvexShape::disc({4, 0}, 1)}, 0.0, 0.1);
    ControllerParams cp;
    cp.gamma = 0.2;
    cp.s = {0, -1};
    cp.set = SetParams{0.35, 0.2, 0.1};
    SimConfig sim;
    sim.h = 1e-3;
    const auto traj = run({w, cp, sim, {8, 0.3}});
    const auto j = run_summary(traj, {8, 0.3}, cp.s);
    CHECK(j["termination"] == "converged");
    CHECK(j["converged"] == true);
    CHECK(j["jump_count"] == 2);
    CHECK(j["min_clearance"].get<double>() >= w.r_a() - 1e-6);
    CHECK(j["final_norm"].get<double>() <= sim.convergence_radius);
    CHECK(j["forward_crossing_norms"].is_array());
    CHECK(j["backward_crossing_count"].get<int>() == 0);
}

TEST_CASE("noisy sensor runs serialize byte-identically across repeats") {
    const WorldModel w({ConvexShape::disc({4, 0}, 1)}, 0.0, 0.1);
    ControllerParams cp;
    cp.gamma = 0.2;
    cp.s = {0, -1};
    cp.set = SetParams{0.35, 0.2, 0.1};
    SimConfig sim;
    sim.h = 1e-3;
    SensorConfig sensor;
    sensor.noise_std = 0.03;
    sensor.rng_seed = 42;
    SensorRunSetup setup{w, cp, sim, sensor, {8, 0.3}};
    std::ostringstream a, b;
    write_trajectory_csv(a, run_sensor_based(setup));
    write_trajectory_csv(b, run_sensor_based(setup));
    CHECK(a.str() == b.str());
    CHECK(a.str().size() > 1000);
}
