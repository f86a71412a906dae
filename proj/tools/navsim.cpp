// navsim: hybrid obstacle-avoidance simulator CLI.
//
// Subcommands:
//   run       simulate every start in a scenario, write CSV/JSON/SVG artifacts
//   validate  check a scenario file and report issues
//   plot      re-render SVG plots from a previous run directory
//
// Exit codes: 0 success, 1 validation failure, 2 safety violation,
// 3 non-convergence.

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hybnav/hybrid_sim.hpp"
#include "hybnav/io.hpp"
#include "hybnav/scenario.hpp"
#include "hybnav/svg.hpp"

namespace fs = std::filesystem;
using namespace hybnav;

namespace {

struct Overrides {
    std::optional<bool> sensor_based;
    std::optional<double> noise_std;
    std::optional<std::uint64_t> seed;
    std::optional<double> dwell;
    std::optional<double> dt;
    std::optional<double> max_time;
    std::string starts_filter;  // e.g. "0,3,7" or "2-5"
};

std::vector<std::size_t> parse_starts_filter(const std::string& filter,
                                             std::size_t n) {
    std::vector<std::size_t> out;
    if (filter.empty()) {
        for (std::size_t i = 0; i < n; ++i) out.push_back(i);
        return out;
    }
    std::stringstream ss(filter);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto dash = tok.find('-');
        if (dash != std::string::npos) {
            const std::size_t lo = std::stoul(tok.substr(0, dash));
            const std::size_t hi = std::stoul(tok.substr(dash + 1));
            for (std::size_t i = lo; i <= hi && i < n; ++i) out.push_back(i);
        } else {
            const std::size_t i = std::stoul(tok);
            if (i < n) out.push_back(i);
        }
    }
    return out;
}

void apply_overrides(Scenario& sc, const Overrides& ov) {
    if (ov.sensor_based) sc.sensor_based = *ov.sensor_based;
    if (ov.dwell) sc.sim.dwell = *ov.dwell;
    if (ov.dt) sc.sim.h = *ov.dt;
    if (ov.max_time) sc.sim.max_time = *ov.max_time;
    if (sc.sensor_based && !sc.sensor) {
        SensorConfig cfg;
        cfg.gap_threshold = std::max(2.0 * sc.robot_radius, 0.2);
        sc.sensor = cfg;
    }
    if (sc.sensor) {
        if (ov.noise_std) sc.sensor->noise_std = *ov.noise_std;
        if (ov.seed) sc.sensor->rng_seed = *ov.seed;
    }
}

struct StartResult {
    std::size_t index = 0;
    HybridTrajectory traj;
    Vec2 s;
};

StartResult simulate_start(const Scenario& sc, const WorldModel& world,
                           std::size_t index) {
    StartResult res;
    res.index = index;
    const Vec2 start = sc.starts[index];

    ControllerParams cp = sc.controller;
    if (sc.auto_direction) cp.s = auto_direction_vector(start);
    res.s = cp.s;

    if (sc.sensor_based) {
        SensorRunSetup setup{world, cp, sc.sim, *sc.sensor, start, sc.p_frac};
        res.traj = run_sensor_based(setup);
    } else {
        RunSetup setup{world, cp, sc.sim, start};
        res.traj = run(setup);
    }
    return res;
}

void write_start_artifacts(const fs::path& dir, const Scenario& sc,
                           const WorldModel& world, const StartResult& res) {
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "trajectory.csv");
        write_trajectory_csv(f, res.traj);
    }
    {
        std::ofstream f(dir / "jumps.csv");
        write_jump_csv(f, res.traj);
    }
    PlotLayers layers{world.r_a(), sc.controller.set.eps, sc.controller.set.eps_s,
                      sc.controller.set.eps_d};
    std::ofstream f(dir / "trajectory.svg");
    render_run_svg(f, world, res.traj, res.s, layers);
}

int cmd_validate(const std::string& scenario_path) {
    const ScenarioLoad load = load_scenario(scenario_path);
    if (!load.ok()) {
        std::cerr << "scenario invalid (" << load.errors.size() << " issue(s)):\n";
        for (const auto& e : load.errors) std::cerr << "  - " << e << '\n';
        return 1;
    }
    const Scenario& sc = *load.scenario;
    const WorldModel world = sc.world();
    std::cout << "scenario ok: " << world.obstacles().size() << " obstacle(s), "
              << sc.starts.size() << " start(s), mode="
              << (sc.sensor_based ? "sensor-based" : "known-map") << '\n'
              << "  r_a=" << world.r_a() << " eps_d=" << sc.controller.set.eps_d
              << " eps_s=" << sc.controller.set.eps_s
              << " eps=" << sc.controller.set.eps << '\n';
    return 0;
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            const Overrides& ov) {
    ScenarioLoad load = load_scenario(scenario_path);
    if (!load.ok()) {
        std::cerr << "scenario invalid:\n";
        for (const auto& e : load.errors) std::cerr << "  - " << e << '\n';
        return 1;
    }
    Scenario sc = *load.scenario;
    apply_overrides(sc, ov);
    if (sc.sensor_based && !sc.sensor) {
        std::cerr << "sensor-based run requires a sensor block or defaults\n";
        return 1;
    }
    const WorldModel world = sc.world();
    const auto indices = parse_starts_filter(ov.starts_filter, sc.starts.size());
    if (indices.empty()) {
        std::cerr << "starts filter selects no starts\n";
        return 1;
    }

    std::vector<std::future<StartResult>> futures;
    futures.reserve(indices.size());
    for (const std::size_t i : indices)
        futures.push_back(std::async(std::launch::async,
                                     [&sc, &world, i] { return simulate_start(sc, world, i); }));

    const fs::path out(out_dir);
    fs::create_directories(out);
    nlohmann::json summary;
    summary["scenario"] = scenario_path;
    summary["mode"] = sc.sensor_based ? "sensor-based" : "known-map";
    summary["runs"] = nlohmann::json::array();

    bool any_safety = false, any_nonconv = false;
    for (auto& fut : futures) {
        const StartResult res = fut.get();
        char name[32];
        std::snprintf(name, sizeof(name), "start_%03zu", res.index);
        write_start_artifacts(out / name, sc, world, res);

        nlohmann::json j = run_summary(res.traj, sc.starts[res.index], res.s);
        j["index"] = res.index;
        j["artifacts"] = name;
        summary["runs"].push_back(j);

        const char* status = termination_name(res.traj.termination);
        std::cout << name << ": " << status
                  << " final_norm=" << (res.traj.samples.empty()
                                            ? 0.0
                                            : res.traj.samples.back().xi.x.norm())
                  << " jumps=" << res.traj.jumps.size()
                  << " min_clearance=" << res.traj.min_clearance() << '\n';
        if (res.traj.termination == Termination::SafetyViolation) any_safety = true;
        else if (!res.traj.converged()) any_nonconv = true;
    }

    std::ofstream f(out / "summary.json");
    f << summary.dump(2) << '\n';

    if (any_safety) return 2;
    if (any_nonconv) return 3;
    return 0;
}

int cmd_plot(const std::string& scenario_path, const std::string& out_dir) {
    const ScenarioLoad load = load_scenario(scenario_path);
    if (!load.ok()) {
        std::cerr << "scenario invalid\n";
        return 1;
    }
    const Scenario& sc = *load.scenario;
    const WorldModel world = sc.world();
    const fs::path out(out_dir);
    if (!fs::exists(out)) {
        std::cerr << "run directory not found: " << out_dir << '\n';
        return 1;
    }
    std::size_t rendered = 0;
    for (const auto& entry : fs::directory_iterator(out)) {
        if (!entry.is_directory()) continue;
        const fs::path csv = entry.path() / "trajectory.csv";
        std::ifstream in(csv);
        if (!in) continue;
        HybridTrajectory traj;
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            TrajectorySample s{};
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream row(line);
            if (!(row >> s.t >> s.j >> s.xi.x.x >> s.xi.x.y >> s.xi.m >> s.xi.k >>
                  s.u.x >> s.u.y >> s.d_min))
                continue;
            traj.samples.push_back(s);
        }
        if (traj.samples.empty()) continue;
        Vec2 s = sc.controller.s;
        if (sc.auto_direction)
            s = auto_direction_vector(traj.samples.front().xi.x);
        PlotLayers layers{world.r_a(), sc.controller.set.eps,
                          sc.controller.set.eps_s, sc.controller.set.eps_d};
        std::ofstream svg(entry.path() / "trajectory.svg");
        render_run_svg(svg, world, traj, s, layers);
        ++rendered;
    }
    std::cout << "rendered " << rendered << " plot(s)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid obstacle-avoidance simulator"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir = "out";
    Overrides ov;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", scenario_path, "scenario JSON file")
            ->required();
    };

    CLI::App* run_cmd = app.add_subcommand("run", "simulate a scenario");
    add_common(run_cmd);
    run_cmd->add_option("--out", out_dir, "output directory");
    bool sensor_flag = false;
    run_cmd->add_flag("--sensor-based", sensor_flag,
                      "force sensor-based execution");
    double noise_std = -1.0, dwell = -1.0, dt = -1.0, max_time = -1.0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    run_cmd->add_option("--noise-std", noise_std, "range noise sigma [m]");
    run_cmd->add_option("--seed", seed, "sensor noise RNG seed")
        ->each([&](const std::string&) { seed_set = true; });
    run_cmd->add_option("--dwell", dwell, "minimum time between jumps [s]");
    run_cmd->add_option("--dt", dt, "integration step [s]");
    run_cmd->add_option("--max-time", max_time, "simulation horizon [s]");
    run_cmd->add_option("--starts-filter", ov.starts_filter,
                        "start indices, e.g. 0,2,5 or 3-7");

    CLI::App* validate_cmd = app.add_subcommand("validate", "check a scenario");
    add_common(validate_cmd);

    CLI::App* plot_cmd = app.add_subcommand("plot", "re-render SVG plots");
    add_common(plot_cmd);
    plot_cmd->add_option("--out", out_dir, "run directory to re-render");

    CLI11_PARSE(app, argc, argv);

    if (sensor_flag) ov.sensor_based = true;
    if (noise_std >= 0.0) ov.noise_std = noise_std;
    if (seed_set) ov.seed = seed;
    if (dwell >= 0.0) ov.dwell = dwell;
    if (dt > 0.0) ov.dt = dt;
    if (max_time > 0.0) ov.max_time = max_time;

    try {
        if (run_cmd->parsed()) return cmd_run(scenario_path, out_dir, ov);
        if (validate_cmd->parsed()) return cmd_validate(scenario_path);
        if (plot_cmd->parsed()) return cmd_plot(scenario_path, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
