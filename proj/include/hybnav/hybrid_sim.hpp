#pragma once

// Closed-loop hybrid execution on hybrid time domains: RK4 flow, jump
// detection with flow priority and dwell time, known-map and sensor-based
// run loops, half-line crossing diagnostics.

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hybnav/controller.hpp"
#include "hybnav/geometry.hpp"
#include "hybnav/regions.hpp"
#include "hybnav/sensor.hpp"
#include "hybnav/world.hpp"

namespace hybnav {

inline constexpr double kSafetyTol = 1e-6;

struct SimConfig {
    double h = 1e-3;                  // integrator step, seconds
    double max_time = 600.0;
    double dwell = 1e-2;              // minimum time between jumps
    double convergence_radius = 0.05;
    bool flow_priority = true;
};

struct TrajectorySample {
    double t = 0.0;
    int j = 0;
    HybridState xi;
    Vec2 u;
    double d_min = kInfinity;  // true distance to the obstacle set
};

struct JumpRecord {
    double t = 0.0;
    int j = 0;  // jump count after the jump
    HybridState before;
    HybridState after;
    std::string trigger;
};

enum class Termination { Converged, MaxTime, SafetyViolation, ZenoStopped };

struct HybridTrajectory {
    std::vector<TrajectorySample> samples;
    std::vector<JumpRecord> jumps;
    Termination termination = Termination::MaxTime;
    bool converged() const { return termination == Termination::Converged; }
    double min_clearance() const {
        double d = kInfinity;
        for (const auto& s : samples) d = std::min(d, s.d_min);
        return d;
    }
};

// One RK4 step of xdot = u(x, m) with the discrete state frozen.
inline HybridState step_flow(const HybridState& xi, const WorldModel& w,
                             const ControllerParams& cp, double h) {
    const auto f = [&](const Vec2& x) {
        return control_input({x, xi.m, xi.k}, w, cp);
    };
    const Vec2 k1 = f(xi.x);
    const Vec2 k2 = f(xi.x + k1 * (h / 2.0));
    const Vec2 k3 = f(xi.x + k2 * (h / 2.0));
    const Vec2 k4 = f(xi.x + k3 * h);
    HybridState next = xi;
    next.x = xi.x + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6.0);
    return next;
}

struct DwellBookkeeping {
    double last_jump_time = -kInfinity;
};

// Jump map: L and N fire as one atomic jump. Returns the post-jump state when
// the state is in the jump set and should jump under flow priority + dwell.
inline std::optional<HybridState> try_jump(const HybridState& xi, const WorldModel& w,
                                           const ControllerParams& cp,
                                           const SimConfig& sim, double t,
                                           DwellBookkeeping& dwell) {
    if (t - dwell.last_jump_time < sim.dwell) return std::nullopt;
    if (!in_jump_set(xi.x, xi.m, w, cp.set)) return std::nullopt;
    if (sim.flow_priority && in_flow_set(xi.x, xi.m, w, cp.set)) {
        // Flow priority: jump only once flowing can no longer continue, i.e.
        // the flowed state would leave the flow set.
        const HybridState probe = step_flow(xi, w, cp, sim.h);
        if (w.in_free_workspace(probe.x, kSafetyTol) &&
            in_flow_set(probe.x, xi.m, w, cp.set))
            return std::nullopt;
    }
    HybridState next = xi;
    next.m = mode_update_L(xi, w, cp);
    next.k = obstacle_update_N(xi, w, cp);
    dwell.last_jump_time = t;
    return next;
}

struct RunSetup {
    WorldModel world;
    ControllerParams controller;
    SimConfig sim;
    Vec2 start;
};

// Direction vector resolving x0 onto the half-line L_>=(0, nu_1(s)).
inline Vec2 auto_direction_vector(const Vec2& x0) {
    if (x0.norm() == 0.0) return {0.0, -1.0};
    return rotate_orthogonal(x0, -1).normalized();
}

namespace detail {

inline void record(HybridTrajectory& traj, double t, int j, const HybridState& xi,
                   const WorldModel& w, const ControllerParams& cp) {
    TrajectorySample s;
    s.t = t;
    s.j = j;
    s.xi = xi;
    s.u = control_input(xi, w, cp);
    s.d_min = w.distance_to_obstacles(xi.x);
    traj.samples.push_back(s);
}

}  // namespace detail

// Known-map execution of the hybrid closed loop.
inline HybridTrajectory run(const RunSetup& setup) {
    const WorldModel& w = setup.world;
    const ControllerParams& cp = setup.controller;
    const SimConfig& sim = setup.sim;

    HybridTrajectory traj;
    HybridState xi{setup.start, 0, 0};
    double t = 0.0;
    int j = 0;
    DwellBookkeeping dwell;

    detail::record(traj, t, j, xi, w, cp);
    while (t < sim.max_time) {
        if (xi.x.norm() <= sim.convergence_radius) {
            traj.termination = Termination::Converged;
            return traj;
        }
        if (auto jumped = try_jump(xi, w, cp, sim, t, dwell)) {
            ++j;
            traj.jumps.push_back({t, j, xi, *jumped,
                                  xi.m == 0 ? "enter_avoidance" : "exit_avoidance"});
            xi = *jumped;
            detail::record(traj, t, j, xi, w, cp);
            // Indefinite mode alternation at a fixed position (Zeno pattern,
            // reachable only with jump priority and zero dwell).
            if (traj.jumps.size() >= 101) {
                const auto& first = traj.jumps[traj.jumps.size() - 101];
                if (first.t == t) {
                    traj.termination = Termination::ZenoStopped;
                    return traj;
                }
            }
            continue;
        }
        HybridState next = step_flow(xi, w, cp, sim.h);
        double advanced = sim.h;
        const bool dwell_ok = t - dwell.last_jump_time >= sim.dwell;
        if (dwell_ok && in_flow_set(xi.x, xi.m, w, cp.set) &&
            w.in_free_workspace(next.x, kSafetyTol) &&
            !in_flow_set(next.x, xi.m, w, cp.set)) {
            // Localize the flow-set exit by bisection, stopping just past the
            // boundary so the jump predicate holds there. The tight tolerance
            // keeps the control discontinuity across the ensuing jump small.
            double lo = 0.0, hi = sim.h;
            while (hi - lo > sim.h / 8192.0) {
                const double mid = 0.5 * (lo + hi);
                const HybridState probe = step_flow(xi, w, cp, mid);
                if (w.in_free_workspace(probe.x, kSafetyTol) &&
                    in_flow_set(probe.x, xi.m, w, cp.set))
                    lo = mid;
                else
                    hi = mid;
            }
            next = step_flow(xi, w, cp, hi);
            advanced = hi;
        }
        xi = next;
        t += advanced;
        if (!w.in_free_workspace(xi.x, kSafetyTol)) {
            traj.termination = Termination::SafetyViolation;
            detail::record(traj, t, j, xi, w, cp);
            return traj;
        }
        detail::record(traj, t, j, xi, w, cp);
    }
    traj.termination = xi.x.norm() <= sim.convergence_radius ? Termination::Converged
                                                             : Termination::MaxTime;
    return traj;
}

struct SensorRunSetup {
    WorldModel world;
    ControllerParams controller;  // eps_s/eps act as pre-trigger defaults
    SimConfig sim;
    SensorConfig sensor;
    Vec2 start;
    double p_frac = 0.5;
    double adaptive_eps_floor = 0.05;  // guard against noise-driven tiny layers
};

// Sensor-based execution: jump decisions and the rotational control component
// come from scan data only; the world model is used solely to synthesize
// measurements and to audit safety.
inline HybridTrajectory run_sensor_based(const SensorRunSetup& setup) {
    const WorldModel& w = setup.world;
    const SimConfig& sim = setup.sim;
    const SensorConfig& sensor = setup.sensor;
    ControllerParams cp = setup.controller;

    HybridTrajectory traj;
    HybridState xi{setup.start, 0, 0};
    double t = 0.0;
    int j = 0;
    DwellBookkeeping dwell;
    std::mt19937_64 rng(sensor.rng_seed);

    // Beyond this true distance a scan cannot influence any decision, so the
    // simulator skips synthesizing it.
    const double scan_reach =
        w.r_a() + cp.set.eps_d + 0.1 + 6.0 * sensor.noise_std;

    const auto record = [&](const Vec2& u) {
        TrajectorySample s;
        s.t = t;
        s.j = j;
        s.xi = xi;
        s.u = u;
        s.d_min = w.distance_to_obstacles(xi.x);
        traj.samples.push_back(s);
    };

    Vec2 u{0, 0};
    while (t < sim.max_time) {
        if (xi.x.norm() <= sim.convergence_radius) {
            traj.termination = Termination::Converged;
            record(xi.x * -cp.gamma);
            return traj;
        }
        const double d_true = w.distance_to_obstacles(xi.x);
        std::optional<ScanMeasurement> meas;
        if (d_true <= scan_reach) meas = scan(xi.x, w, sensor, rng);

        const bool dwell_ok = t - dwell.last_jump_time >= sim.dwell;
        if (dwell_ok && meas) {
            const auto decision =
                sensor_jump_membership(xi.x, xi.m, *meas, sensor, w.r_a(),
                                       cp.set.eps_d, setup.p_frac, cp.set.eps);
            if (decision.in_jump) {
                const HybridState before = xi;
                if (xi.m == 0) {
                    const double eps_s = std::max(*decision.eps_s,
                                                  setup.adaptive_eps_floor);
                    cp.set.eps_s = std::min(eps_s, cp.set.eps_d * (1.0 - 1e-6));
                    cp.set.eps = setup.p_frac * cp.set.eps_s;
                    xi.m = direction_decision(xi.x, cp);
                    xi.k = w.nearest_obstacle(xi.x).index;  // bookkeeping only
                } else {
                    xi.m = 0;
                }
                ++j;
                dwell.last_jump_time = t;
                traj.jumps.push_back({t, j, before, xi,
                                      before.m == 0 ? "enter_avoidance"
                                                    : "exit_avoidance"});
                // The post-jump sample is recorded on the next iteration with
                // the refreshed control value.
                continue;
            }
        }

        double d_meas = sensor.max_range;
        std::optional<Vec2> proj;
        if (meas) {
            const auto mr = min_range_and_bearing(*meas);
            d_meas = mr.d_min;
            if (mr.theta_star) proj = sensed_projection(*meas);
        }

        // Control from measured quantities only.
        const double rho = d_meas - w.r_a();
        const double kap = xi.m == 0 ? 1.0 : eta(rho, cp.set);
        u = xi.x * (-cp.gamma * kap);
        if (kap < 1.0 && proj)
            u += rotational_vector_from_projection(xi.x, xi.m, *proj) *
                 (cp.gamma * (1.0 - kap));
        record(u);
        xi.x += u * sim.h;
        t += sim.h;
        if (!w.in_free_workspace(xi.x, kSafetyTol)) {
            traj.termination = Termination::SafetyViolation;
            record(u);
            return traj;
        }
    }
    traj.termination = xi.x.norm() <= sim.convergence_radius ? Termination::Converged
                                                             : Termination::MaxTime;
    return traj;
}

struct HalflineCrossing {
    double t = 0.0;
    int j = 0;
    double norm = 0.0;
};

// Transversal crossings of the half-line L_>(0, dir) by consecutive samples.
// Sliding along the line does not count; sign changes through it do.
inline std::vector<HalflineCrossing> halfline_crossings_dir(
    const HybridTrajectory& traj, const Vec2& dir_raw) {
    const Vec2 dir = dir_raw.normalized();
    std::vector<HalflineCrossing> crossings;
    int last_sign = 0;
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        const Vec2& a = traj.samples[i - 1].xi.x;
        const Vec2& b = traj.samples[i].xi.x;
        const double pa = dir.cross(a);
        const double pb = dir.cross(b);
        const double tol = 1e-12 * std::max(1.0, std::max(a.norm(), b.norm()));
        const int sb = pb > tol ? 1 : (pb < -tol ? -1 : 0);
        if (sb == 0) continue;
        if (last_sign != 0 && sb != last_sign) {
            const double denom = pa - pb;
            const double alpha = denom == 0.0 ? 0.5 : pa / denom;
            const Vec2 p = a + (b - a) * alpha;
            if (p.dot(dir) > kSetTol) {
                crossings.push_back({traj.samples[i].t, traj.samples[i].j, p.norm()});
            }
        }
        last_sign = sb;
    }
    return crossings;
}

// Crossings of L_>(0, nu_1(s)) and L_>(0, nu_-1(s)).
struct HalflineReport {
    std::vector<HalflineCrossing> forward;   // nu_1(s)
    std::vector<HalflineCrossing> backward;  // nu_-1(s)
};

inline HalflineReport halfline_crossings(const HybridTrajectory& traj, const Vec2& s) {
    return {halfline_crossings_dir(traj, rotate_orthogonal(s, 1)),
            halfline_crossings_dir(traj, rotate_orthogonal(s, -1))};
}

}  // namespace hybnav
