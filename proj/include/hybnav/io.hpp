#pragma once

// CSV and JSON artifact writers for simulator runs.

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "hybnav/hybrid_sim.hpp"
#include "hybnav/sensor.hpp"

namespace hybnav {

namespace detail {

inline std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace detail

inline void write_trajectory_csv(std::ostream& out, const HybridTrajectory& traj) {
    out << "t,j,x,y,m,k,ux,uy,dmin\n";
    for (const auto& s : traj.samples) {
        out << detail::fmt9(s.t) << ',' << s.j << ','
            << detail::fmt9(s.xi.x.x) << ',' << detail::fmt9(s.xi.x.y) << ','
            << s.xi.m << ',' << s.xi.k << ','
            << detail::fmt9(s.u.x) << ',' << detail::fmt9(s.u.y) << ','
            << detail::fmt9(s.d_min) << '\n';
    }
}

inline void write_jump_csv(std::ostream& out, const HybridTrajectory& traj) {
    out << "t,j,m_old,m_new,k_old,k_new,trigger\n";
    for (const auto& r : traj.jumps) {
        out << detail::fmt9(r.t) << ',' << r.j << ','
            << r.before.m << ',' << r.after.m << ','
            << r.before.k << ',' << r.after.k << ','
            << r.trigger << '\n';
    }
}

inline void write_scan_csv(std::ostream& out, const ScanMeasurement& scan) {
    out << "theta_rad,range_m\n";
    for (std::size_t i = 0; i < scan.bearings.size(); ++i)
        out << detail::fmt9(scan.bearings[i]) << ','
            << detail::fmt9(scan.ranges[i]) << '\n';
}

inline const char* termination_name(Termination t) {
    switch (t) {
        case Termination::Converged: return "converged";
        case Termination::MaxTime: return "max_time";
        case Termination::SafetyViolation: return "safety_violation";
        case Termination::ZenoStopped: return "zeno_stopped";
    }
    return "unknown";
}

inline nlohmann::json run_summary(const HybridTrajectory& traj, const Vec2& start,
                                  const Vec2& s) {
    nlohmann::json j;
    j["start"] = {start.x, start.y};
    j["termination"] = termination_name(traj.termination);
    j["converged"] = traj.converged();
    if (!traj.samples.empty()) {
        const auto& last = traj.samples.back();
        j["final_time"] = last.t;
        j["final_norm"] = last.xi.x.norm();
        j["jump_count"] = last.j;
    }
    j["min_clearance"] = traj.min_clearance();
    const HalflineReport halflines = halfline_crossings(traj, s);
    nlohmann::json fwd = nlohmann::json::array();
    for (const auto& c : halflines.forward) fwd.push_back(c.norm);
    j["forward_crossing_norms"] = fwd;
    j["backward_crossing_count"] = halflines.backward.size();
    return j;
}

}  // namespace hybnav
