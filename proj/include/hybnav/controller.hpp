#pragma once

// Hybrid control law u(x, m) and the discrete mode/obstacle update laws.

#include <cstddef>
#include <stdexcept>

#include "hybnav/geometry.hpp"
#include "hybnav/regions.hpp"
#include "hybnav/world.hpp"

namespace hybnav {

struct ControllerParams {
    double gamma = 0.2;        // control gain
    Vec2 s{0.0, -1.0};         // direction-decision vector, nonzero
    SetParams set;             // eps_d > eps_s > eps > 0
    int tie_rule = 1;          // mode chosen when x.s == 0

    bool valid() const { return gamma > 0.0 && s.norm() > 0.0 && set.valid(); }
};

struct HybridState {
    Vec2 x;
    int m = 0;             // mode in {-1, 0, 1}
    std::size_t k = 0;     // avoided-obstacle index
};

// rho(x) = d(x, O_W) - r_a.
inline double proximity(const Vec2& x, const WorldModel& w) {
    return w.distance_to_obstacles(x) - w.r_a();
}

// Piecewise-linear blend: 0 below eps, 1 above eps_s.
inline double eta(double rho, const SetParams& p) {
    if (rho >= p.eps_s) return 1.0;
    if (rho <= p.eps) return 0.0;
    return (rho - p.eps) / (p.eps_s - p.eps);
}

// kappa(x, m) = 1 + m^2 (eta(rho(x)) - 1).
inline double kappa(const Vec2& x, int m, const WorldModel& w, const SetParams& p) {
    if (m == 0) return 1.0;
    return eta(proximity(x, w), p);
}

// Rotational vector v(x, m): the outward normal of the nearest obstacle
// rotated by m, scaled to ||x||.
inline Vec2 rotational_vector(const Vec2& x, int m, const WorldModel& w) {
    if (m != 1 && m != -1)
        throw std::invalid_argument("rotational_vector: m must be +/-1");
    const auto nearest = w.nearest_obstacle(x);
    const Vec2 normal = x - nearest.projection;
    if (normal.norm() == 0.0)
        throw std::domain_error("rotational_vector: x on obstacle boundary");
    return rotate_orthogonal(normal.normalized(), m) * x.norm();
}

// Same rotational vector from an externally supplied projection (sensor path).
inline Vec2 rotational_vector_from_projection(const Vec2& x, int m,
                                              const Vec2& projection) {
    const Vec2 normal = x - projection;
    if (normal.norm() == 0.0)
        throw std::domain_error("rotational_vector: x on obstacle boundary");
    return rotate_orthogonal(normal.normalized(), m) * x.norm();
}

// u(x, m) = -gamma kappa x + gamma (1 - kappa) v(x, m). The rotational part is
// evaluated only when kappa < 1, where the projection is unique.
inline Vec2 control_input(const HybridState& xi, const WorldModel& w,
                          const ControllerParams& cp) {
    const double kap = kappa(xi.x, xi.m, w, cp.set);
    Vec2 u = xi.x * (-cp.gamma * kap);
    if (kap < 1.0) u += rotational_vector(xi.x, xi.m, w) * (cp.gamma * (1.0 - kap));
    return u;
}

// Direction-decision map M(x): sign of x.s; ties resolved by tie_rule.
inline int direction_decision(const Vec2& x, const ControllerParams& cp) {
    const double d = x.dot(cp.s);
    if (d > kSetTol) return 1;
    if (d < -kSetTol) return -1;
    return cp.tie_rule;
}

// Mode update L: avoidance modes reset to 0; mode 0 picks a rotation sense.
inline int mode_update_L(const HybridState& xi, const WorldModel& w,
                         const ControllerParams& cp) {
    if (!in_jump_set(xi.x, xi.m, w, cp.set))
        throw std::logic_error("mode_update_L: state not in jump set");
    if (xi.m != 0) return 0;
    return direction_decision(xi.x, cp);
}

// Obstacle-index update N: on a mode-0 jump, switch to the obstacle whose
// per-obstacle jump set contains x; otherwise keep k.
inline std::size_t obstacle_update_N(const HybridState& xi, const WorldModel& w,
                                     const ControllerParams& cp) {
    if (xi.m != 0) {
        if (!in_jump_set(xi.x, xi.m, w, cp.set))
            throw std::logic_error("obstacle_update_N: state not in jump set");
        return xi.k;
    }
    for (std::size_t i = 0; i < w.size(); ++i)
        if (in_jump_set_m0(xi.x, w.obstacles()[i], w.r_a(), cp.set)) return i;
    throw std::logic_error("obstacle_update_N: no obstacle jump set contains x");
}

}  // namespace hybnav
