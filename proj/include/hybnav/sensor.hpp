#pragma once

// Simulated 360-degree range-bearing sensor and the sensor-side jump-set
// identification pipeline (scan clustering, partial boundary extraction,
// corridor test).

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "hybnav/geometry.hpp"
#include "hybnav/regions.hpp"
#include "hybnav/world.hpp"

namespace hybnav {

struct SensorConfig {
    double max_range = 1.5;                      // R_s
    double angular_resolution = kPi / 360.0;     // 0.5 degrees
    double noise_std = 0.0;                      // meters
    std::uint64_t rng_seed = 0;
    double gap_threshold = 0.6;                  // cluster split, default 2r

    std::size_t beam_count() const {
        return static_cast<std::size_t>(std::llround(2.0 * kPi / angular_resolution));
    }
};

struct ScanMeasurement {
    Vec2 pose;
    double max_range = 1.5;
    std::vector<double> bearings;  // theta over [-pi, pi)
    std::vector<double> ranges;    // r_g clipped to [0, max_range]
};

struct ScanCluster {
    double theta_lo = 0.0;
    double theta_hi = 0.0;
    std::vector<std::size_t> beams;  // beam indices, in sweep order
};

// One full scan: per-beam min over obstacles of ray_cast, clipped to R_s,
// with optional additive Gaussian noise on returning beams.
inline ScanMeasurement scan(const Vec2& x, const WorldModel& w,
                            const SensorConfig& cfg, std::mt19937_64& rng) {
    const std::size_t n = cfg.beam_count();
    if (n < 8) throw std::invalid_argument("scan: need at least 8 beams");
    ScanMeasurement m;
    m.pose = x;
    m.max_range = cfg.max_range;
    m.bearings.resize(n);
    m.ranges.assign(n, cfg.max_range);

    // Obstacles that could possibly return a beam.
    std::vector<const ConvexShape*> candidates;
    for (const auto& o : w.obstacles()) {
        const double reach = (x - o.interior_point()).norm() - o.bounding_radius();
        if (reach <= cfg.max_range) candidates.push_back(&o);
    }

    std::normal_distribution<double> noise(0.0, cfg.noise_std);
    for (std::size_t i = 0; i < n; ++i) {
        const double theta = -kPi + (2.0 * kPi * static_cast<double>(i)) / n;
        m.bearings[i] = theta;
        double r = cfg.max_range;
        for (const auto* o : candidates) {
            if (auto t = ray_cast(x, theta, *o)) r = std::min(r, *t);
        }
        if (r < cfg.max_range && cfg.noise_std > 0.0) {
            r += noise(rng);
            r = std::clamp(r, 0.0, cfg.max_range);
        }
        m.ranges[i] = r;
    }
    return m;
}

struct MinRange {
    double d_min;
    std::optional<double> theta_star;
    std::size_t beam = 0;
};

// d(x, O_W) and the minimizing bearing; (R_s, none) when nothing is in range.
inline MinRange min_range_and_bearing(const ScanMeasurement& m) {
    if (m.ranges.empty()) throw std::invalid_argument("min_range_and_bearing: empty scan");
    MinRange result{m.max_range, std::nullopt, 0};
    for (std::size_t i = 0; i < m.ranges.size(); ++i) {
        if (m.ranges[i] < result.d_min) {
            result.d_min = m.ranges[i];
            result.theta_star = m.bearings[i];
            result.beam = i;
        }
    }
    return result;
}

// Cartesian detection point lambda(x, theta).
inline Vec2 scan_point(const ScanMeasurement& m, std::size_t beam) {
    return m.pose + Vec2{std::cos(m.bearings[beam]), std::sin(m.bearings[beam])} *
                        m.ranges[beam];
}

// Pi(x, O_k) estimated from the minimizing beam.
inline Vec2 sensed_projection(const ScanMeasurement& m) {
    const auto mr = min_range_and_bearing(m);
    if (!mr.theta_star)
        throw std::domain_error("sensed_projection: no obstacle in range");
    return m.pose + Vec2{std::cos(*mr.theta_star), std::sin(*mr.theta_star)} * mr.d_min;
}

// Maximal runs of returning beams, split at large range discontinuities;
// wraparound at +/-pi handled as one cluster.
inline std::vector<ScanCluster> segment_scan(const ScanMeasurement& m,
                                             const SensorConfig& cfg) {
    const std::size_t n = m.ranges.size();
    std::vector<ScanCluster> clusters;
    ScanCluster current;
    auto flush = [&] {
        if (!current.beams.empty()) {
            current.theta_lo = m.bearings[current.beams.front()];
            current.theta_hi = m.bearings[current.beams.back()];
            clusters.push_back(std::move(current));
            current = ScanCluster{};
        }
    };
    for (std::size_t i = 0; i < n; ++i) {
        const bool hit = m.ranges[i] < m.max_range - kSetTol;
        if (!hit) {
            flush();
            continue;
        }
        if (!current.beams.empty() &&
            std::abs(m.ranges[i] - m.ranges[current.beams.back()]) > cfg.gap_threshold)
            flush();
        current.beams.push_back(i);
    }
    flush();
    // Merge a wraparound pair: last cluster ending at the final beam with the
    // first cluster starting at beam 0.
    if (clusters.size() >= 2 && clusters.front().beams.front() == 0 &&
        clusters.back().beams.back() == n - 1 &&
        std::abs(m.ranges[0] - m.ranges[n - 1]) <= cfg.gap_threshold) {
        ScanCluster merged = std::move(clusters.back());
        clusters.pop_back();
        for (auto b : clusters.front().beams) merged.beams.push_back(b);
        merged.theta_lo = m.bearings[merged.beams.front()];
        merged.theta_hi = m.bearings[merged.beams.back()];
        clusters.erase(clusters.begin());
        clusters.push_back(std::move(merged));
    }
    return clusters;
}

// The unique cluster containing the minimizing bearing.
inline const ScanCluster& closest_cluster(const std::vector<ScanCluster>& clusters,
                                          const ScanMeasurement& m,
                                          std::size_t min_beam) {
    for (const auto& c : clusters)
        for (auto b : c.beams)
            if (b == min_beam) return c;
    (void)m;
    throw std::logic_error("closest_cluster: minimizing beam not in any cluster");
}

// Partial boundary points of the cluster's obstacle, in sweep order.
inline std::vector<Vec2> partial_boundary(const ScanMeasurement& m,
                                          const ScanCluster& cluster) {
    std::vector<Vec2> points;
    points.reserve(cluster.beams.size());
    for (auto b : cluster.beams) points.push_back(scan_point(m, b));
    return points;
}

// Width-2 r_a corridor from x to the origin; vertices x_{-1}, x_{+1},
// 0_{+1}, 0_{-1}.
inline std::array<Vec2, 4> corridor_rectangle(const Vec2& x, double r_a) {
    if (x.x == 0.0 && x.y == 0.0)
        throw std::domain_error("corridor_rectangle: x at the origin");
    const double theta_d = kPi / 2.0 + std::atan2(x.y, x.x);
    const Vec2 off{r_a * std::cos(theta_d), r_a * std::sin(theta_d)};
    return {x - off, x + off, off, -off};
}

inline bool point_in_convex_quad(const Vec2& p, const std::array<Vec2, 4>& quad) {
    int sign = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        const Vec2& a = quad[i];
        const Vec2& b = quad[(i + 1) % 4];
        const double c = (b - a).cross(p - a);
        if (c > kSetTol) {
            if (sign < 0) return false;
            sign = 1;
        } else if (c < -kSetTol) {
            if (sign > 0) return false;
            sign = -1;
        }
    }
    return true;
}

struct SensorJumpDecision {
    bool in_jump = false;
    // Adaptive layers reported when a move-to-target jump triggers.
    std::optional<double> eps_s;
    std::optional<double> eps;
};

namespace detail {

// True when some sample of the sensed partial boundary of the closest
// obstacle obstructs the corridor of half-width `width` between x and the
// target.
inline bool corridor_obstructed(const Vec2& x, const ScanMeasurement& m_scan,
                                const SensorConfig& cfg, std::size_t min_beam,
                                double width) {
    const auto clusters = segment_scan(m_scan, cfg);
    const auto& cluster = closest_cluster(clusters, m_scan, min_beam);
    const auto boundary = partial_boundary(m_scan, cluster);
    const auto box = corridor_rectangle(x, width);
    for (const auto& p : boundary)
        if (point_in_convex_quad(p, box)) return true;
    return false;
}

}  // namespace detail

// Sensor-side jump-set membership: the decision tree of the sensor-based
// identification procedure. p_frac picks eps = p_frac * eps_s on a
// move-to-target trigger; eps is the active inner layer used for the
// avoidance-mode enlarged-front test.
inline SensorJumpDecision sensor_jump_membership(const Vec2& x, int m,
                                                 const ScanMeasurement& m_scan,
                                                 const SensorConfig& cfg,
                                                 double r_a, double eps_d,
                                                 double p_frac = 0.5,
                                                 double eps = 0.0) {
    SensorJumpDecision decision;
    const auto mr = min_range_and_bearing(m_scan);
    const bool far = !mr.theta_star || mr.d_min > r_a + eps_d;
    if (m == 0) {
        if (far) return decision;  // not in J_0
        const Vec2 proj = sensed_projection(m_scan);
        if (x.dot(x - proj) <= 0.0) return decision;  // back region
        if (detail::corridor_obstructed(x, m_scan, cfg, mr.beam, r_a)) {
            decision.in_jump = true;
            decision.eps_s = mr.d_min - r_a;
            decision.eps = p_frac * *decision.eps_s;
        }
        return decision;
    }
    // Avoidance modes. Exits happen in the far field, in the back region, or
    // in the opposite-rotation side region away from the enlarged front.
    if (far) {
        decision.in_jump = true;
        return decision;
    }
    const Vec2 proj = sensed_projection(m_scan);
    if (x.dot(x - proj) <= 0.0) {
        decision.in_jump = true;
        return decision;
    }
    const double angle = signed_angle(x, x - proj);
    const bool opposite_side = m == 1 ? (angle >= 0.0 && angle <= kPi / 2)
                                      : (angle <= 0.0 && angle >= -kPi / 2);
    if (opposite_side &&
        !detail::corridor_obstructed(x, m_scan, cfg, mr.beam, r_a + eps))
        decision.in_jump = true;
    return decision;
}

}  // namespace hybnav
