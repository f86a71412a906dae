#pragma once

// Obstacle set plus robot parameters, feasibility validation and
// nearest-obstacle queries.

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "hybnav/geometry.hpp"

namespace hybnav {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Exact distance between two compact convex shapes.
inline double shape_distance(const ConvexShape& a, const ConvexShape& b) {
    if (a.is_disc() && b.is_disc()) {
        const auto& da = a.as_disc();
        const auto& db = b.as_disc();
        return std::max(0.0, (da.center - db.center).norm() - da.radius - db.radius);
    }
    if (a.is_disc()) return std::max(0.0, distance_to(a.as_disc().center, b) - a.as_disc().radius);
    if (b.is_disc()) return std::max(0.0, distance_to(b.as_disc().center, a) - b.as_disc().radius);
    const auto& pa = a.as_polygon().vertices;
    const auto& pb = b.as_polygon().vertices;
    for (const auto& v : pa)
        if (b.contains(v)) return 0.0;
    for (const auto& v : pb)
        if (a.contains(v)) return 0.0;
    double best = kInfinity;
    for (std::size_t i = 0; i < pa.size(); ++i)
        for (std::size_t j = 0; j < pb.size(); ++j)
            best = std::min(best, detail::segment_segment_distance(
                                      pa[i], pa[(i + 1) % pa.size()],
                                      pb[j], pb[(j + 1) % pb.size()]));
    return best;
}

struct NearestObstacle {
    std::size_t index = 0;
    double distance = kInfinity;
    Vec2 projection;
};

class WorldModel {
public:
    WorldModel(std::vector<ConvexShape> obstacles, double robot_radius,
               double safety_margin)
        : obstacles_(std::move(obstacles)),
          robot_radius_(robot_radius),
          safety_margin_(safety_margin) {}

    const std::vector<ConvexShape>& obstacles() const { return obstacles_; }
    std::size_t size() const { return obstacles_.size(); }
    double robot_radius() const { return robot_radius_; }
    double safety_margin() const { return safety_margin_; }
    double r_a() const { return robot_radius_ + safety_margin_; }

    // min_{i != j} d(O_i, O_j); +inf when fewer than two obstacles.
    double min_pairwise_separation() const {
        double best = kInfinity;
        for (std::size_t i = 0; i < obstacles_.size(); ++i)
            for (std::size_t j = i + 1; j < obstacles_.size(); ++j)
                best = std::min(best, shape_distance(obstacles_[i], obstacles_[j]));
        return best;
    }

    double target_clearance() const {
        double best = kInfinity;
        for (const auto& o : obstacles_) best = std::min(best, distance_to({0, 0}, o));
        return best;
    }

    // bar r_s = min{ bar r / 2 - r, d(0, O_W) - r }.
    double r_s_bar() const {
        return std::min(min_pairwise_separation() / 2.0 - robot_radius_,
                        target_clearance() - robot_radius_);
    }

    double distance_to_obstacles(const Vec2& x) const {
        double best = kInfinity;
        for (const auto& o : obstacles_) best = std::min(best, distance_to(x, o));
        return best;
    }

    // Ties resolved towards the smallest index.
    NearestObstacle nearest_obstacle(const Vec2& x) const {
        NearestObstacle result;
        for (std::size_t i = 0; i < obstacles_.size(); ++i) {
            const double d = distance_to(x, obstacles_[i]);
            if (d < result.distance) {
                result.index = i;
                result.distance = d;
                result.projection = project_point(x, obstacles_[i]);
            }
        }
        return result;
    }

    bool in_free_workspace(const Vec2& x, double tol = 0.0) const {
        return distance_to_obstacles(x) >= r_a() - tol;
    }

private:
    std::vector<ConvexShape> obstacles_;
    double robot_radius_;
    double safety_margin_;
};

struct ValidationIssue {
    std::string code;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool valid() const { return issues.empty(); }
};

// Checks Assumption-1 style feasibility plus the layering constraints on
// eps_d. Returns structured violations, never throws.
inline ValidationReport validate_world(const WorldModel& w, double eps_d) {
    ValidationReport report;
    const double sep = w.min_pairwise_separation();
    if (sep <= 2.0 * w.robot_radius())
        report.issues.push_back(
            {"obstacle_separation",
             "pairwise obstacle separation " + std::to_string(sep) +
                 " must exceed 2r = " + std::to_string(2.0 * w.robot_radius())});
    const double clearance = w.target_clearance();
    if (clearance - w.robot_radius() <= 0.0)
        report.issues.push_back(
            {"target_clearance",
             "target must be at distance > r from the obstacles"});
    const double rsb = w.r_s_bar();
    if (!(w.safety_margin() > 0.0 && w.safety_margin() < rsb))
        report.issues.push_back(
            {"safety_margin", "r_s must lie in (0, " + std::to_string(rsb) + ")"});
    if (!(eps_d > 0.0 && eps_d < rsb - w.safety_margin()))
        report.issues.push_back(
            {"eps_d", "eps_d must lie in (0, " +
                          std::to_string(rsb - w.safety_margin()) + ")"});
    if (clearance <= w.r_a() + eps_d)
        report.issues.push_back(
            {"target_band",
             "target must be at distance > r_a + eps_d from the obstacles"});
    return report;
}

}  // namespace hybnav
