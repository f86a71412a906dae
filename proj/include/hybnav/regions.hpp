#pragma once

// Membership predicates for the mode-switching geometry: back/gate/front/side
// partition of each obstacle's tubular neighbourhood and the per-mode flow and
// jump sets built from it. All distance comparisons carry a fixed slack so the
// closed sets of the construction stay closed under floating point.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "hybnav/geometry.hpp"
#include "hybnav/world.hpp"

namespace hybnav {

// Set-membership tolerance; closures realized as <= with this slack.
inline constexpr double kSetTol = 1e-9;
// Angular half-width of the explicit gate label band.
inline constexpr double kGateTol = 1e-6;

struct SetParams {
    double eps_d = 0.35;
    double eps_s = 0.2;
    double eps = 0.1;

    bool valid() const { return 0.0 < eps && eps < eps_s && eps_s < eps_d; }
};

enum class RegionKind { Exterior, Back, GateMinus, GatePlus, Front, SideMinus, SidePlus };

struct RegionLabel {
    RegionKind kind = RegionKind::Exterior;
    std::size_t obstacle = 0;
    double band_distance = 0.0;  // d(x, O_i) - r_a
};

namespace detail {

struct TubeQuery {
    double d;      // d(x, O_i)
    Vec2 proj;     // Pi(x, O_i)
    double dot;    // x . (x - proj)
};

inline TubeQuery tube_query(const Vec2& x, const ConvexShape& shape) {
    TubeQuery q;
    q.proj = project_point(x, shape);
    q.d = (x - q.proj).norm();
    q.dot = x.dot(x - q.proj);
    return q;
}

inline bool in_tube(const TubeQuery& q, double r_a, double eps_d) {
    return q.d >= r_a - kSetTol && q.d <= r_a + eps_d + kSetTol;
}

}  // namespace detail

// Back region R_b^i: tube points with x . (x - Pi(x, O_i)) <= 0.
inline bool in_back_region(const Vec2& x, const ConvexShape& shape, double r_a,
                           const SetParams& p) {
    const auto q = detail::tube_query(x, shape);
    return detail::in_tube(q, r_a, p.eps_d) && q.dot <= kSetTol;
}

// Front region R_f^i: tube points whose segment to the origin meets the open
// r_a-dilation. closed = true realizes the closure.
inline bool in_front_region(const Vec2& x, const ConvexShape& shape, double r_a,
                            const SetParams& p, bool closed = false) {
    const auto q = detail::tube_query(x, shape);
    if (!detail::in_tube(q, r_a, p.eps_d)) return false;
    const double sd = segment_distance_to(x, {0, 0}, shape);
    return closed ? sd <= r_a + kSetTol : sd < r_a;
}

// Enlarged front region ER_f^i against the (r_a + eps)-dilation.
inline bool in_enlarged_front_region(const Vec2& x, const ConvexShape& shape,
                                     double r_a, const SetParams& p,
                                     bool closed = false) {
    const auto q = detail::tube_query(x, shape);
    if (!detail::in_tube(q, r_a, p.eps_d)) return false;
    const double sd = segment_distance_to(x, {0, 0}, shape);
    return closed ? sd <= r_a + p.eps + kSetTol : sd < r_a + p.eps;
}

// Side region R_m^i, m in {-1, 1}: tube minus back and front, selected by the
// sign of the angle from x to the outward normal.
inline bool in_side_region(const Vec2& x, int m, const ConvexShape& shape,
                           double r_a, const SetParams& p) {
    const auto q = detail::tube_query(x, shape);
    if (!detail::in_tube(q, r_a, p.eps_d)) return false;
    if (q.dot <= -kSetTol) return false;                      // back
    if (in_front_region(x, shape, r_a, p)) return false;      // front
    if (x.norm() == 0.0 || q.d == 0.0) return false;
    const double a = signed_angle(x, x - q.proj);
    return m == 1 ? (a >= -kPi / 2 - kGateTol && a <= kGateTol)
                  : (a >= -kGateTol && a <= kPi / 2 + kGateTol);
}

// Diagnostic classification of one obstacle's tubular neighbourhood; the gate
// band is assigned its own label, everything else follows Back > Front > Side.
inline RegionLabel classify_region(const Vec2& x, std::size_t i, const WorldModel& w,
                                   const SetParams& p) {
    const auto& shape = w.obstacles().at(i);
    const double r_a = w.r_a();
    const auto q = detail::tube_query(x, shape);
    RegionLabel label;
    label.obstacle = i;
    label.band_distance = q.d - r_a;
    if (q.d < r_a - kSetTol)
        throw std::domain_error("classify_region: position inside unsafe region");
    if (q.d > r_a + p.eps_d + kSetTol) {
        label.kind = RegionKind::Exterior;
        return label;
    }
    if (x.norm() > 0.0 && q.d > 0.0) {
        const double a = signed_angle(x, x - q.proj);
        if (std::abs(a - kPi / 2) <= kGateTol) {
            label.kind = RegionKind::GateMinus;  // alpha = +pi/2 <=> m = -1
            return label;
        }
        if (std::abs(a + kPi / 2) <= kGateTol) {
            label.kind = RegionKind::GatePlus;
            return label;
        }
    }
    if (q.dot <= kSetTol) {
        label.kind = RegionKind::Back;
        return label;
    }
    if (in_front_region(x, shape, r_a, p)) {
        label.kind = RegionKind::Front;
        return label;
    }
    const double a = signed_angle(x, x - q.proj);
    label.kind = a <= 0.0 ? RegionKind::SidePlus : RegionKind::SideMinus;
    return label;
}

// Per-obstacle flow set of the move-to-target mode:
// F_0^i = (W_ra \ D_{ra+eps_s}^o) u R_-1^i u R_1^i u R_b^i.
inline bool in_flow_set_m0(const Vec2& x, const ConvexShape& shape, double r_a,
                           const SetParams& p) {
    const auto q = detail::tube_query(x, shape);
    if (q.d >= r_a + p.eps_s - kSetTol) return true;
    if (q.d < r_a - kSetTol) return false;
    if (q.dot <= kSetTol) return true;  // back
    return in_side_region(x, 1, shape, r_a, p) || in_side_region(x, -1, shape, r_a, p);
}

// Per-obstacle jump set of the move-to-target mode:
// J_0^i = D_{ra+eps_s}(O_i) n closure(R_f^i).
inline bool in_jump_set_m0(const Vec2& x, const ConvexShape& shape, double r_a,
                           const SetParams& p) {
    const auto q = detail::tube_query(x, shape);
    if (q.d > r_a + p.eps_s + kSetTol) return false;
    return in_front_region(x, shape, r_a, p, /*closed=*/true);
}

// Per-obstacle flow set of the avoidance mode:
// F_m^i = R_m^i u closure(ER_f^i \ R_b^i).
inline bool in_flow_set_avoid(const Vec2& x, int m, const ConvexShape& shape,
                              double r_a, const SetParams& p) {
    if (in_side_region(x, m, shape, r_a, p)) return true;
    const auto q = detail::tube_query(x, shape);
    if (!detail::in_tube(q, r_a, p.eps_d)) return false;
    if (q.dot < -kSetTol) return false;  // interior of the back region
    return in_enlarged_front_region(x, shape, r_a, p, /*closed=*/true);
}

// Per-obstacle jump set of the avoidance mode:
// J_m^i = (W_ra \ D_{ra+eps_d}^o) u R_b^i u (R_-m^i \ ER_f^i).
inline bool in_jump_set_avoid(const Vec2& x, int m, const ConvexShape& shape,
                              double r_a, const SetParams& p) {
    const auto q = detail::tube_query(x, shape);
    if (q.d >= r_a + p.eps_d - kSetTol) return true;
    if (q.d < r_a - kSetTol) return false;
    if (q.dot <= kSetTol) return true;  // back
    return in_side_region(x, -m, shape, r_a, p) &&
           !in_enlarged_front_region(x, shape, r_a, p);
}

// Composite flow set F_m over all obstacles.
inline bool in_flow_set(const Vec2& x, int m, const WorldModel& w, const SetParams& p) {
    const double r_a = w.r_a();
    if (!w.in_free_workspace(x, kSetTol))
        throw std::domain_error("in_flow_set: position outside W_ra");
    if (m == 0) {
        for (const auto& o : w.obstacles())
            if (!in_flow_set_m0(x, o, r_a, p)) return false;
        return true;
    }
    for (const auto& o : w.obstacles())
        if (in_flow_set_avoid(x, m, o, r_a, p)) return true;
    return false;
}

// Composite jump set J_m over all obstacles.
inline bool in_jump_set(const Vec2& x, int m, const WorldModel& w, const SetParams& p) {
    const double r_a = w.r_a();
    if (!w.in_free_workspace(x, kSetTol))
        throw std::domain_error("in_jump_set: position outside W_ra");
    if (m == 0) {
        for (const auto& o : w.obstacles())
            if (in_jump_set_m0(x, o, r_a, p)) return true;
        return false;
    }
    for (const auto& o : w.obstacles())
        if (!in_jump_set_avoid(x, m, o, r_a, p)) return false;
    return true;
}

namespace detail {

// Parameterization of the boundary of D_y(polygon): offset edges joined by
// vertex arcs. Returns the boundary point and its projection on the base
// polygon for parameter t in [0, total_length).
struct DilatedBoundary {
    const Polygon& poly;
    double y;
    struct Piece {
        bool arc;
        Vec2 a, b;        // edge endpoints (offset) or unused for arcs
        Vec2 vertex;      // arc center
        double ang0, ang1;  // arc angular sweep (CCW)
        double length;
    };
    std::vector<Piece> pieces;
    double total_length = 0.0;

    DilatedBoundary(const Polygon& p_, double y_) : poly(p_), y(y_) {
        const auto& v = poly.vertices;
        const std::size_t n = v.size();
        std::vector<Vec2> normals(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 e = v[(i + 1) % n] - v[i];
            normals[i] = rotate_orthogonal(e, 1).normalized();  // outward for CCW
        }
        for (std::size_t i = 0; i < n; ++i) {
            Piece edge;
            edge.arc = false;
            edge.a = v[i] + normals[i] * y;
            edge.b = v[(i + 1) % n] + normals[i] * y;
            edge.vertex = v[i];
            edge.length = (edge.b - edge.a).norm();
            pieces.push_back(edge);
            // Arc at vertex i+1 from normals[i] to normals[i+1].
            const std::size_t j = (i + 1) % n;
            Piece arc;
            arc.arc = true;
            arc.vertex = v[j];
            arc.ang0 = std::atan2(normals[i].y, normals[i].x);
            arc.ang1 = std::atan2(normals[j].y, normals[j].x);
            double sweep = arc.ang1 - arc.ang0;
            while (sweep < 0.0) sweep += 2.0 * kPi;
            arc.ang1 = arc.ang0 + sweep;
            arc.length = y * sweep;
            pieces.push_back(arc);
        }
        for (const auto& piece : pieces) total_length += piece.length;
    }

    // Boundary point q(t) and its base projection Pi(q, poly).
    std::pair<Vec2, Vec2> at(double t) const {
        double s = std::fmod(t, total_length);
        if (s < 0.0) s += total_length;
        for (const auto& piece : pieces) {
            if (s <= piece.length) {
                if (!piece.arc) {
                    const double u = piece.length == 0.0 ? 0.0 : s / piece.length;
                    const Vec2 q = piece.a + (piece.b - piece.a) * u;
                    const Vec2 base =
                        q - (piece.a - piece.vertex);  // same offset along the edge
                    return {q, base};
                }
                const double ang =
                    piece.ang0 + (piece.length == 0.0 ? 0.0 : s / y);
                const Vec2 q = piece.vertex + Vec2{std::cos(ang), std::sin(ang)} * y;
                return {q, piece.vertex};
            }
            s -= piece.length;
        }
        return at(0.0);
    }
};

}  // namespace detail

// Farthest-from-origin point of the gate curve G_m^i on the y-dilated obstacle
// boundary. Closed form for discs (Thales-circle intersection); for polygons a
// dense scan of the dilated boundary with bisection refinement.
inline Vec2 gate_extreme_point(double y, int m, std::size_t i, const WorldModel& w) {
    if (m != 1 && m != -1)
        throw std::invalid_argument("gate_extreme_point: m must be +/-1");
    const auto& shape = w.obstacles().at(i);
    if (shape.is_disc()) {
        const auto& d = shape.as_disc();
        const Vec2 c = d.center;
        const double R = d.radius + y;
        const double cn = c.norm();
        if (cn <= R)
            throw std::domain_error("gate_extreme_point: target inside dilated obstacle");
        const Vec2 u = c / cn;
        const Vec2 u_perp{-u.y, u.x};
        const double cosw = -R / cn;
        const double sinw = std::sqrt(1.0 - cosw * cosw);
        // Branch sign: cross(q, q - Pi) must equal -m in sign.
        const Vec2 wdir = u * cosw + u_perp * (sinw * static_cast<double>(-m));
        return c + wdir * R;
    }
    detail::DilatedBoundary boundary(shape.as_polygon(), y);
    const auto f = [&](double t) {
        const auto [q, base] = boundary.at(t);
        return q.dot(q - base);
    };
    const int kSamples = 16384;
    const double L = boundary.total_length;
    double best_norm = -1.0;
    Vec2 best_q;
    double prev_t = 0.0;
    double prev_f = f(0.0);
    for (int s = 1; s <= kSamples; ++s) {
        const double t = L * static_cast<double>(s) / kSamples;
        const double ft = f(t);
        if ((prev_f <= 0.0) != (ft <= 0.0)) {
            double lo = prev_t, hi = t;
            double flo = prev_f;
            while (hi - lo > 1e-9) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f(mid);
                if ((flo <= 0.0) != (fm <= 0.0)) hi = mid;
                else { lo = mid; flo = fm; }
            }
            const auto [q, base] = boundary.at(0.5 * (lo + hi));
            const double cr = q.cross(q - base);
            if (cr * static_cast<double>(-m) > 0.0 && q.norm() > best_norm) {
                best_norm = q.norm();
                best_q = q;
            }
        }
        prev_t = t;
        prev_f = ft;
    }
    if (best_norm < 0.0)
        throw std::domain_error("gate_extreme_point: gate curve not found");
    return best_q;
}

}  // namespace hybnav
