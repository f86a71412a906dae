#pragma once

// 2D convex geometry primitives: projections, distances, dilations,
// rotations, angle measurement and segment/ray queries against compact
// convex shapes (discs and convex polygons).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace hybnav {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double norm_sq() const { return x * x + y * y; }

    Vec2 normalized() const {
        const double n = norm();
        if (n == 0.0) throw std::domain_error("cannot normalize zero vector");
        return {x / n, y / n};
    }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

struct Disc {
    Vec2 center;
    double radius = 1.0;
};

struct Polygon {
    // Counter-clockwise vertex order, strictly convex in the weak sense.
    std::vector<Vec2> vertices;
};

// Orthogonal rotation nu_z: z = +1 clockwise, z = -1 counter-clockwise.
inline Vec2 rotate_orthogonal(const Vec2& p, int z) {
    if (p.x == 0.0 && p.y == 0.0)
        throw std::domain_error("rotate_orthogonal: zero vector");
    if (z != 1 && z != -1)
        throw std::invalid_argument("rotate_orthogonal: z must be +1 or -1");
    return {z * p.y, -z * p.x};
}

// Signed angle from p to q in (-pi, pi], counter-clockwise positive.
inline double signed_angle(const Vec2& p, const Vec2& q) {
    if ((p.x == 0.0 && p.y == 0.0) || (q.x == 0.0 && q.y == 0.0))
        throw std::domain_error("signed_angle: zero vector");
    const double a = std::atan2(p.cross(q), p.dot(q));
    return a == -kPi ? kPi : a;
}

// Closest point of segment [a, b] to q.
inline Vec2 closest_point_on_segment(const Vec2& q, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len_sq = ab.norm_sq();
    if (len_sq == 0.0) return a;
    double t = (q - a).dot(ab) / len_sq;
    t = std::clamp(t, 0.0, 1.0);
    return a + ab * t;
}

inline double segment_point_distance(const Vec2& q, const Vec2& a, const Vec2& b) {
    return (q - closest_point_on_segment(q, a, b)).norm();
}

namespace detail {

// q strictly inside or on the boundary of a CCW convex polygon.
inline bool polygon_contains(const Polygon& poly, const Vec2& q) {
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = poly.vertices[i];
        const Vec2& b = poly.vertices[(i + 1) % n];
        if ((b - a).cross(q - a) < 0.0) return false;
    }
    return true;
}

inline Vec2 polygon_project(const Polygon& poly, const Vec2& q) {
    if (polygon_contains(poly, q)) return q;
    const std::size_t n = poly.vertices.size();
    double best = std::numeric_limits<double>::infinity();
    Vec2 best_p;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 p = closest_point_on_segment(q, poly.vertices[i],
                                                poly.vertices[(i + 1) % n]);
        const double d = (q - p).norm_sq();
        if (d < best) {
            best = d;
            best_p = p;
        }
    }
    return best_p;
}

// Minimum distance between segments [a1,b1] and [a2,b2].
inline double segment_segment_distance(const Vec2& a1, const Vec2& b1,
                                       const Vec2& a2, const Vec2& b2) {
    const Vec2 d1 = b1 - a1, d2 = b2 - a2;
    const double denom = d1.cross(d2);
    if (denom != 0.0) {
        const Vec2 r = a2 - a1;
        const double t = r.cross(d2) / denom;
        const double u = r.cross(d1) / denom;
        if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) return 0.0;
    }
    double best = segment_point_distance(a1, a2, b2);
    best = std::min(best, segment_point_distance(b1, a2, b2));
    best = std::min(best, segment_point_distance(a2, a1, b1));
    best = std::min(best, segment_point_distance(b2, a1, b1));
    return best;
}

}  // namespace detail

class ConvexShape {
public:
    explicit ConvexShape(Disc d) : shape_(std::move(d)) {
        if (std::get<Disc>(shape_).radius <= 0.0)
            throw std::invalid_argument("Disc radius must be positive");
    }

    explicit ConvexShape(Polygon p) : shape_(std::move(p)) {
        const auto& v = std::get<Polygon>(shape_).vertices;
        const std::size_t n = v.size();
        if (n < 3) throw std::invalid_argument("Polygon needs >= 3 vertices");
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 e1 = v[(i + 1) % n] - v[i];
            const Vec2 e2 = v[(i + 2) % n] - v[(i + 1) % n];
            if (e1.norm() == 0.0)
                throw std::invalid_argument("Polygon has duplicate vertices");
            if (e1.cross(e2) < 0.0)
                throw std::invalid_argument("Polygon must be convex and CCW");
        }
    }

    static ConvexShape disc(Vec2 center, double radius) {
        return ConvexShape(Disc{center, radius});
    }
    static ConvexShape polygon(std::vector<Vec2> vertices) {
        return ConvexShape(Polygon{std::move(vertices)});
    }

    bool is_disc() const { return std::holds_alternative<Disc>(shape_); }
    const Disc& as_disc() const { return std::get<Disc>(shape_); }
    const Polygon& as_polygon() const { return std::get<Polygon>(shape_); }

    bool contains(const Vec2& q) const {
        if (is_disc()) {
            const auto& d = as_disc();
            return (q - d.center).norm() <= d.radius;
        }
        return detail::polygon_contains(as_polygon(), q);
    }

    // A point guaranteed to lie inside the shape.
    Vec2 interior_point() const {
        if (is_disc()) return as_disc().center;
        Vec2 c{0, 0};
        for (const auto& v : as_polygon().vertices) c += v;
        return c / static_cast<double>(as_polygon().vertices.size());
    }

    // Conservative bounding radius about interior_point().
    double bounding_radius() const {
        if (is_disc()) return as_disc().radius;
        const Vec2 c = interior_point();
        double r = 0.0;
        for (const auto& v : as_polygon().vertices) r = std::max(r, (v - c).norm());
        return r;
    }

private:
    std::variant<Disc, Polygon> shape_;
};

// Euclidean projection Pi(q, shape); unique by convexity. Returns q when inside.
inline Vec2 project_point(const Vec2& q, const ConvexShape& shape) {
    if (shape.is_disc()) {
        const auto& d = shape.as_disc();
        const Vec2 rel = q - d.center;
        const double n = rel.norm();
        if (n <= d.radius) return q;
        return d.center + rel * (d.radius / n);
    }
    return detail::polygon_project(shape.as_polygon(), q);
}

inline double distance_to(const Vec2& q, const ConvexShape& shape) {
    return (q - project_point(q, shape)).norm();
}

// Projection on the r-dilation D_r(shape), computed via collinearity of q,
// Pi(q, shape) and Pi(q, D_r(shape)); never materializes the dilated set.
inline Vec2 project_dilated(const Vec2& q, const ConvexShape& shape, double r) {
    if (r < 0.0) throw std::invalid_argument("project_dilated: r must be >= 0");
    const Vec2 p = project_point(q, shape);
    const Vec2 rel = q - p;
    const double d = rel.norm();
    if (r > d) throw std::invalid_argument("project_dilated: r exceeds d(q, shape)");
    if (r == 0.0 || d == 0.0) return p;
    return p + rel * (r / d);
}

// Exact minimum of d(p, shape) over p in the segment [a, b].
inline double segment_distance_to(const Vec2& a, const Vec2& b,
                                  const ConvexShape& shape) {
    if (shape.is_disc()) {
        const auto& d = shape.as_disc();
        return std::max(0.0, segment_point_distance(d.center, a, b) - d.radius);
    }
    const auto& poly = shape.as_polygon();
    if (detail::polygon_contains(poly, a) || detail::polygon_contains(poly, b))
        return 0.0;
    const std::size_t n = poly.vertices.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        best = std::min(best, detail::segment_segment_distance(
                                  a, b, poly.vertices[i], poly.vertices[(i + 1) % n]));
        if (best == 0.0) return 0.0;
    }
    return best;
}

// True iff segment [a, b] meets the open interior of D_r(shape).
inline bool segment_intersects_dilated(const Vec2& a, const Vec2& b,
                                       const ConvexShape& shape, double r) {
    if (r < 0.0) throw std::invalid_argument("segment_intersects_dilated: r < 0");
    const double d = segment_distance_to(a, b, shape);
    if (r == 0.0) {
        // Interior of the shape itself: the segment must penetrate it.
        if (d > 0.0) return false;
        // d == 0 may be a mere boundary touch; probe the midpoint of the
        // overlap by checking whether any strictly interior contact exists.
        const int kProbe = 64;
        for (int i = 1; i < kProbe; ++i) {
            const Vec2 p = a + (b - a) * (static_cast<double>(i) / kProbe);
            if (shape.is_disc()) {
                const auto& dc = shape.as_disc();
                if ((p - dc.center).norm() < dc.radius) return true;
            } else if (detail::polygon_contains(shape.as_polygon(), p) &&
                       distance_to(p, shape) == 0.0) {
                // On or inside; treat boundary-only contact as non-interior.
                const std::size_t n = shape.as_polygon().vertices.size();
                bool strict = true;
                for (std::size_t e = 0; e < n; ++e) {
                    const Vec2& va = shape.as_polygon().vertices[e];
                    const Vec2& vb = shape.as_polygon().vertices[(e + 1) % n];
                    if ((vb - va).cross(p - va) == 0.0) { strict = false; break; }
                }
                if (strict) return true;
            }
        }
        return false;
    }
    return d < r;
}

// Smallest t >= 0 with origin + t (cos theta, sin theta) on the shape boundary.
inline std::optional<double> ray_cast(const Vec2& origin, double theta,
                                      const ConvexShape& shape) {
    const Vec2 dir{std::cos(theta), std::sin(theta)};
    if (shape.is_disc()) {
        const auto& d = shape.as_disc();
        const Vec2 rel = origin - d.center;
        if (rel.norm() < d.radius)
            throw std::domain_error("ray_cast: origin inside shape");
        const double b = rel.dot(dir);
        const double c = rel.norm_sq() - d.radius * d.radius;
        const double disc = b * b - c;
        if (disc < 0.0) return std::nullopt;
        const double t = -b - std::sqrt(disc);
        if (t < 0.0) return std::nullopt;
        return t;
    }
    const auto& poly = shape.as_polygon();
    if (detail::polygon_contains(poly, origin) && distance_to(origin, shape) == 0.0) {
        // Interior check: boundary origins are allowed (t = 0).
        bool on_boundary = false;
        const std::size_t nn = poly.vertices.size();
        for (std::size_t e = 0; e < nn; ++e) {
            if (segment_point_distance(origin, poly.vertices[e],
                                       poly.vertices[(e + 1) % nn]) == 0.0) {
                on_boundary = true;
                break;
            }
        }
        if (!on_boundary) throw std::domain_error("ray_cast: origin inside shape");
    }
    const std::size_t n = poly.vertices.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = poly.vertices[i];
        const Vec2& b = poly.vertices[(i + 1) % n];
        const Vec2 e = b - a;
        const double denom = dir.cross(e);
        if (denom == 0.0) continue;
        const Vec2 r = a - origin;
        const double t = r.cross(e) / denom;
        const double u = r.cross(dir) / denom;
        if (t >= 0.0 && u >= 0.0 && u <= 1.0) best = std::min(best, t);
    }
    if (!std::isfinite(best)) return std::nullopt;
    return best;
}

}  // namespace hybnav
