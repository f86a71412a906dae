#pragma once

// Self-contained SVG rendering of a run: obstacles, dilation layers,
// trajectory colored by mode, half-lines of the direction vector.

#include <algorithm>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hybnav/hybrid_sim.hpp"
#include "hybnav/regions.hpp"
#include "hybnav/world.hpp"

namespace hybnav {

class SvgCanvas {
  public:
    SvgCanvas(double xmin, double xmax, double ymin, double ymax, int width = 900)
        : xmin_(xmin), ymin_(ymin), width_(width) {
        scale_ = width / std::max(xmax - xmin, 1e-9);
        height_ = static_cast<int>(scale_ * (ymax - ymin)) + 1;
        ymax_ = ymax;
    }

    double px(double x) const { return (x - xmin_) * scale_; }
    double py(double y) const { return (ymax_ - y) * scale_; }

    void circle(const Vec2& c, double r, const std::string& style) {
        body_ << "<circle cx=\"" << px(c.x) << "\" cy=\"" << py(c.y)
              << "\" r=\"" << r * scale_ << "\" " << style << "/>\n";
    }

    void polyline(const std::vector<Vec2>& pts, const std::string& style,
                  bool close = false) {
        if (pts.empty()) return;
        body_ << (close ? "<polygon points=\"" : "<polyline points=\"");
        for (const auto& p : pts) body_ << px(p.x) << ',' << py(p.y) << ' ';
        body_ << "\" " << style << "/>\n";
    }

    void line(const Vec2& a, const Vec2& b, const std::string& style) {
        body_ << "<line x1=\"" << px(a.x) << "\" y1=\"" << py(a.y)
              << "\" x2=\"" << px(b.x) << "\" y2=\"" << py(b.y) << "\" "
              << style << "/>\n";
    }

    void text(const Vec2& at, const std::string& msg) {
        body_ << "<text x=\"" << px(at.x) << "\" y=\"" << py(at.y)
              << "\" font-size=\"12\" font-family=\"sans-serif\">" << msg
              << "</text>\n";
    }

    void write(std::ostream& out) const {
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_
            << "\" height=\"" << height_ << "\" viewBox=\"0 0 " << width_ << ' '
            << height_ << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
            << body_.str() << "</svg>\n";
    }

  private:
    double xmin_, ymin_, ymax_, scale_;
    int width_, height_;
    std::ostringstream body_;
};

namespace detail {

// Closed outline of the y-dilation of a shape, as a sampled polyline.
inline std::vector<Vec2> dilated_outline(const ConvexShape& shape, double y,
                                         int samples = 256) {
    std::vector<Vec2> pts;
    pts.reserve(samples);
    if (shape.is_disc()) {
        const Disc& d = shape.as_disc();
        for (int i = 0; i < samples; ++i) {
            const double a = 2.0 * kPi * i / samples;
            pts.push_back(d.center + Vec2{std::cos(a), std::sin(a)} * (d.radius + y));
        }
        return pts;
    }
    const Polygon& p = shape.as_polygon();
    if (y <= 0.0) return p.vertices;
    const DilatedBoundary boundary(p, y);
    for (int i = 0; i < samples; ++i)
        pts.push_back(boundary.at(boundary.total_length * i / samples).first);
    return pts;
}

}  // namespace detail

struct PlotLayers {
    double r_a = 0.0;     // hard safety radius
    double eps = 0.0;     // inner blend layer
    double eps_s = 0.0;   // sensing/trigger layer
    double eps_d = 0.0;   // detachment layer
};

inline void render_run_svg(std::ostream& out, const WorldModel& world,
                           const HybridTrajectory& traj, const Vec2& s,
                           const PlotLayers& layers) {
    double xmin = -1, xmax = 1, ymin = -1, ymax = 1;
    auto grow = [&](const Vec2& p, double pad) {
        xmin = std::min(xmin, p.x - pad);
        xmax = std::max(xmax, p.x + pad);
        ymin = std::min(ymin, p.y - pad);
        ymax = std::max(ymax, p.y + pad);
    };
    for (const auto& o : world.obstacles()) {
        const Vec2 c = o.interior_point();
        grow(c, o.bounding_radius() + layers.eps_d + 0.5);
    }
    for (const auto& sm : traj.samples) grow(sm.xi.x, 0.5);

    SvgCanvas canvas(xmin, xmax, ymin, ymax);

    // Half-lines of the direction vector through the target.
    const Vec2 sd = s.normalized();
    const double span = 2.0 * std::max(xmax - xmin, ymax - ymin);
    canvas.line({0, 0}, sd * span,
                "stroke=\"#bbbbbb\" stroke-width=\"1\" stroke-dasharray=\"6 4\"");
    canvas.line({0, 0}, sd * -span,
                "stroke=\"#dddddd\" stroke-width=\"1\" stroke-dasharray=\"2 4\"");

    struct Layer {
        double y;
        const char* style;
    };
    const Layer rings[] = {
        {layers.eps_d, "fill=\"none\" stroke=\"#c8e6c9\" stroke-width=\"1\""},
        {layers.eps_s, "fill=\"none\" stroke=\"#90caf9\" stroke-width=\"1\""},
        {layers.eps, "fill=\"none\" stroke=\"#ffcc80\" stroke-width=\"1\""},
        {0.0, "fill=\"none\" stroke=\"#e57373\" stroke-width=\"1.5\""},
    };
    for (const auto& o : world.obstacles()) {
        canvas.polyline(detail::dilated_outline(o, 0.0), "fill=\"#9e9e9e\" stroke=\"#616161\"",
                        true);
        for (const auto& ring : rings) {
            const double y = layers.r_a + ring.y;
            if (y <= 0.0) continue;
            canvas.polyline(detail::dilated_outline(o, y), ring.style, true);
        }
    }

    // Trajectory split into mode-constant segments.
    const char* mode_color[] = {"#7b1fa2", "#1565c0", "#2e7d32"};  // m = -1, 0, 1
    std::vector<Vec2> seg;
    int cur_m = traj.samples.empty() ? 0 : traj.samples.front().xi.m;
    auto flush = [&]() {
        if (seg.size() > 1) {
            std::string style = std::string("fill=\"none\" stroke=\"") +
                                mode_color[cur_m + 1] + "\" stroke-width=\"1.8\"";
            canvas.polyline(seg, style);
        }
        seg.clear();
    };
    for (const auto& sm : traj.samples) {
        if (sm.xi.m != cur_m) {
            seg.push_back(sm.xi.x);
            flush();
            cur_m = sm.xi.m;
        }
        seg.push_back(sm.xi.x);
    }
    flush();

    if (!traj.samples.empty()) {
        canvas.circle(traj.samples.front().xi.x, 0.08, "fill=\"#1565c0\"");
        canvas.text(traj.samples.front().xi.x + Vec2{0.15, 0.15}, "start");
    }
    canvas.circle({0, 0}, 0.08, "fill=\"#2e7d32\"");
    canvas.text(Vec2{0.15, 0.15}, "target");

    canvas.write(out);
}

}  // namespace hybnav
