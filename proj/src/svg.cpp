#include "maxsum/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace maxsum {

namespace {

constexpr double kMarginFraction = 0.15;
constexpr double kRayLength = 0.12 * kCanvasSize;

struct Frame {
    double scale = 1.0;
    double cx = 0.0;
    double cy = 0.0;

    double x(double wx) const { return 0.5 * kCanvasSize + scale * (wx - cx); }
    double y(double wy) const { return 0.5 * kCanvasSize - scale * (wy - cy); }
};

Frame make_frame(const Instance& inst) {
    std::vector<Point> all(inst.red());
    all.insert(all.end(), inst.blue().begin(), inst.blue().end());
    double xmin = all.front().x, xmax = xmin, ymin = all.front().y, ymax = ymin;
    for (Point p : all) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    double extent = std::max(xmax - xmin, ymax - ymin);
    if (extent <= 0.0) extent = 1.0;
    Frame f;
    f.scale = kCanvasSize / (extent * (1.0 + 2.0 * kMarginFraction));
    f.cx = 0.5 * (xmin + xmax);
    f.cy = 0.5 * (ymin + ymax);
    return f;
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

}  // namespace

std::string render_svg(const Instance& inst, const Matching& m, const std::optional<CenterCertificate>& center,
                       double lambda) {
    const Frame f = make_frame(inst);
    const auto segments = matched_segments(inst, m);
    std::ostringstream out;
    out << fmt("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\">\n",
               kCanvasSize, kCanvasSize, kCanvasSize, kCanvasSize);
    out << fmt("<rect x=\"0\" y=\"0\" width=\"%d\" height=\"%d\" fill=\"#ffffff\"/>\n", kCanvasSize, kCanvasSize);

    out << "<g id=\"disks\" fill=\"none\" stroke=\"#7f9fbf\" stroke-width=\"1\" stroke-dasharray=\"4 3\">\n";
    for (const Segment& s : segments) {
        const Disk d(s.a, s.b);
        out << fmt("  <circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\"/>\n", f.x(d.center().x), f.y(d.center().y),
                   f.scale * d.radius());
    }
    out << "</g>\n";

    out << fmt("<g id=\"ellipses\" fill=\"none\" stroke=\"#555555\" stroke-width=\"1.2\" data-lambda=\"%.17g\">\n",
               lambda);
    for (const Segment& s : segments) {
        const EllipseRegion e(s.a, s.b, lambda);
        const double degrees = 0.0 - e.axis_angle() * 180.0 / std::numbers::pi;  // 0 - x avoids printing -0
        const double ex = f.x(e.center().x), ey = f.y(e.center().y);
        out << fmt("  <ellipse cx=\"%.3f\" cy=\"%.3f\" rx=\"%.3f\" ry=\"%.3f\" transform=\"rotate(%.4f %.3f %.3f)\"/>\n",
                   ex, ey, f.scale * e.semi_major(), f.scale * e.semi_minor(), degrees, ex, ey);
    }
    out << "</g>\n";

    out << "<g id=\"matching\" stroke=\"#222222\" stroke-width=\"1.5\">\n";
    for (const Segment& s : segments) {
        out << fmt("  <line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\"/>\n", f.x(s.a.x), f.y(s.a.y), f.x(s.b.x),
                   f.y(s.b.y));
    }
    out << "</g>\n";

    out << "<g id=\"red\" fill=\"#d62728\">\n";
    for (Point p : inst.red()) out << fmt("  <circle cx=\"%.3f\" cy=\"%.3f\" r=\"4\"/>\n", f.x(p.x), f.y(p.y));
    out << "</g>\n<g id=\"blue\" fill=\"#1f77b4\">\n";
    for (Point p : inst.blue()) out << fmt("  <circle cx=\"%.3f\" cy=\"%.3f\" r=\"4\"/>\n", f.x(p.x), f.y(p.y));
    out << "</g>\n";

    if (center) {
        const Point o = center->center;
        out << "<g id=\"center\" stroke=\"#2ca02c\" stroke-width=\"1.5\">\n";
        for (const Segment& s : segments) {
            if (o == s.a || o == s.b) continue;
            const auto dir = bisector_direction(o, s.a, s.b);
            if (!dir) continue;
            out << fmt("  <line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\"/>\n", f.x(o.x), f.y(o.y),
                       f.x(o.x) + kRayLength * dir->x, f.y(o.y) - kRayLength * dir->y);
        }
        out << fmt("  <circle cx=\"%.3f\" cy=\"%.3f\" r=\"5\" fill=\"#2ca02c\"/>\n", f.x(o.x), f.y(o.y));
        out << "</g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace maxsum
