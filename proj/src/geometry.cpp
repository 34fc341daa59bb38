#include "maxsum/geometry.hpp"

#include <algorithm>
#include <string>

namespace maxsum {

namespace {

constexpr double kDegenerateBisector = 1e-12;

Point unit(Point v) {
    const double n = norm(v);
    return {v.x / n, v.y / n};
}

void require_distinct(Point a, Point b, const char* what) {
    if (a == b) {
        throw InvalidInput(std::string(what) + ": defining points coincide");
    }
}

}  // namespace

void require_finite(Point p, const char* what) {
    if (!is_finite(p)) {
        throw InvalidInput(std::string(what) + " has a non-finite coordinate");
    }
}

double bounding_diagonal(std::span<const Point> points) {
    if (points.empty()) {
        return 0.0;
    }
    double xmin = points.front().x, xmax = xmin;
    double ymin = points.front().y, ymax = ymin;
    for (const Point& p : points) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    return std::hypot(xmax - xmin, ymax - ymin);
}

Disk::Disk(Point focus_a, Point focus_b) : a_(focus_a), b_(focus_b) {
    require_finite(a_, "disk focus");
    require_finite(b_, "disk focus");
    require_distinct(a_, b_, "disk");
}

EllipseRegion::EllipseRegion(Point focus_a, Point focus_b, double lambda)
    : a_(focus_a), b_(focus_b), lambda_(lambda) {
    require_finite(a_, "ellipse focus");
    require_finite(b_, "ellipse focus");
    require_distinct(a_, b_, "ellipse");
    if (!std::isfinite(lambda_) || lambda_ < 1.0) {
        throw InvalidInput("ellipse lambda must be a finite value >= 1");
    }
}

Point EllipseRegion::boundary_point(double t) const {
    const double big = semi_major();
    const double small = semi_minor();
    const double phi = axis_angle();
    const double lx = big * std::cos(t);
    const double ly = small * std::sin(t);
    const Point c = center();
    return {c.x + lx * std::cos(phi) - ly * std::sin(phi),
            c.y + lx * std::sin(phi) + ly * std::cos(phi)};
}

bool ellipse_contains(const EllipseRegion& e, Point z, double tol) {
    require_finite(z, "query point");
    return e.focal_sum(z) <= e.lambda() * e.focal_distance() + tol;
}

bool disk_contains(const Disk& d, Point z, double tol) {
    require_finite(z, "query point");
    return dist(z, d.center()) <= d.radius() + tol;
}

bool disks_intersect(const Disk& d1, const Disk& d2, double tol) {
    return dist(d1.center(), d2.center()) <= d1.radius() + d2.radius() + tol;
}

double vertex_angle(Point p, Point z, Point q) {
    require_distinct(p, z, "angle");
    require_distinct(q, z, "angle");
    const Point u = p - z;
    const Point v = q - z;
    return std::atan2(std::abs(cross(u, v)), dot(u, v));
}

std::optional<Point> bisector_direction(Point o, Point p, Point q) {
    if (o == p || o == q) {
        throw InvalidInput("bisector undefined: apex coincides with a focus");
    }
    const Point sum = unit(p - o) + unit(q - o);
    const double n = norm(sum);
    if (n < kDegenerateBisector) {
        return std::nullopt;
    }
    return Point{sum.x / n, sum.y / n};
}

double reflection_residual(const EllipseRegion& e, Point o, double tol) {
    require_finite(o, "boundary point");
    if (e.lambda() <= 1.0) {
        throw InvalidInput("reflection residual undefined for a degenerate ellipse");
    }
    const double excess = e.focal_sum(o) - e.lambda() * e.focal_distance();
    if (std::abs(excess) > tol) {
        throw InvalidInput("point is not on the ellipse boundary");
    }
    // Implicit normal of x^2/A^2 + y^2/B^2 = 1 in the focal frame.
    const double phi = e.axis_angle();
    const Point axis{std::cos(phi), std::sin(phi)};
    const Point perp{-axis.y, axis.x};
    const Point rel = o - e.center();
    const double lx = dot(rel, axis);
    const double ly = dot(rel, perp);
    const double big = e.semi_major();
    const double small = e.semi_minor();
    const Point local_normal{lx / (big * big), ly / (small * small)};
    const Point normal = local_normal.x * axis + local_normal.y * perp;
    const Point tangent{-normal.y, normal.x};

    auto line_angle = [&](Point focus) {
        const Point ray = focus - o;
        return std::atan2(std::abs(cross(tangent, ray)), std::abs(dot(tangent, ray)));
    };
    return std::abs(line_angle(e.focus_a()) - line_angle(e.focus_b()));
}

}  // namespace maxsum
