#pragma once

#include <cmath>
#include <optional>
#include <span>

#include "maxsum/errors.hpp"

namespace maxsum {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
    friend constexpr Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Point, Point) = default;
};

constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
constexpr Point midpoint(Point a, Point b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Throws InvalidInput if either coordinate is NaN or infinite.
void require_finite(Point p, const char* what = "point");

/// Euclidean distance.
inline double dist(Point p, Point q) { return norm(p - q); }

/// Default absolute tolerance for containment predicates on an instance of the given diameter.
inline double default_tolerance(double diameter) { return 1e-9 * (1.0 + diameter); }

/// Diameter of the axis-aligned bounding box of a point set (its diagonal length).
double bounding_diagonal(std::span<const Point> points);

/// Closed disk whose diameter is the segment between two distinct points.
class Disk {
public:
    Disk(Point focus_a, Point focus_b);

    Point focus_a() const { return a_; }
    Point focus_b() const { return b_; }
    Point center() const { return midpoint(a_, b_); }
    double radius() const { return 0.5 * dist(a_, b_); }

private:
    Point a_;
    Point b_;
};

/// Closed region { z : |a - z| + |b - z| <= lambda |a - b| } bounded by an ellipse with foci a, b.
class EllipseRegion {
public:
    EllipseRegion(Point focus_a, Point focus_b, double lambda);

    Point focus_a() const { return a_; }
    Point focus_b() const { return b_; }
    double lambda() const { return lambda_; }
    Point center() const { return midpoint(a_, b_); }
    double focal_distance() const { return dist(a_, b_); }
    double semi_major() const { return 0.5 * lambda_ * focal_distance(); }
    double semi_minor() const { return 0.5 * focal_distance() * std::sqrt(lambda_ * lambda_ - 1.0); }
    double focal_half_distance() const { return 0.5 * focal_distance(); }
    /// Angle of the focal axis (a -> b) measured from the x axis.
    double axis_angle() const { return std::atan2(b_.y - a_.y, b_.x - a_.x); }

    double focal_sum(Point z) const { return dist(a_, z) + dist(b_, z); }

    /// Boundary point at parameter t in the center frame: (A cos t, B sin t) rotated onto the focal axis.
    Point boundary_point(double t) const;

private:
    Point a_;
    Point b_;
    double lambda_;
};

bool ellipse_contains(const EllipseRegion& e, Point z, double tol);
bool disk_contains(const Disk& d, Point z, double tol);
bool disks_intersect(const Disk& d1, const Disk& d2, double tol);

/// Angle p-z-q in [0, pi]. Throws if z coincides with p or q.
double vertex_angle(Point p, Point z, Point q);

/// Unit bisector of the rays o->p and o->q; nullopt when o lies on the open segment pq.
/// Throws InvalidInput when o coincides with p or q.
std::optional<Point> bisector_direction(Point o, Point p, Point q);

/// Difference between the angles the rays o->focus_a and o->focus_b make with the tangent line at o.
/// The tangent comes from the implicit conic normal in the focal frame, not from the bisector.
/// Throws InvalidInput when the focal sum at o is farther than tol from lambda * d, or when lambda = 1.
double reflection_residual(const EllipseRegion& e, Point o, double tol);

}  // namespace maxsum
