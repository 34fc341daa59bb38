#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "maxsum/geometry.hpp"

namespace maxsum {

struct Box {
    double xmin = 0.0;
    double xmax = 0.0;
    double ymin = 0.0;
    double ymax = 0.0;
};

Box bounding_box(std::span<const Point> points);

struct MinimaxResult {
    Point argmin;
    double value = 0.0;
    std::size_t evaluations = 0;
};

/// Minimizes a convex function over an axis-aligned box by nested golden-section search:
/// the outer search runs over x on h(x) = min_y f(x, y), which is convex whenever f is.
/// Needs no derivatives, so kinks of a pointwise maximum are harmless.
MinimaxResult minimize_convex(const std::function<double(Point)>& f, const Box& box);

}  // namespace maxsum
