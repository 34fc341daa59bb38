#include "maxsum/minimax.hpp"

#include <algorithm>
#include <cmath>

namespace maxsum {

namespace {

constexpr int kMaxGoldenSteps = 200;
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

struct LineMin {
    double arg;
    double value;
};

/// Golden-section search for a convex function of one variable; returns the best evaluated point.
template <typename F>
LineMin golden_min(F&& f, double lo, double hi, std::size_t& evaluations) {
    const double floor_width = 4e-16 * std::max({1.0, std::abs(lo), std::abs(hi)});
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    evaluations += 2;
    LineMin best = f1 <= f2 ? LineMin{x1, f1} : LineMin{x2, f2};
    for (int step = 0; step < kMaxGoldenSteps && (b - a) > floor_width; ++step) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
            if (f1 < best.value) best = {x1, f1};
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
            if (f2 < best.value) best = {x2, f2};
        }
        ++evaluations;
    }
    // The endpoints are never sampled by the interior probes.
    for (double end : {lo, hi}) {
        const double v = f(end);
        ++evaluations;
        if (v < best.value) best = {end, v};
    }
    return best;
}

}  // namespace

Box bounding_box(std::span<const Point> points) {
    Box box;
    if (points.empty()) return box;
    box.xmin = box.xmax = points.front().x;
    box.ymin = box.ymax = points.front().y;
    for (const Point& p : points) {
        box.xmin = std::min(box.xmin, p.x);
        box.xmax = std::max(box.xmax, p.x);
        box.ymin = std::min(box.ymin, p.y);
        box.ymax = std::max(box.ymax, p.y);
    }
    return box;
}

MinimaxResult minimize_convex(const std::function<double(Point)>& f, const Box& box) {
    MinimaxResult result;
    bool have_best = false;
    auto profile = [&](double x) {
        const LineMin m = golden_min([&](double y) { return f({x, y}); }, box.ymin, box.ymax, result.evaluations);
        if (!have_best || m.value < result.value) {
            have_best = true;
            result.value = m.value;
            result.argmin = {x, m.arg};
        }
        return m.value;
    };
    golden_min(profile, box.xmin, box.xmax, result.evaluations);
    return result;
}

}  // namespace maxsum
