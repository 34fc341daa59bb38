#include "maxsum/center.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "maxsum/minimax.hpp"

namespace maxsum {

namespace {

constexpr double kHalfTurnSlack = 1e-15;
constexpr int kNewtonSteps = 40;
// Pairs this close (relative) to the max ratio are candidates for the KKT polish.
constexpr double kPolishWindow = 1e-6;
constexpr std::size_t kPolishCandidates = 6;

Point unit_or_zero(Point v) {
    const double n = norm(v);
    return n > 0.0 ? Point{v.x / n, v.y / n} : Point{};
}

void require_segments(std::span<const Segment> segments) {
    if (segments.empty()) {
        throw InvalidInput("center of an empty matching is undefined");
    }
    for (const Segment& s : segments) {
        if (s.a == s.b) {
            throw InvalidInput("matched pair with coincident endpoints");
        }
    }
}

/// Dense Gaussian elimination with partial pivoting; returns nullopt if singular.
std::optional<std::vector<double>> solve_dense(std::vector<double> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col])) pivot = row;
        }
        if (std::abs(a[pivot * n + col]) < 1e-300) return std::nullopt;
        if (pivot != col) {
            for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[pivot * n + k]);
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t row = col + 1; row < n; ++row) {
            const double factor = a[row * n + col] / a[col * n + col];
            if (factor == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) a[row * n + k] -= factor * a[col * n + k];
            b[row] -= factor * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t k = i + 1; k < n; ++k) acc -= a[i * n + k] * x[k];
        x[i] = acc / a[i * n + i];
        if (!std::isfinite(x[i])) return std::nullopt;
    }
    return x;
}

/// Hessian of the focal ratio at o, as (xx, xy, yy).
std::array<double, 3> focal_ratio_hessian(const Segment& s, Point o) {
    std::array<double, 3> h{0.0, 0.0, 0.0};
    const double d = dist(s.a, s.b);
    for (Point focus : {s.a, s.b}) {
        const Point v = o - focus;
        const double r = norm(v);
        const Point u{v.x / r, v.y / r};
        h[0] += (1.0 - u.x * u.x) / r / d;
        h[1] += (-u.x * u.y) / r / d;
        h[2] += (1.0 - u.y * u.y) / r / d;
    }
    return h;
}

/// Initial multipliers: convex weights whose gradient combination is closest to zero.
std::vector<double> initial_multipliers(const std::vector<Point>& g) {
    const std::size_t k = g.size();
    std::vector<double> mu(k, 1.0 / static_cast<double>(k));
    if (k == 2) {
        const Point diff = g[0] - g[1];
        const double dd = dot(diff, diff);
        if (dd > 0.0) {
            const double t = std::clamp(-dot(g[1], diff) / dd, 0.0, 1.0);
            mu = {t, 1.0 - t};
        }
    } else if (k == 3) {
        std::vector<double> a{g[0].x, g[1].x, g[2].x, g[0].y, g[1].y, g[2].y, 1.0, 1.0, 1.0};
        if (auto sol = solve_dense(a, {0.0, 0.0, 1.0})) {
            if (std::all_of(sol->begin(), sol->end(), [](double w) { return w >= 0.0; })) mu = *sol;
        }
    }
    return mu;
}

/// Newton's method on the KKT system of min t s.t. f_i(o) = t for i in `subset`,
/// sum mu_i grad f_i = 0, sum mu_i = 1. Returns the refined point if the iteration settles.
std::optional<Point> kkt_polish(std::span<const Segment> segments, const std::vector<std::size_t>& subset, Point start,
                                std::size_t& iterations) {
    const std::size_t k = subset.size();
    const std::size_t dim = k + 3;
    Point o = start;
    double t = 0.0;
    std::vector<Point> grads(k);
    for (std::size_t i = 0; i < k; ++i) {
        t = std::max(t, focal_ratio(segments[subset[i]], o));
        grads[i] = focal_ratio_gradient(segments[subset[i]], o);
    }
    std::vector<double> mu = initial_multipliers(grads);

    for (int step = 0; step < kNewtonSteps; ++step) {
        ++iterations;
        std::vector<double> jac(dim * dim, 0.0);
        std::vector<double> rhs(dim, 0.0);
        std::array<double, 3> hess{0.0, 0.0, 0.0};
        Point stationarity{};
        double mu_sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const Segment& s = segments[subset[i]];
            if (o == s.a || o == s.b) return std::nullopt;
            const Point g = focal_ratio_gradient(s, o);
            const auto h = focal_ratio_hessian(s, o);
            rhs[i] = -(focal_ratio(s, o) - t);
            jac[i * dim + 0] = g.x;
            jac[i * dim + 1] = g.y;
            jac[i * dim + 2] = -1.0;
            for (std::size_t c = 0; c < 3; ++c) hess[c] += mu[i] * h[c];
            stationarity = stationarity + mu[i] * g;
            jac[(k + 0) * dim + 3 + i] = g.x;
            jac[(k + 1) * dim + 3 + i] = g.y;
            jac[(k + 2) * dim + 3 + i] = 1.0;
            mu_sum += mu[i];
        }
        jac[(k + 0) * dim + 0] = hess[0];
        jac[(k + 0) * dim + 1] = hess[1];
        jac[(k + 1) * dim + 0] = hess[1];
        jac[(k + 1) * dim + 1] = hess[2];
        rhs[k + 0] = -stationarity.x;
        rhs[k + 1] = -stationarity.y;
        rhs[k + 2] = -(mu_sum - 1.0);

        const auto delta = solve_dense(std::move(jac), std::move(rhs));
        if (!delta) return std::nullopt;
        o = o + Point{(*delta)[0], (*delta)[1]};
        t += (*delta)[2];
        for (std::size_t i = 0; i < k; ++i) mu[i] += (*delta)[3 + i];
        if (!is_finite(o)) return std::nullopt;
        if (std::hypot((*delta)[0], (*delta)[1]) <= 1e-15 * (1.0 + norm(o))) break;
    }
    if (std::any_of(mu.begin(), mu.end(), [](double w) { return w < -1e-9; })) return std::nullopt;
    return o;
}

std::vector<std::size_t> active_indices(const std::vector<double>& ratios, double lambda, double activation_tol) {
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        if (ratios[i] >= lambda - activation_tol) active.push_back(i);
    }
    return active;
}

CenterCertificate certify(std::span<const Segment> segments, Point o, double activation_tol) {
    CenterCertificate cert;
    cert.center = o;
    cert.ratios = focal_ratios(segments, o);
    cert.lambda_star = std::max(1.0, *std::max_element(cert.ratios.begin(), cert.ratios.end()));
    cert.active_set = active_indices(cert.ratios, cert.lambda_star, activation_tol);
    std::vector<Point> grads;
    for (std::size_t i : cert.active_set) grads.push_back(focal_ratio_gradient(segments[i], o));
    cert.optimality_gap = min_norm_in_hull(grads);
    return cert;
}

/// Candidate active subsets of size 2 and 3 among the pairs nearest the maximum.
std::vector<std::vector<std::size_t>> polish_subsets(const std::vector<double>& ratios) {
    const double top = *std::max_element(ratios.begin(), ratios.end());
    std::vector<std::size_t> near;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        if (ratios[i] >= top - kPolishWindow * top) near.push_back(i);
    }
    std::sort(near.begin(), near.end(), [&](std::size_t a, std::size_t b) { return ratios[a] > ratios[b]; });
    if (near.size() > kPolishCandidates) near.resize(kPolishCandidates);
    std::sort(near.begin(), near.end());
    std::vector<std::vector<std::size_t>> subsets;
    const std::size_t m = near.size();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            for (std::size_t l = j + 1; l < m; ++l) subsets.push_back({near[i], near[j], near[l]});
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) subsets.push_back({near[i], near[j]});
    }
    return subsets;
}

/// Crossing point of two segments, if they properly intersect.
std::optional<Point> segment_crossing(const Segment& s, const Segment& t) {
    const Point r = s.b - s.a;
    const Point q = t.b - t.a;
    const double denom = cross(r, q);
    if (denom == 0.0) return std::nullopt;
    const double u = cross(t.a - s.a, q) / denom;
    const double v = cross(t.a - s.a, r) / denom;
    if (u < 0.0 || u > 1.0 || v < 0.0 || v > 1.0) return std::nullopt;
    return s.a + u * r;
}

}  // namespace

double focal_ratio(const Segment& s, Point o) { return (dist(s.a, o) + dist(s.b, o)) / dist(s.a, s.b); }

std::vector<double> focal_ratios(std::span<const Segment> segments, Point o) {
    std::vector<double> out;
    out.reserve(segments.size());
    for (const Segment& s : segments) out.push_back(focal_ratio(s, o));
    return out;
}

double lambda_at(std::span<const Segment> segments, Point o) {
    double best = 1.0;
    for (const Segment& s : segments) best = std::max(best, focal_ratio(s, o));
    return best;
}

double lambda_at(const Instance& inst, const Matching& m, Point o) {
    return lambda_at(matched_segments(inst, m), o);
}

Point focal_ratio_gradient(const Segment& s, Point o) {
    if (o == s.a || o == s.b) return {};
    const Point sum = unit_or_zero(o - s.a) + unit_or_zero(o - s.b);
    if (!bisector_direction(o, s.a, s.b)) return {};
    const double d = dist(s.a, s.b);
    return {sum.x / d, sum.y / d};
}

double min_norm_in_hull(std::span<const Point> vectors) {
    if (vectors.empty()) {
        throw InvalidInput("convex hull of an empty set");
    }
    std::vector<double> angles;
    for (const Point& v : vectors) {
        if (v.x == 0.0 && v.y == 0.0) return 0.0;
        angles.push_back(std::atan2(v.y, v.x));
    }
    std::sort(angles.begin(), angles.end());
    double widest = angles.front() + 2.0 * std::numbers::pi - angles.back();
    for (std::size_t i = 1; i < angles.size(); ++i) widest = std::max(widest, angles[i] - angles[i - 1]);
    if (widest <= std::numbers::pi + kHalfTurnSlack) return 0.0;

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        best = std::min(best, norm(vectors[i]));
        for (std::size_t j = i + 1; j < vectors.size(); ++j) {
            const Point diff = vectors[j] - vectors[i];
            const double dd = dot(diff, diff);
            if (dd == 0.0) continue;
            const double t = std::clamp(-dot(vectors[i], diff) / dd, 0.0, 1.0);
            best = std::min(best, norm(vectors[i] + t * diff));
        }
    }
    return best;
}

double optimality_certificate(std::span<const Segment> segments, Point o, double activation_tol) {
    require_segments(segments);
    const auto ratios = focal_ratios(segments, o);
    const double lambda = *std::max_element(ratios.begin(), ratios.end());
    const auto active = active_indices(ratios, lambda, activation_tol);
    if (active.empty()) {
        throw InvalidInput("empty active set");
    }
    std::vector<Point> grads;
    for (std::size_t i : active) grads.push_back(focal_ratio_gradient(segments[i], o));
    return min_norm_in_hull(grads);
}

double optimality_certificate(const Instance& inst, const Matching& m, Point o, double activation_tol) {
    return optimality_certificate(matched_segments(inst, m), o, activation_tol);
}

CenterCertificate center_point(std::span<const Segment> segments, const CenterOptions& options) {
    require_segments(segments);
    if (segments.size() == 1) {
        return certify(segments, midpoint(segments[0].a, segments[0].b), options.activation_tol);
    }

    std::vector<Point> endpoints;
    for (const Segment& s : segments) {
        endpoints.push_back(s.a);
        endpoints.push_back(s.b);
    }
    // Projecting onto the convex hull of the endpoints shortens every focal distance,
    // so a minimizer lies in their bounding box.
    const MinimaxResult coarse =
        minimize_convex([&](Point o) { return lambda_at(segments, o); }, bounding_box(endpoints));

    std::size_t iterations = coarse.evaluations;
    CenterCertificate best = certify(segments, coarse.argmin, options.activation_tol);
    // Ratios of short pairs carry rounding noise well above machine epsilon.
    const double slack = std::min(1e-12 * best.lambda_star, 1e-3 * options.tol);
    std::vector<Point> candidates;
    for (const auto& subset : polish_subsets(best.ratios)) {
        if (const auto refined = kkt_polish(segments, subset, coarse.argmin, iterations)) {
            candidates.push_back(*refined);
        }
    }
    // lambda* = 1 means every segment passes through o; that kink is too sharp to polish.
    if (best.lambda_star <= 1.0 + 1e-6) {
        for (std::size_t i = 0; i < segments.size(); ++i) {
            for (std::size_t j = i + 1; j < segments.size(); ++j) {
                if (const auto x = segment_crossing(segments[i], segments[j])) candidates.push_back(*x);
            }
        }
    }
    for (Point p : candidates) {
        CenterCertificate candidate = certify(segments, p, options.activation_tol);
        if (candidate.lambda_star > best.lambda_star + slack) continue;
        if (candidate.lambda_star < best.lambda_star - slack || candidate.optimality_gap < best.optimality_gap) {
            best = std::move(candidate);
        }
    }
    best.iterations = iterations;

    if (best.optimality_gap > options.gap_threshold) {
        throw ConvergenceError("center not certified: optimality gap " + std::to_string(best.optimality_gap) +
                                   " exceeds " + std::to_string(options.gap_threshold),
                               best);
    }
    return best;
}

CenterCertificate center_point(const Instance& inst, const Matching& m, const CenterOptions& options) {
    return center_point(matched_segments(inst, m), options);
}

double min_common_lambda(const Instance& inst, const Matching& m, const CenterOptions& options) {
    return center_point(inst, m, options).lambda_star;
}

TripleReduction helly_triple_reduction(const Instance& inst, const Matching& m, const CenterOptions& options) {
    const auto segments = matched_segments(inst, m);
    const std::size_t n = segments.size();
    if (n < 3) {
        throw InvalidInput("triple reduction needs at least three pairs");
    }
    TripleReduction out;
    bool first = true;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                const std::array<Segment, 3> triple{segments[i], segments[j], segments[k]};
                const double lambda = center_point(triple, options).lambda_star;
                if (first || lambda > out.lambda) {
                    first = false;
                    out.lambda = lambda;
                    out.triple = {i, j, k};
                }
            }
        }
    }
    return out;
}

}  // namespace maxsum
