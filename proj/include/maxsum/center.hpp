#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "maxsum/errors.hpp"
#include "maxsum/geometry.hpp"
#include "maxsum/matching.hpp"

namespace maxsum {

struct CenterOptions {
    /// Absolute accuracy target for lambda*.
    double tol = 1e-9;
    /// Pairs whose ratio is within this of lambda* form the active set.
    double activation_tol = 1e-7;
    /// Largest optimality gap accepted as a certificate.
    double gap_threshold = 1e-6;
};

/// Minimizer o of the largest focal-sum ratio (|r_i - o| + |b_i - o|) / |r_i - b_i| and its evidence.
struct CenterCertificate {
    Point center;
    double lambda_star = 1.0;
    std::vector<double> ratios;
    std::vector<std::size_t> active_set;
    double optimality_gap = 0.0;
    std::size_t iterations = 0;
};

/// Raised when the certificate gap stays above the threshold; carries the best iterate.
class ConvergenceError : public ToleranceFailure {
public:
    ConvergenceError(const std::string& what, CenterCertificate best)
        : ToleranceFailure(what), best_(std::move(best)) {}
    const CenterCertificate& best_iterate() const { return best_; }

private:
    CenterCertificate best_;
};

/// Smallest lambda with o in E_lambda(a b).
double focal_ratio(const Segment& s, Point o);
std::vector<double> focal_ratios(std::span<const Segment> segments, Point o);

double lambda_at(std::span<const Segment> segments, Point o);
double lambda_at(const Instance& inst, const Matching& m, Point o);

/// Gradient of the focal ratio at o; zero when o is on the closed segment (0 is a subgradient there).
Point focal_ratio_gradient(const Segment& s, Point o);

/// Norm of the minimum-norm point of the convex hull of a set of planar vectors.
double min_norm_in_hull(std::span<const Point> vectors);

/// Norm of the minimum-norm convex combination of active-pair gradients at o.
/// Zero iff o minimizes the (convex) max-ratio function. Throws InvalidInput on an empty active set.
double optimality_certificate(std::span<const Segment> segments, Point o, double activation_tol);
double optimality_certificate(const Instance& inst, const Matching& m, Point o, double activation_tol);

CenterCertificate center_point(std::span<const Segment> segments, const CenterOptions& options = {});
CenterCertificate center_point(const Instance& inst, const Matching& m, const CenterOptions& options = {});

double min_common_lambda(const Instance& inst, const Matching& m, const CenterOptions& options = {});

struct TripleReduction {
    double lambda = 1.0;
    std::array<std::size_t, 3> triple{};  // pair indices into the matching
};

/// Largest triple-restricted lambda* over all triples of matched pairs (n >= 3).
TripleReduction helly_triple_reduction(const Instance& inst, const Matching& m, const CenterOptions& options = {});

}  // namespace maxsum
