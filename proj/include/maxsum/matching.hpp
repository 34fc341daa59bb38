#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include "maxsum/geometry.hpp"

namespace maxsum {

/// Bichromatic planar point set with |red| = |blue| = n >= 1 and no red point
/// within tolerance of a blue point.
class Instance {
public:
    /// Validates and throws InvalidInput. tol < 0 selects default_tolerance(diameter).
    Instance(std::vector<Point> red, std::vector<Point> blue, double tol = -1.0);

    const std::vector<Point>& red() const { return red_; }
    const std::vector<Point>& blue() const { return blue_; }
    std::size_t size() const { return red_.size(); }
    /// Bounding-box diagonal of all 2n points.
    double diameter() const { return diameter_; }
    double tolerance() const { return default_tolerance(diameter_); }

private:
    std::vector<Point> red_;
    std::vector<Point> blue_;
    double diameter_ = 0.0;
};

struct MatchedPair {
    std::size_t red = 0;
    std::size_t blue = 0;
    friend auto operator<=>(const MatchedPair&, const MatchedPair&) = default;
};

/// Perfect red-blue matching. Pairs are kept sorted by red index.
class Matching {
public:
    /// Throws InvalidInput unless the pairs form a perfect matching of the instance.
    Matching(const Instance& inst, std::vector<MatchedPair> pairs);

    /// blue_of_red[i] is the blue partner of red i.
    static Matching from_assignment(const Instance& inst, std::span<const std::size_t> blue_of_red);

    const std::vector<MatchedPair>& pairs() const { return pairs_; }
    std::size_t size() const { return pairs_.size(); }
    std::size_t blue_of(std::size_t red) const { return pairs_[red].blue; }
    /// Total Euclidean length, computed at construction.
    double total() const { return total_; }

    friend bool operator==(const Matching& a, const Matching& b) { return a.pairs_ == b.pairs_; }

private:
    std::vector<MatchedPair> pairs_;
    double total_ = 0.0;
};

/// Sum of matched pair lengths; validates the pairs against the instance.
double total_distance(const Instance& inst, std::span<const MatchedPair> pairs);
double total_distance(const Instance& inst, const Matching& m);

/// Endpoints of each matched pair, in pair order (red first).
struct Segment {
    Point a;
    Point b;
};
std::vector<Segment> matched_segments(const Instance& inst, const Matching& m);

/// Exact maximum-total matching via the O(n^3) shortest augmenting path assignment algorithm.
Matching max_sum_matching(const Instance& inst);

/// Exact minimum-total matching; handy as a deliberately poor starting point.
Matching min_sum_matching(const Instance& inst);

enum class PairWeight { Euclidean, SquaredEuclidean };

/// Exhaustive search over all n! matchings (n <= 8, else OracleLimitExceeded).
/// Ties resolve to the lexicographically smallest assignment.
Matching brute_force_max_sum(const Instance& inst, PairWeight weight = PairWeight::Euclidean);

inline constexpr std::size_t kBruteForceLimit = 8;
inline constexpr std::size_t kUncoloredLimit = 16;

/// Maximum-total perfect matching of an uncolored point set by enumerating all (2k-1)!! pairings.
/// Pairs are (i, j) with i < j, sorted. Requires an even count <= 16 of pairwise distinct points.
std::vector<std::pair<std::size_t, std::size_t>> brute_force_uncolored_max_sum(std::span<const Point> points);

/// Local search: swap partners of two pairs while that lengthens the total by more than 1e-12.
Matching two_swap_improve(const Instance& inst, const Matching& m);

}  // namespace maxsum
