#include "maxsum/matching.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace maxsum {

namespace {

constexpr double kSwapGain = 1e-12;

bool strictly_better(double candidate, double best) {
    return candidate > best + 1e-12 * (1.0 + std::abs(best));
}

std::vector<MatchedPair> validated(std::size_t n, std::vector<MatchedPair> pairs) {
    if (pairs.size() != n) {
        throw InvalidInput("matching has " + std::to_string(pairs.size()) + " pairs, expected " +
                           std::to_string(n));
    }
    std::vector<bool> red_seen(n, false), blue_seen(n, false);
    for (const MatchedPair& p : pairs) {
        if (p.red >= n || p.blue >= n) {
            throw InvalidInput("matching index out of range");
        }
        if (red_seen[p.red] || blue_seen[p.blue]) {
            throw InvalidInput("matching is not a permutation");
        }
        red_seen[p.red] = blue_seen[p.blue] = true;
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

double pair_weight(Point a, Point b, PairWeight w) {
    const double d = dist(a, b);
    return w == PairWeight::Euclidean ? d : d * d;
}

/// Minimum-cost assignment on a dense n x n matrix (row-major). Returns column of each row.
std::vector<std::size_t> solve_assignment(const std::vector<double>& cost, std::size_t n) {
    const double inf = std::numeric_limits<double>::infinity();
    // 1-based potentials; column 0 is the virtual start.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> row_of_col(n + 1, 0), way(n + 1, 0);
    for (std::size_t row = 1; row <= n; ++row) {
        row_of_col[0] = row;
        std::size_t col0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[col0] = true;
            const std::size_t row0 = row_of_col[col0];
            double delta = inf;
            std::size_t col1 = 0;
            for (std::size_t col = 1; col <= n; ++col) {
                if (used[col]) continue;
                const double reduced = cost[(row0 - 1) * n + (col - 1)] - u[row0] - v[col];
                if (reduced < minv[col]) {
                    minv[col] = reduced;
                    way[col] = col0;
                }
                if (minv[col] < delta) {
                    delta = minv[col];
                    col1 = col;
                }
            }
            for (std::size_t col = 0; col <= n; ++col) {
                if (used[col]) {
                    u[row_of_col[col]] += delta;
                    v[col] -= delta;
                } else {
                    minv[col] -= delta;
                }
            }
            col0 = col1;
        } while (row_of_col[col0] != 0);
        do {
            const std::size_t col1 = way[col0];
            row_of_col[col0] = row_of_col[col1];
            col0 = col1;
        } while (col0 != 0);
    }
    std::vector<std::size_t> col_of_row(n, 0);
    for (std::size_t col = 1; col <= n; ++col) {
        col_of_row[row_of_col[col] - 1] = col - 1;
    }
    return col_of_row;
}

Matching extreme_matching(const Instance& inst, double sign) {
    const std::size_t n = inst.size();
    std::vector<double> cost(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cost[i * n + j] = sign * dist(inst.red()[i], inst.blue()[j]);
        }
    }
    return Matching::from_assignment(inst, solve_assignment(cost, n));
}

}  // namespace

Instance::Instance(std::vector<Point> red, std::vector<Point> blue, double tol)
    : red_(std::move(red)), blue_(std::move(blue)) {
    if (red_.empty()) {
        throw InvalidInput("instance needs at least one red and one blue point");
    }
    if (red_.size() != blue_.size()) {
        throw InvalidInput("instance has " + std::to_string(red_.size()) + " red and " +
                           std::to_string(blue_.size()) + " blue points");
    }
    std::vector<Point> all;
    all.reserve(2 * red_.size());
    for (const Point& p : red_) {
        require_finite(p, "red point");
        all.push_back(p);
    }
    for (const Point& p : blue_) {
        require_finite(p, "blue point");
        all.push_back(p);
    }
    diameter_ = bounding_diagonal(all);
    const double eps = tol < 0.0 ? default_tolerance(diameter_) : tol;
    for (std::size_t i = 0; i < red_.size(); ++i) {
        for (std::size_t j = 0; j < blue_.size(); ++j) {
            if (dist(red_[i], blue_[j]) <= eps) {
                throw InvalidInput("red point " + std::to_string(i) + " coincides with blue point " +
                                   std::to_string(j));
            }
        }
    }
}

Matching::Matching(const Instance& inst, std::vector<MatchedPair> pairs)
    : pairs_(validated(inst.size(), std::move(pairs))) {
    for (const MatchedPair& p : pairs_) {
        total_ += dist(inst.red()[p.red], inst.blue()[p.blue]);
    }
}

Matching Matching::from_assignment(const Instance& inst, std::span<const std::size_t> blue_of_red) {
    std::vector<MatchedPair> pairs;
    pairs.reserve(blue_of_red.size());
    for (std::size_t i = 0; i < blue_of_red.size(); ++i) {
        pairs.push_back({i, blue_of_red[i]});
    }
    return Matching(inst, std::move(pairs));
}

double total_distance(const Instance& inst, std::span<const MatchedPair> pairs) {
    const auto checked = validated(inst.size(), {pairs.begin(), pairs.end()});
    double total = 0.0;
    for (const MatchedPair& p : checked) {
        total += dist(inst.red()[p.red], inst.blue()[p.blue]);
    }
    return total;
}

double total_distance(const Instance& inst, const Matching& m) { return total_distance(inst, m.pairs()); }

std::vector<Segment> matched_segments(const Instance& inst, const Matching& m) {
    std::vector<Segment> out;
    out.reserve(m.size());
    for (const MatchedPair& p : m.pairs()) {
        out.push_back({inst.red()[p.red], inst.blue()[p.blue]});
    }
    return out;
}

Matching max_sum_matching(const Instance& inst) { return extreme_matching(inst, -1.0); }

Matching min_sum_matching(const Instance& inst) { return extreme_matching(inst, 1.0); }

Matching brute_force_max_sum(const Instance& inst, PairWeight weight) {
    const std::size_t n = inst.size();
    if (n > kBruteForceLimit) {
        throw OracleLimitExceeded("brute-force matching refused for n = " + std::to_string(n) +
                                  " (limit " + std::to_string(kBruteForceLimit) + ")");
    }
    std::vector<double> w(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            w[i * n + j] = pair_weight(inst.red()[i], inst.blue()[j], weight);
        }
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<std::size_t> best = perm;
    double best_total = -1.0;
    do {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            total += w[i * n + perm[i]];
        }
        if (best_total < 0.0 || strictly_better(total, best_total)) {
            best_total = total;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return Matching::from_assignment(inst, best);
}

std::vector<std::pair<std::size_t, std::size_t>> brute_force_uncolored_max_sum(std::span<const Point> points) {
    const std::size_t count = points.size();
    if (count == 0 || count % 2 != 0) {
        throw InvalidInput("uncolored matching needs a positive even number of points");
    }
    if (count > kUncoloredLimit) {
        throw OracleLimitExceeded("uncolored brute force refused for " + std::to_string(count) + " points");
    }
    const double tol = default_tolerance(bounding_diagonal(points));
    for (std::size_t i = 0; i < count; ++i) {
        require_finite(points[i]);
        for (std::size_t j = i + 1; j < count; ++j) {
            if (dist(points[i], points[j]) <= tol) {
                throw InvalidInput("uncolored points must be pairwise distinct");
            }
        }
    }

    using PairList = std::vector<std::pair<std::size_t, std::size_t>>;
    PairList current, best;
    double best_total = -1.0;
    std::vector<bool> used(count, false);

    // Pairs the smallest free index with each later free index, so pair lists come out in lexicographic order.
    auto recurse = [&](auto&& self, double total) -> void {
        std::size_t first = 0;
        while (first < count && used[first]) ++first;
        if (first == count) {
            if (best_total < 0.0 || strictly_better(total, best_total)) {
                best_total = total;
                best = current;
            }
            return;
        }
        used[first] = true;
        for (std::size_t j = first + 1; j < count; ++j) {
            if (used[j]) continue;
            used[j] = true;
            current.emplace_back(first, j);
            self(self, total + dist(points[first], points[j]));
            current.pop_back();
            used[j] = false;
        }
        used[first] = false;
    };
    recurse(recurse, 0.0);
    return best;
}

Matching two_swap_improve(const Instance& inst, const Matching& m) {
    const std::size_t n = inst.size();
    std::vector<std::size_t> blue(n);
    for (const MatchedPair& p : m.pairs()) {
        blue[p.red] = p.blue;
    }
    const auto& R = inst.red();
    const auto& B = inst.blue();
    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double before = dist(R[i], B[blue[i]]) + dist(R[j], B[blue[j]]);
                const double after = dist(R[i], B[blue[j]]) + dist(R[j], B[blue[i]]);
                if (after > before + kSwapGain) {
                    std::swap(blue[i], blue[j]);
                    improved = true;
                }
            }
        }
    }
    return Matching::from_assignment(inst, blue);
}

}  // namespace maxsum
