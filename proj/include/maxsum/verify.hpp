#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "maxsum/center.hpp"
#include "maxsum/matching.hpp"
#include "maxsum/minimax.hpp"

namespace maxsum {

enum class Distribution { UniformSquare, Gaussian, Clustered, CollinearJitter };

std::string to_string(Distribution d);
/// Accepts "uniform-square", "gaussian", "clustered", "collinear-jitter".
std::optional<Distribution> parse_distribution(const std::string& name);

/// Portable seeded generator: std::mt19937_64 (its output sequence is fixed by the standard)
/// with hand-rolled conversions, since std distributions differ between library vendors.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    /// Uniform in [0, 1) from the top 53 bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal via Box-Muller (cosine branch only, no cached state).
    double gaussian();
    std::size_t below(std::size_t bound);

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 mix of a base seed and a trial index.
std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index);

/// Deterministic instance; red and blue points are kept at least 1e-6 apart by resampling.
Instance random_instance(std::uint64_t seed, std::size_t n, Distribution distribution);

/// 2k uncolored points uniform in the unit square, pairwise at least 1e-6 apart.
std::vector<Point> random_uncolored(std::uint64_t seed, std::size_t count);

struct TrialReport {
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::string distribution;
    /// Suite statistic: lambda* (theorem, uncolored) or the disk residual (squared).
    double lambda_star = 0.0;
    double bound = 0.0;
    double margin = 0.0;
    bool pass = false;
    std::size_t worst_pair = 0;
    double runtime_ms = 0.0;

    // Theorem-suite extras.
    bool disks_pairwise = true;
    std::size_t active_count = 0;
    double optimality_gap = 0.0;
    /// Largest reflection residual over active pairs; negative when fewer than two are active.
    double max_reflection_residual = -1.0;
    std::string error;
};

struct SuiteConfig {
    std::size_t trials = 100;
    std::size_t n_min = 2;
    std::size_t n_max = 7;
    std::vector<Distribution> distributions{Distribution::UniformSquare};
    std::uint64_t seed = 1;
    double tol = 1e-7;
    unsigned threads = 1;
    /// When set, instances of failing trials are written here as JSON fixtures.
    std::optional<std::filesystem::path> fixture_dir;
};

/// Max-sum matching (brute force up to n = 7, Hungarian beyond) and its lambda* against sqrt(2).
std::vector<TrialReport> verify_theorem_suite(const SuiteConfig& config);

/// Uncolored max-sum matchings of `sizes` points against 2/sqrt(3).
std::vector<TrialReport> verify_uncolored_suite(std::size_t trials, std::span<const std::size_t> sizes,
                                                std::uint64_t seed, double tol = 1e-7, unsigned threads = 1);

/// Squared-distance max-sum matchings: the disks must share a point (residual <= tol).
std::vector<TrialReport> verify_squared_variant(const SuiteConfig& config);

/// min over o of max_i (|o - c_i| - r_i); <= 0 iff the disks share a point.
MinimaxResult disk_common_residual(std::span<const Disk> disks);

std::vector<Disk> matched_disks(const Instance& inst, const Matching& m);

struct DiskGapFinding {
    Instance instance;
    Matching matching;
    std::uint64_t seed = 0;
    double residual = 0.0;
    Point closest;
};

/// Seeded n = 3 search (random start plus hill climbing on the disk residual, per budget unit) for a
/// max-sum matching whose disks have no common point. Pairwise intersection is not filtered on.
std::optional<DiskGapFinding> search_disk_gap(std::size_t budget, std::uint64_t seed, double tol = 1e-9);

std::size_t count_violations(std::span<const TrialReport> reports);

}  // namespace maxsum
