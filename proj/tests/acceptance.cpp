// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <string>

#include "maxsum/center.hpp"
#include "maxsum/proofgraph.hpp"
#include "maxsum/verify.hpp"
#include "oracles.hpp"

using namespace maxsum;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
int g_failures = 0;
// Criterion 10 reuses the criterion 2 trials but is reported last.
bool g_reflection_ok = false;
std::string g_reflection_detail;

void report(int k, bool ok, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", k, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

void tight_square() {
    const auto t = std::chrono::steady_clock::now();
    const Instance sq({{0, 0}, {1, 1}}, {{1, 0}, {0, 1}});
    const Matching m = max_sum_matching(sq);
    const CenterCertificate c = center_point(sq, m);
    const double secs = seconds_since(t);
    const bool ok = std::abs(c.lambda_star - kSqrt2) <= 1e-6 && std::abs(c.center.x - 0.5) <= 1e-6 &&
                    std::abs(c.center.y - 0.5) <= 1e-6 && secs < 1.0;
    report(1, ok, "unit square is tight at its center",
           fmt("lambda*=%.12f center=(%.9f, %.9f) %.3fs", c.lambda_star, c.center.x, c.center.y, secs));
}

void theorem_suite() {
    const auto t = std::chrono::steady_clock::now();
    SuiteConfig config;
    config.trials = 2000;
    config.n_min = 2;
    config.n_max = 7;
    config.distributions = {Distribution::UniformSquare, Distribution::Gaussian};
    config.seed = 1;
    config.tol = 1e-7;
    const auto reports = verify_theorem_suite(config);
    const double secs = seconds_since(t);

    std::size_t over = 0, non_pairwise = 0, errors = 0, reflection_checked = 0, reflection_bad = 0;
    double worst_margin = 1e300, worst_reflection = 0.0;
    for (const TrialReport& r : reports) {
        if (!r.error.empty()) ++errors;
        if (r.lambda_star > kSqrt2 + 1e-7) ++over;
        if (!r.disks_pairwise) ++non_pairwise;
        worst_margin = std::min(worst_margin, r.margin);
        if (r.max_reflection_residual >= 0.0) {
            ++reflection_checked;
            worst_reflection = std::max(worst_reflection, r.max_reflection_residual);
            if (r.max_reflection_residual > 1e-6) ++reflection_bad;
        }
    }
    report(2, over == 0 && errors == 0 && reports.size() == 2000 && secs < 120.0,
           "max-sum lambda* <= sqrt(2) + 1e-7 over 2000 trials, n in [2, 7]",
           fmt("violations=%zu errors=%zu min margin=%.3e %.2fs", over, errors, worst_margin, secs));
    report(3, non_pairwise == 0, "matched disks pairwise intersect in the same trials",
           fmt("failures=%zu", non_pairwise));
    g_reflection_ok = reflection_bad == 0 && reflection_checked > 0;
    g_reflection_detail = fmt("witnesses=%zu worst=%.3e", reflection_checked, worst_reflection);
}

void oracle_equivalence() {
    std::size_t mismatches = 0;
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const std::size_t n = 1 + i % 7;
        const Instance inst = random_instance(trial_seed(101, i), n, i % 2 ? Distribution::Gaussian : Distribution::UniformSquare);
        const double fast = max_sum_matching(inst).total();
        const double brute = brute_force_max_sum(inst).total();
        std::vector<oracle::Pt> red, blue;
        for (Point p : inst.red()) red.push_back(oracle::to_pt(p));
        for (Point p : inst.blue()) blue.push_back(oracle::to_pt(p));
        const double independent = oracle::max_total_recursive(red, blue);
        const double rel = std::max(std::abs(fast - brute), std::abs(fast - independent)) / independent;
        worst = std::max(worst, rel);
        if (rel > 1e-9) ++mismatches;
    }
    report(4, mismatches == 0, "assignment solver matches exhaustive search on 1000 instances",
           fmt("mismatches=%zu worst relative=%.3e", mismatches, worst));
}

void helly() {
    std::size_t bad = 0;
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        const std::size_t n = 4 + i % 2;
        const Instance inst = random_instance(trial_seed(103, i), n, Distribution::UniformSquare);
        const Matching m = (i / 2) % 2 ? max_sum_matching(inst) : min_sum_matching(inst);
        const double diff = std::abs(helly_triple_reduction(inst, m).lambda - min_common_lambda(inst, m));
        worst = std::max(worst, diff);
        if (diff > 1e-6) ++bad;
    }
    report(5, bad == 0, "triple reduction equals full lambda* on 200 instances, n in {4, 5}",
           fmt("mismatches=%zu worst=%.3e", bad, worst));
}

/// A starting matching violating the bound: min-sum, else the worst permutation; nullopt if none violates.
std::optional<Matching> bad_start(const Instance& inst) {
    Matching m = min_sum_matching(inst);
    if (min_common_lambda(inst, m) > kSqrt2 + 1e-6) return m;
    std::vector<std::size_t> perm(inst.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::optional<Matching> worst;
    double worst_lambda = kSqrt2 + 1e-6;
    do {
        Matching candidate = Matching::from_assignment(inst, perm);
        const double lambda = lambda_at(inst, candidate, center_point(inst, candidate).center);
        if (lambda > worst_lambda) {
            worst_lambda = lambda;
            worst = candidate;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return worst;
}

void refutation_loop() {
    std::size_t runs = 0, failures = 0, total_steps = 0, max_steps = 0;
    std::string first_failure;
    for (std::uint64_t i = 0; runs < 200; ++i) {
        const std::size_t n = 3 + runs % 4;
        const Instance inst = random_instance(trial_seed(107, i), n, Distribution::UniformSquare);
        const auto start = bad_start(inst);
        if (!start) continue;
        ++runs;
        Matching m = *start;
        std::size_t steps = 0;
        bool ok = true;
        try {
            for (;;) {
                const auto result = refute_or_accept(inst, m);
                if (const auto* acc = std::get_if<Accepted>(&result)) {
                    ok = acc->certificate.lambda_star <= kSqrt2 + 1e-7;
                    break;
                }
                const Improved& imp = std::get<Improved>(result);
                if (!(imp.total_after > imp.total_before)) {
                    ok = false;
                    break;
                }
                m = imp.matching;
                if (++steps > 720) {
                    ok = false;
                    break;
                }
            }
        } catch (const std::exception& e) {
            ok = false;
            if (first_failure.empty()) first_failure = e.what();
        }
        total_steps += steps;
        max_steps = std::max(max_steps, steps);
        if (!ok) ++failures;
    }
    report(6, failures == 0, "refutation loop strictly improves and ends within the bound on 200 instances",
           fmt("failures=%zu mean steps=%.2f max steps=%zu%s", failures, double(total_steps) / runs, max_steps,
               first_failure.empty() ? "" : (" first error: " + first_failure.substr(0, 80)).c_str()));
}

void uncolored() {
    const std::array<std::size_t, 2> sizes{4, 6};
    const auto reports = verify_uncolored_suite(500, sizes, 109, 1e-7);
    double worst = 1e300;
    for (const TrialReport& r : reports) worst = std::min(worst, r.margin);
    report(7, count_violations(reports) == 0 && reports.size() == 500,
           "uncolored max-sum lambda* <= 2/sqrt(3) + 1e-7 on 500 sets of 4 and 6 points",
           fmt("violations=%zu min margin=%.3e", count_violations(reports), worst));
}

void squared() {
    SuiteConfig config;
    config.trials = 500;
    config.n_min = 2;
    config.n_max = 5;
    config.distributions = {Distribution::UniformSquare, Distribution::Gaussian};
    config.seed = 113;
    config.tol = 1e-7;
    const auto reports = verify_squared_variant(config);
    double worst = -1e300;
    for (const TrialReport& r : reports) worst = std::max(worst, r.lambda_star);
    report(8, count_violations(reports) == 0 && reports.size() == 500,
           "squared-distance max-sum disks share a point (residual <= 1e-7) on 500 trials",
           fmt("violations=%zu worst residual=%.3e", count_violations(reports), worst));
}

void convexity_and_certificate() {
    Rng rng(127);
    std::size_t convexity_bad = 0, gap_bad = 0;
    double worst_excess = -1e300, worst_gap = 0.0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        const Instance inst = random_instance(trial_seed(127, i), 2 + i % 6, Distribution::UniformSquare);
        const Matching m = i % 2 ? max_sum_matching(inst) : min_sum_matching(inst);
        const auto segs = matched_segments(inst, m);
        for (int k = 0; k < 1000; ++k) {
            const Point a{rng.uniform(-1, 2), rng.uniform(-1, 2)};
            const Point b{rng.uniform(-1, 2), rng.uniform(-1, 2)};
            const double excess = lambda_at(segs, midpoint(a, b)) - 0.5 * (lambda_at(segs, a) + lambda_at(segs, b));
            worst_excess = std::max(worst_excess, excess);
            if (excess > 1e-12) ++convexity_bad;
        }
        try {
            const CenterCertificate c = center_point(segs);
            worst_gap = std::max(worst_gap, c.optimality_gap);
            if (c.optimality_gap > 1e-6) ++gap_bad;
        } catch (const ConvergenceError& e) {
            worst_gap = std::max(worst_gap, e.best_iterate().optimality_gap);
            ++gap_bad;
        }
    }
    report(9, convexity_bad == 0 && gap_bad == 0,
           "lambda is midpoint convex on 20x1000 probes and every center has gap <= 1e-6",
           fmt("convexity failures=%zu worst excess=%.3e gap failures=%zu worst gap=%.3e", convexity_bad,
               worst_excess, gap_bad, worst_gap));
}

}  // namespace

int main() {
    tight_square();
    theorem_suite();
    oracle_equivalence();
    helly();
    refutation_loop();
    uncolored();
    squared();
    convexity_and_certificate();
    report(10, g_reflection_ok, "reflection residual <= 1e-6 at every witness with >= 2 active pairs",
           g_reflection_detail);
    std::printf("%s: %d criteria failed\n", g_failures == 0 ? "ACCEPTED" : "REJECTED", g_failures);
    return g_failures == 0 ? 0 : 1;
}
