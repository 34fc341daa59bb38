#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "maxsum/center.hpp"
#include "maxsum/errors.hpp"
#include "maxsum/geometry.hpp"
#include "maxsum/matching.hpp"

namespace maxsum {

enum class EdgeColor { Black, White };

struct ColoredEdge {
    std::size_t red = 0;
    std::size_t blue = 0;
    EdgeColor color = EdgeColor::Black;
};

/// Bipartite graph at a point o: black edges are matched pairs, white edges are
/// unmatched red-blue pairs (p, q) with o in the closed disk B(pq).
struct ColoredGraph {
    std::vector<std::size_t> red_vertices;
    std::vector<std::size_t> blue_vertices;
    std::vector<ColoredEdge> edges;
    /// False when o also lies in the disk of some black edge.
    bool consistent = true;
    /// Partner of each red vertex in the matching (indexed by instance red index).
    std::vector<std::size_t> blue_of_red;

    bool has_white(std::size_t red, std::size_t blue) const;
    std::size_t white_degree_red(std::size_t red) const;
    std::size_t white_degree_blue(std::size_t blue) const;
};

/// Cycle r1 b1 r2 b2 ... rm bm r1 with (ri, bi) black and (bi, r(i+1)) white.
struct AlternatingCycle {
    std::vector<std::size_t> reds;
    std::vector<std::size_t> blues;

    std::size_t length() const { return 2 * reds.size(); }
};

/// Graph on all pairs, or only on the listed matched pairs (indices into m.pairs()).
ColoredGraph build_graph(const Instance& inst, const Matching& m, Point o, double tol);
ColoredGraph build_graph(const Instance& inst, const Matching& m, Point o, double tol,
                         std::span<const std::size_t> pair_subset);

/// All alternating cycles, shortest first, then by vertex sequence starting at the smallest red.
std::vector<AlternatingCycle> alternating_cycles(const ColoredGraph& g);

/// Shortest alternating cycle (ties by vertex sequence), or nullopt.
std::optional<AlternatingCycle> find_alternating_cycle(const ColoredGraph& g);

/// Replaces the cycle's black pairs by its white pairs. Throws InvalidInput on a malformed cycle.
Matching apply_cycle_swap(const Instance& inst, const Matching& m, const AlternatingCycle& cycle);

struct Accepted {
    CenterCertificate certificate;
};

struct Improved {
    Matching matching;
    /// Witness of the violating sub-matching, relative to its own pairs.
    CenterCertificate witness;
    /// Pair indices (into the input matching) the witness was computed on.
    std::vector<std::size_t> pairs;
    AlternatingCycle cycle;
    double total_before = 0.0;
    double total_after = 0.0;
};

using RefutationResult = std::variant<Accepted, Improved>;

struct RefuteOptions {
    CenterOptions center;
    /// Accept when lambda* <= sqrt(2) + accept_tol.
    double accept_tol = 1e-9;
    /// Smallest total gain reported as an improvement.
    double min_gain = 1e-12;
};

/// Accepts a matching satisfying the sqrt(2) bound, or localizes a violation to a triple
/// of pairs, builds the graph at that triple's witness and returns the matching obtained
/// from an alternating-cycle swap with strictly larger total. Throws ToleranceFailure if no
/// improving cycle exists although the bound is violated.
RefutationResult refute_or_accept(const Instance& inst, const Matching& m, const RefuteOptions& options = {});

}  // namespace maxsum
