#include "maxsum/proofgraph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace maxsum {

namespace {

/// Red-to-red successor lists: r -> r' when (blue_of(r), r') is white.
std::vector<std::vector<std::size_t>> red_successors(const ColoredGraph& g, std::size_t red_count) {
    std::vector<std::vector<std::size_t>> next(red_count);
    std::vector<std::size_t> red_of_blue(red_count, red_count);
    for (std::size_t r : g.red_vertices) red_of_blue[g.blue_of_red[r]] = r;
    for (const ColoredEdge& e : g.edges) {
        if (e.color != EdgeColor::White) continue;
        const std::size_t from = red_of_blue[e.blue];
        if (from < red_count) next[from].push_back(e.red);
    }
    for (auto& list : next) std::sort(list.begin(), list.end());
    return next;
}

std::size_t red_bound(const ColoredGraph& g) {
    return g.blue_of_red.size();
}

AlternatingCycle make_cycle(const ColoredGraph& g, const std::vector<std::size_t>& reds) {
    AlternatingCycle c;
    c.reds = reds;
    for (std::size_t r : reds) c.blues.push_back(g.blue_of_red[r]);
    return c;
}

}  // namespace

bool ColoredGraph::has_white(std::size_t red, std::size_t blue) const {
    return std::any_of(edges.begin(), edges.end(), [&](const ColoredEdge& e) {
        return e.color == EdgeColor::White && e.red == red && e.blue == blue;
    });
}

std::size_t ColoredGraph::white_degree_red(std::size_t red) const {
    return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [&](const ColoredEdge& e) {
        return e.color == EdgeColor::White && e.red == red;
    }));
}

std::size_t ColoredGraph::white_degree_blue(std::size_t blue) const {
    return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [&](const ColoredEdge& e) {
        return e.color == EdgeColor::White && e.blue == blue;
    }));
}

ColoredGraph build_graph(const Instance& inst, const Matching& m, Point o, double tol) {
    std::vector<std::size_t> all(m.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return build_graph(inst, m, o, tol, all);
}

ColoredGraph build_graph(const Instance& inst, const Matching& m, Point o, double tol,
                         std::span<const std::size_t> pair_subset) {
    require_finite(o, "graph witness");
    ColoredGraph g;
    g.blue_of_red.resize(m.size());
    for (const MatchedPair& p : m.pairs()) g.blue_of_red[p.red] = p.blue;
    for (std::size_t idx : pair_subset) {
        if (idx >= m.size()) throw InvalidInput("pair subset index out of range");
        g.red_vertices.push_back(m.pairs()[idx].red);
        g.blue_vertices.push_back(m.pairs()[idx].blue);
    }
    std::sort(g.red_vertices.begin(), g.red_vertices.end());
    std::sort(g.blue_vertices.begin(), g.blue_vertices.end());

    for (std::size_t r : g.red_vertices) {
        const std::size_t partner = g.blue_of_red[r];
        g.edges.push_back({r, partner, EdgeColor::Black});
        if (disk_contains(Disk(inst.red()[r], inst.blue()[partner]), o, tol)) g.consistent = false;
    }
    for (std::size_t r : g.red_vertices) {
        for (std::size_t b : g.blue_vertices) {
            if (b == g.blue_of_red[r]) continue;
            if (disk_contains(Disk(inst.red()[r], inst.blue()[b]), o, tol)) {
                g.edges.push_back({r, b, EdgeColor::White});
            }
        }
    }
    return g;
}

std::vector<AlternatingCycle> alternating_cycles(const ColoredGraph& g) {
    const std::size_t bound = red_bound(g);
    const auto next = red_successors(g, bound);
    std::vector<std::vector<std::size_t>> found;
    std::vector<std::size_t> path;
    std::vector<bool> on_path(bound, false);

    // Each simple cycle is reported once, rooted at its smallest red.
    auto dfs = [&](auto&& self, std::size_t root, std::size_t at) -> void {
        for (std::size_t nxt : next[at]) {
            if (nxt == root && path.size() >= 2) {
                found.push_back(path);
            } else if (nxt > root && !on_path[nxt]) {
                on_path[nxt] = true;
                path.push_back(nxt);
                self(self, root, nxt);
                path.pop_back();
                on_path[nxt] = false;
            }
        }
    };
    for (std::size_t root : g.red_vertices) {
        path = {root};
        on_path[root] = true;
        dfs(dfs, root, root);
        on_path[root] = false;
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    std::vector<AlternatingCycle> out;
    out.reserve(found.size());
    for (const auto& reds : found) out.push_back(make_cycle(g, reds));
    return out;
}

std::optional<AlternatingCycle> find_alternating_cycle(const ColoredGraph& g) {
    const std::size_t bound = red_bound(g);
    const auto next = red_successors(g, bound);
    std::vector<std::size_t> path;
    std::vector<bool> on_path(bound, false);

    // Iterative deepening: the first hit at the smallest length, in root/neighbor order, is the
    // lexicographically smallest shortest cycle.
    auto dfs = [&](auto&& self, std::size_t root, std::size_t at, std::size_t length) -> bool {
        if (path.size() == length) {
            return std::binary_search(next[at].begin(), next[at].end(), root);
        }
        for (std::size_t nxt : next[at]) {
            if (nxt <= root || on_path[nxt]) continue;
            on_path[nxt] = true;
            path.push_back(nxt);
            if (self(self, root, nxt, length)) return true;
            path.pop_back();
            on_path[nxt] = false;
        }
        return false;
    };
    for (std::size_t length = 2; length <= g.red_vertices.size(); ++length) {
        for (std::size_t root : g.red_vertices) {
            std::fill(on_path.begin(), on_path.end(), false);
            path = {root};
            on_path[root] = true;
            if (dfs(dfs, root, root, length)) return make_cycle(g, path);
        }
    }
    return std::nullopt;
}

Matching apply_cycle_swap(const Instance& inst, const Matching& m, const AlternatingCycle& cycle) {
    const std::size_t k = cycle.reds.size();
    if (k < 2 || cycle.blues.size() != k) {
        throw InvalidInput("alternating cycle needs at least two black edges");
    }
    std::vector<std::size_t> blue(m.size());
    for (const MatchedPair& p : m.pairs()) blue[p.red] = p.blue;
    std::vector<bool> seen(m.size(), false);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t r = cycle.reds[i];
        if (r >= m.size() || seen[r]) throw InvalidInput("alternating cycle repeats or exceeds red vertices");
        seen[r] = true;
        if (blue[r] != cycle.blues[i]) throw InvalidInput("alternating cycle edge is not in the matching");
    }
    for (std::size_t i = 0; i < k; ++i) {
        blue[cycle.reds[(i + 1) % k]] = cycle.blues[i];
    }
    return Matching::from_assignment(inst, blue);
}

RefutationResult refute_or_accept(const Instance& inst, const Matching& m, const RefuteOptions& options) {
    const double bound = std::numbers::sqrt2;
    CenterCertificate global = center_point(inst, m, options.center);
    if (global.lambda_star <= bound + options.accept_tol) {
        return Accepted{std::move(global)};
    }

    std::vector<std::size_t> pairs;
    if (m.size() <= 3) {
        pairs.resize(m.size());
        std::iota(pairs.begin(), pairs.end(), std::size_t{0});
    } else {
        const TripleReduction reduction = helly_triple_reduction(inst, m, options.center);
        pairs.assign(reduction.triple.begin(), reduction.triple.end());
    }
    const auto all_segments = matched_segments(inst, m);
    std::vector<Segment> local;
    for (std::size_t idx : pairs) local.push_back(all_segments[idx]);
    CenterCertificate witness = center_point(local, options.center);

    const ColoredGraph g = build_graph(inst, m, witness.center, inst.tolerance(), pairs);
    std::vector<bool> active_red(m.size(), false);
    for (std::size_t local_idx : witness.active_set) active_red[m.pairs()[pairs[local_idx]].red] = true;

    // Swaps through active pairs only are guaranteed to gain; try those cycles first.
    auto cycles = alternating_cycles(g);
    std::stable_partition(cycles.begin(), cycles.end(), [&](const AlternatingCycle& c) {
        return std::all_of(c.reds.begin(), c.reds.end(), [&](std::size_t r) { return active_red[r]; });
    });
    for (const AlternatingCycle& cycle : cycles) {
        Matching next = apply_cycle_swap(inst, m, cycle);
        if (next.total() > m.total() + options.min_gain) {
            Improved out{std::move(next), std::move(witness), pairs, cycle, m.total(), 0.0};
            out.total_after = out.matching.total();
            return out;
        }
    }

    std::ostringstream msg;
    msg.precision(17);
    msg << "lambda* = " << global.lambda_star << " exceeds sqrt(2) but no improving alternating cycle exists;"
        << " local lambda = " << witness.lambda_star << " at (" << witness.center.x << ", " << witness.center.y
        << "), active pairs = " << witness.active_set.size() << ", cycles = " << cycles.size()
        << ", consistent = " << (g.consistent ? "yes" : "no") << ", white degrees (red):";
    for (std::size_t r : g.red_vertices) msg << ' ' << g.white_degree_red(r);
    throw ToleranceFailure(msg.str());
}

}  // namespace maxsum
