#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cqa/errors.hpp"
#include "cqa/instance.hpp"
#include "cqa/query.hpp"

namespace cqa {

inline constexpr int kDefaultHomNodeCap = 64;
inline constexpr int kDefaultCoreNodeCap = 12;

// A total assignment of source nodes (or query variables) to target nodes.
struct Mapping {
    std::vector<NodeId> image;  // indexed by source node id

    NodeId operator()(NodeId u) const { return image[static_cast<std::size_t>(u)]; }
};

namespace detail {

inline std::vector<std::vector<NodeId>> in_adjacency(const Instance& inst) {
    std::vector<std::vector<NodeId>> in(static_cast<std::size_t>(inst.node_count()));
    for (const auto& [u, v] : inst.edges()) in[static_cast<std::size_t>(v)].push_back(u);
    return in;
}

}  // namespace detail

// Exhaustive backtracking search for a homomorphism: every source edge (u,v)
// must land on a target edge (h(u),h(v)). Absence is definitive. Source nodes
// are tried in descending total-degree order and target nodes in ascending id
// order, so the returned mapping is deterministic.
inline std::optional<Mapping> find_homomorphism(const Instance& source, const Instance& target,
                                                int node_cap = kDefaultHomNodeCap) {
    if (source.node_count() > node_cap || target.node_count() > node_cap)
        throw ResourceLimitError("homomorphism search beyond node cap " + std::to_string(node_cap) +
                                 " (" + std::to_string(source.node_count()) + " -> " +
                                 std::to_string(target.node_count()) + " nodes)");
    if (source.node_count() == 0) return Mapping{};
    if (source.edge_count() > 0 && target.edge_count() == 0) return std::nullopt;

    auto in = detail::in_adjacency(source);
    std::vector<NodeId> order(static_cast<std::size_t>(source.node_count()));
    std::iota(order.begin(), order.end(), 0);
    auto degree = [&](NodeId u) {
        return source.out_degree(u) + static_cast<int>(in[static_cast<std::size_t>(u)].size());
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return degree(a) > degree(b); });

    std::vector<NodeId> image(static_cast<std::size_t>(source.node_count()), -1);

    auto consistent = [&](NodeId u, NodeId t) {
        for (NodeId v : source.out(u)) {
            NodeId tv = v == u ? t : image[static_cast<std::size_t>(v)];
            if (tv >= 0 && !target.has_edge(t, tv)) return false;
        }
        for (NodeId v : in[static_cast<std::size_t>(u)]) {
            NodeId tv = v == u ? t : image[static_cast<std::size_t>(v)];
            if (tv >= 0 && !target.has_edge(tv, t)) return false;
        }
        return true;
    };

    auto search = [&](auto&& self, std::size_t depth) -> bool {
        if (depth == order.size()) return true;
        NodeId u = order[depth];
        for (NodeId t = 0; t < target.node_count(); ++t) {
            if (!consistent(u, t)) continue;
            image[static_cast<std::size_t>(u)] = t;
            if (self(self, depth + 1)) return true;
            image[static_cast<std::size_t>(u)] = -1;
        }
        return false;
    };

    if (!search(search, 0)) return std::nullopt;
    return Mapping{std::move(image)};
}

namespace detail {

inline Instance induced_subgraph(const Instance& inst, const std::vector<NodeId>& nodes) {
    InstanceBuilder builder;
    for (NodeId u : nodes) builder.intern(inst.label(u));
    for (NodeId u : nodes)
        for (NodeId v : inst.out(u))
            if (std::binary_search(nodes.begin(), nodes.end(), v))
                builder.add_edge(inst.label(u), inst.label(v));
    return builder.build();
}

// Lexicographically ordered k-subsets of {0..n-1}.
inline bool next_combination(std::vector<NodeId>& comb, int n) {
    int k = static_cast<int>(comb.size());
    for (int i = k - 1; i >= 0; --i) {
        if (comb[static_cast<std::size_t>(i)] < n - (k - i)) {
            ++comb[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace detail

// Smallest retract of g: the induced subgraph on the first (by size, then
// lexicographic node set) subset that still receives a homomorphism from g.
// Minimality over node count plus the induced edge set makes the result a
// core, and the tie-break makes it deterministic.
inline Instance core_of(const Instance& g, int node_cap = kDefaultCoreNodeCap) {
    if (g.node_count() > node_cap)
        throw ResourceLimitError("core search beyond node cap " + std::to_string(node_cap) + " (" +
                                 std::to_string(g.node_count()) + " nodes)");
    int n = g.node_count();
    for (int size = 1; size <= n; ++size) {
        std::vector<NodeId> comb(static_cast<std::size_t>(size));
        std::iota(comb.begin(), comb.end(), 0);
        do {
            Instance candidate = detail::induced_subgraph(g, comb);
            if (find_homomorphism(g, candidate, node_cap)) return candidate;
        } while (detail::next_combination(comb, n));
    }
    return g;  // unreachable for non-empty g: the full set always succeeds
}

namespace detail {

// Decomposition of a graph whose weakly connected components are all simple
// directed paths or simple directed cycles. Canonical databases of normalized
// queries have this shape, and evaluating them reduces to walk reachability.
struct PathCycleShape {
    std::vector<int> path_lengths;   // edge counts
    std::vector<int> cycle_lengths;  // edge counts
};

inline std::optional<PathCycleShape> decompose_path_cycle_shape(const Instance& g) {
    auto in = in_adjacency(g);
    std::vector<char> seen(static_cast<std::size_t>(g.node_count()), 0);
    PathCycleShape shape;

    for (NodeId root = 0; root < g.node_count(); ++root) {
        if (seen[static_cast<std::size_t>(root)]) continue;
        // Collect the weakly connected component of root.
        std::vector<NodeId> comp{root};
        seen[static_cast<std::size_t>(root)] = 1;
        for (std::size_t i = 0; i < comp.size(); ++i) {
            NodeId u = comp[i];
            auto visit = [&](NodeId v) {
                if (!seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = 1;
                    comp.push_back(v);
                }
            };
            for (NodeId v : g.out(u)) visit(v);
            for (NodeId v : in[static_cast<std::size_t>(u)]) visit(v);
        }
        std::size_t edges = 0;
        int starts = 0, ends = 0;
        bool degree_ok = true;
        for (NodeId u : comp) {
            auto outdeg = g.out_degree(u);
            auto indeg = static_cast<int>(in[static_cast<std::size_t>(u)].size());
            if (outdeg > 1 || indeg > 1) degree_ok = false;
            if (outdeg == 0) ++ends;
            if (indeg == 0) ++starts;
            edges += static_cast<std::size_t>(outdeg);
        }
        if (!degree_ok) return std::nullopt;
        if (starts == 0 && ends == 0 && edges == comp.size()) {
            shape.cycle_lengths.push_back(static_cast<int>(edges));
        } else if (starts == 1 && ends == 1 && edges + 1 == comp.size()) {
            shape.path_lengths.push_back(static_cast<int>(edges));
        } else {
            return std::nullopt;
        }
    }
    return shape;
}

}  // namespace detail

// Boolean CQ semantics: true iff the canonical database of q maps
// homomorphically into i. Path/cycle-shaped queries (every normalized query
// is one) are evaluated by walk reachability, which has no size guard; other
// shapes fall back to backtracking search under the node cap.
inline bool evaluate_database(const Instance& canonical, const Instance& target,
                              int node_cap = kDefaultHomNodeCap) {
    if (canonical.edge_count() > 0 && target.edge_count() == 0) return false;
    if (auto shape = detail::decompose_path_cycle_shape(canonical)) {
        for (int len : shape->path_lengths)
            if (!walk_exists(target, len)) return false;
        for (int len : shape->cycle_lengths)
            if (!closed_walk_exists(target, len)) return false;
        return true;
    }
    return find_homomorphism(canonical, target, node_cap).has_value();
}

inline bool evaluate(const ConjunctiveQuery& q, const Instance& i, int node_cap = kDefaultHomNodeCap) {
    return evaluate_database(canonical_database(q), i, node_cap);
}

}  // namespace cqa
