#pragma once

#include <algorithm>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cqa/errors.hpp"
#include "cqa/instance.hpp"

namespace cqa {

inline constexpr int kDefaultMaxCycleLength = 8;

namespace detail {

inline std::vector<char> scope_mask(const Instance& inst, const std::vector<NodeId>& scope) {
    std::vector<char> mask(static_cast<std::size_t>(inst.node_count()), 0);
    for (NodeId u : scope) mask[static_cast<std::size_t>(u)] = 1;
    return mask;
}

}  // namespace detail

// All simple directed cycles within `scope` of length <= max_len, each
// reported once, rotated to start at its least node, sorted lexicographically.
// Self-loops count as cycles of length 1. `length_guard` bounds max_len; the
// enumeration is exponential in it by design (it is a fixed query parameter,
// not a data size).
inline std::vector<std::vector<NodeId>> simple_cycles_up_to(const Instance& inst,
                                                            const std::vector<NodeId>& scope,
                                                            int max_len,
                                                            int length_guard = kDefaultMaxCycleLength) {
    if (max_len > length_guard)
        throw ResourceLimitError("cycle length bound " + std::to_string(max_len) +
                                 " exceeds the guard " + std::to_string(length_guard));
    auto in_scope = detail::scope_mask(inst, scope);
    std::vector<std::vector<NodeId>> cycles;
    std::vector<NodeId> path;
    std::vector<char> on_path(static_cast<std::size_t>(inst.node_count()), 0);

    auto dfs = [&](auto&& self, NodeId start, NodeId u) -> void {
        for (NodeId v : inst.out(u)) {
            if (!in_scope[static_cast<std::size_t>(v)]) continue;
            if (v == start) {
                cycles.push_back(path);
            } else if (v > start && !on_path[static_cast<std::size_t>(v)] &&
                       static_cast<int>(path.size()) < max_len) {
                path.push_back(v);
                on_path[static_cast<std::size_t>(v)] = 1;
                self(self, start, v);
                on_path[static_cast<std::size_t>(v)] = 0;
                path.pop_back();
            }
        }
    };

    std::vector<NodeId> starts = scope;
    std::sort(starts.begin(), starts.end());
    for (NodeId s : starts) {
        path.assign(1, s);
        on_path[static_cast<std::size_t>(s)] = 1;
        dfs(dfs, s, s);
        on_path[static_cast<std::size_t>(s)] = 0;
    }
    std::sort(cycles.begin(), cycles.end());
    return cycles;
}

// Searches `scope` for a simple cycle with more than n edges: enumerate simple
// paths a0,...,an on n+1 distinct nodes, then look for a return path from an
// to a0 that avoids the interior nodes a1..a(n-1). Any hit closes a simple
// cycle of length >= n+1, and any simple cycle longer than n contains such a
// configuration. Returns the first cycle found (deterministic DFS/BFS order),
// rotated to its least node.
inline std::optional<std::vector<NodeId>> find_long_simple_cycle(const Instance& inst,
                                                                 const std::vector<NodeId>& scope,
                                                                 int n) {
    // Tuple enumeration is O(|scope|^(n+1)); n is a query constant, so this
    // never errors, but desk-scale misuse deserves a note.
    if (n > 2 && scope.size() > 200)
        std::cerr << "cqa: warning: long-cycle search over " << scope.size() << " nodes at depth "
                  << n + 1 << " may be slow\n";
    auto in_scope = detail::scope_mask(inst, scope);
    std::vector<NodeId> tuple;
    std::vector<char> used(static_cast<std::size_t>(inst.node_count()), 0);
    std::optional<std::vector<NodeId>> found;

    // BFS from `from` to `to` avoiding the interior of the current tuple.
    auto return_path = [&](NodeId from, NodeId to) -> std::optional<std::vector<NodeId>> {
        std::vector<NodeId> parent(static_cast<std::size_t>(inst.node_count()), -1);
        std::vector<NodeId> queue{from};
        std::vector<char> visited(static_cast<std::size_t>(inst.node_count()), 0);
        visited[static_cast<std::size_t>(from)] = 1;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            NodeId u = queue[head];
            for (NodeId v : inst.out(u)) {
                if (!in_scope[static_cast<std::size_t>(v)] || visited[static_cast<std::size_t>(v)])
                    continue;
                if (v != to && used[static_cast<std::size_t>(v)]) continue;  // interior or endpoint reuse
                parent[static_cast<std::size_t>(v)] = u;
                if (v == to) {
                    std::vector<NodeId> path;  // strictly between from and to
                    for (NodeId w = parent[static_cast<std::size_t>(to)]; w != from;
                         w = parent[static_cast<std::size_t>(w)])
                        path.push_back(w);
                    std::reverse(path.begin(), path.end());
                    return path;
                }
                visited[static_cast<std::size_t>(v)] = 1;
                queue.push_back(v);
            }
        }
        return std::nullopt;
    };

    auto extend = [&](auto&& self) -> bool {
        if (static_cast<int>(tuple.size()) == n + 1) {
            // Free the interior-only restriction for the endpoints: the return
            // path may touch neither a1..a(n-1) nor re-enter a0/an mid-path.
            if (auto middle = return_path(tuple.back(), tuple.front())) {
                std::vector<NodeId> cycle = tuple;
                cycle.insert(cycle.end(), middle->begin(), middle->end());
                auto least = std::min_element(cycle.begin(), cycle.end());
                std::rotate(cycle.begin(), least, cycle.end());
                found = std::move(cycle);
                return true;
            }
            return false;
        }
        NodeId u = tuple.back();
        for (NodeId v : inst.out(u)) {
            if (!in_scope[static_cast<std::size_t>(v)] || used[static_cast<std::size_t>(v)]) continue;
            tuple.push_back(v);
            used[static_cast<std::size_t>(v)] = 1;
            if (self(self)) return true;
            used[static_cast<std::size_t>(v)] = 0;
            tuple.pop_back();
        }
        return false;
    };

    std::vector<NodeId> starts = scope;
    std::sort(starts.begin(), starts.end());
    for (NodeId s : starts) {
        tuple.assign(1, s);
        used[static_cast<std::size_t>(s)] = 1;
        bool hit = extend(extend);
        used[static_cast<std::size_t>(s)] = 0;
        if (hit) return found;
    }
    return std::nullopt;
}

inline bool has_long_simple_cycle(const Instance& inst, const std::vector<NodeId>& scope, int n) {
    return find_long_simple_cycle(inst, scope, n).has_value();
}

}  // namespace cqa
