#pragma once

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "cqa/instance.hpp"

namespace cqa {

// The DAG of strongly connected components. Components are ordered by their
// least contained node id; a component is nontrivial iff it carries at least
// one edge of the instance (two or more nodes, or a self-loop).
struct Condensation {
    std::vector<std::vector<NodeId>> components;      // each sorted ascending
    std::vector<int> component_of;                    // node id -> component index
    std::set<std::pair<int, int>> dag_edges;          // between component indices
    std::vector<bool> sink_flags;
    std::vector<bool> nontrivial_flags;
};

// Tarjan's algorithm, iterative to keep deep graphs off the call stack.
inline Condensation condensation(const Instance& inst) {
    const int n = inst.node_count();
    std::vector<int> index(static_cast<std::size_t>(n), -1);
    std::vector<int> low(static_cast<std::size_t>(n), 0);
    std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
    std::vector<NodeId> stack;
    std::vector<std::vector<NodeId>> raw_components;
    std::vector<int> comp_of(static_cast<std::size_t>(n), -1);
    int counter = 0;

    struct Frame {
        NodeId node;
        std::size_t next_edge;
    };
    std::vector<Frame> frames;

    for (NodeId root = 0; root < n; ++root) {
        if (index[static_cast<std::size_t>(root)] != -1) continue;
        frames.push_back({root, 0});
        index[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
        stack.push_back(root);
        on_stack[static_cast<std::size_t>(root)] = 1;
        while (!frames.empty()) {
            Frame& frame = frames.back();
            NodeId u = frame.node;
            if (frame.next_edge < inst.out(u).size()) {
                NodeId v = inst.out(u)[frame.next_edge++];
                if (index[static_cast<std::size_t>(v)] == -1) {
                    index[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] = counter++;
                    stack.push_back(v);
                    on_stack[static_cast<std::size_t>(v)] = 1;
                    frames.push_back({v, 0});
                } else if (on_stack[static_cast<std::size_t>(v)]) {
                    low[static_cast<std::size_t>(u)] =
                        std::min(low[static_cast<std::size_t>(u)], index[static_cast<std::size_t>(v)]);
                }
            } else {
                if (low[static_cast<std::size_t>(u)] == index[static_cast<std::size_t>(u)]) {
                    std::vector<NodeId> comp;
                    NodeId w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<std::size_t>(w)] = 0;
                        comp_of[static_cast<std::size_t>(w)] = static_cast<int>(raw_components.size());
                        comp.push_back(w);
                    } while (w != u);
                    std::sort(comp.begin(), comp.end());
                    raw_components.push_back(std::move(comp));
                }
                frames.pop_back();
                if (!frames.empty()) {
                    NodeId parent = frames.back().node;
                    low[static_cast<std::size_t>(parent)] =
                        std::min(low[static_cast<std::size_t>(parent)], low[static_cast<std::size_t>(u)]);
                }
            }
        }
    }

    // Reorder components by least contained node id.
    std::vector<int> order(raw_components.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return raw_components[static_cast<std::size_t>(a)].front() <
               raw_components[static_cast<std::size_t>(b)].front();
    });
    std::vector<int> rank(raw_components.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[static_cast<std::size_t>(order[i])] = static_cast<int>(i);

    Condensation result;
    result.components.resize(raw_components.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        result.components[i] = std::move(raw_components[static_cast<std::size_t>(order[i])]);
    result.component_of.resize(static_cast<std::size_t>(n));
    for (NodeId u = 0; u < n; ++u)
        result.component_of[static_cast<std::size_t>(u)] = rank[static_cast<std::size_t>(comp_of[static_cast<std::size_t>(u)])];

    result.sink_flags.assign(result.components.size(), true);
    result.nontrivial_flags.assign(result.components.size(), false);
    for (const auto& [u, v] : inst.edges()) {
        int cu = result.component_of[static_cast<std::size_t>(u)];
        int cv = result.component_of[static_cast<std::size_t>(v)];
        if (cu != cv) {
            result.dag_edges.emplace(cu, cv);
            result.sink_flags[static_cast<std::size_t>(cu)] = false;
        } else {
            result.nontrivial_flags[static_cast<std::size_t>(cu)] = true;
        }
    }
    return result;
}

// Sink components of the condensation; with nontrivial_only, those containing
// at least one edge. Deterministic component order (least node id).
inline std::vector<std::vector<NodeId>> sink_components(const Instance& inst, bool nontrivial_only) {
    Condensation cond = condensation(inst);
    std::vector<std::vector<NodeId>> result;
    for (std::size_t i = 0; i < cond.components.size(); ++i) {
        if (!cond.sink_flags[i]) continue;
        if (nontrivial_only && !cond.nontrivial_flags[i]) continue;
        result.push_back(cond.components[i]);
    }
    return result;
}

}  // namespace cqa
