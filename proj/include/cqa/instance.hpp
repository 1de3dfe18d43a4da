#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cqa/errors.hpp"

namespace cqa {

using NodeId = int;
using BigInt = boost::multiprecision::cpp_int;

// A finite directed graph over interned string labels; one fact R(u,v) per
// edge. The first attribute is the key, so a node's out-edges are the facts
// that compete under repairs. Immutable once built; node ids are dense and
// assigned in first-appearance order, all adjacency is kept sorted so that
// every traversal in the library is deterministic.
class Instance {
public:
    Instance() = default;

    static Instance from_edges(const std::vector<std::pair<std::string, std::string>>& edges) {
        Instance inst;
        for (const auto& [from, to] : edges) {
            NodeId u = inst.intern(from);  // sequenced: sources intern before targets
            NodeId v = inst.intern(to);
            inst.add_edge(u, v);
        }
        inst.finalize();
        return inst;
    }

    int node_count() const { return static_cast<int>(labels_.size()); }
    std::size_t edge_count() const { return edge_count_; }
    bool empty() const { return edge_count_ == 0; }

    const std::string& label(NodeId u) const { return labels_[static_cast<std::size_t>(u)]; }

    std::optional<NodeId> find_node(std::string_view label) const {
        auto it = by_label_.find(std::string(label));
        if (it == by_label_.end()) return std::nullopt;
        return it->second;
    }

    const std::vector<NodeId>& out(NodeId u) const { return out_[static_cast<std::size_t>(u)]; }
    int out_degree(NodeId u) const { return static_cast<int>(out(u).size()); }

    bool has_edge(NodeId u, NodeId v) const {
        const auto& succ = out(u);
        return std::binary_search(succ.begin(), succ.end(), v);
    }

    // Edges in (source id, target id) ascending order.
    std::vector<std::pair<NodeId, NodeId>> edges() const {
        std::vector<std::pair<NodeId, NodeId>> result;
        result.reserve(edge_count_);
        for (NodeId u = 0; u < node_count(); ++u)
            for (NodeId v : out(u)) result.emplace_back(u, v);
        return result;
    }

    std::vector<std::pair<std::string, std::string>> labeled_edges() const {
        std::vector<std::pair<std::string, std::string>> result;
        result.reserve(edge_count_);
        for (const auto& [u, v] : edges()) result.emplace_back(label(u), label(v));
        return result;
    }

private:
    friend class InstanceBuilder;

    NodeId intern(const std::string& label) {
        auto it = by_label_.find(label);
        if (it != by_label_.end()) return it->second;
        NodeId id = node_count();
        by_label_.emplace(label, id);
        labels_.push_back(label);
        out_.emplace_back();
        return id;
    }

    void add_edge(NodeId u, NodeId v) { out_[static_cast<std::size_t>(u)].push_back(v); }

    void finalize() {
        edge_count_ = 0;
        for (auto& succ : out_) {
            std::sort(succ.begin(), succ.end());
            succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
            edge_count_ += succ.size();
        }
    }

    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> by_label_;
    std::vector<std::vector<NodeId>> out_;
    std::size_t edge_count_ = 0;
};

// Incremental construction, for generators and parsers. `intern` may be used
// to pin label-to-id assignment before any edges exist.
class InstanceBuilder {
public:
    NodeId intern(const std::string& label) { return inst_.intern(label); }

    void add_edge(const std::string& from, const std::string& to) {
        NodeId u = inst_.intern(from);
        NodeId v = inst_.intern(to);
        inst_.add_edge(u, v);
    }

    Instance build() {
        inst_.finalize();
        return std::move(inst_);
    }

private:
    Instance inst_;
};

// Edge-list format: one `<from> <to>` pair per line, `#` starts a comment,
// blank lines ignored, duplicates collapse. Labels are interned in
// first-appearance order.
inline Instance load_instance(std::istream& in) {
    InstanceBuilder builder;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string from, to, extra;
        if (!(fields >> from)) continue;  // blank
        if (!(fields >> to))
            throw ParseError("line " + std::to_string(line_no) + ": missing edge target", line_no);
        if (fields >> extra)
            throw ParseError("line " + std::to_string(line_no) + ": expected two labels per line, got more",
                             line_no);
        builder.add_edge(from, to);
    }
    return builder.build();
}

inline Instance load_instance(const std::string& text) {
    std::istringstream in(text);
    return load_instance(in);
}

// Canonical emitter for the edge-list format: sorted by source label, then
// target label. load_instance(emit_edge_list(i)) reproduces i up to node-id
// renaming.
inline std::string emit_edge_list(const Instance& inst) {
    auto edges = inst.labeled_edges();
    std::sort(edges.begin(), edges.end());
    std::string out;
    for (const auto& [from, to] : edges) {
        out += from;
        out += ' ';
        out += to;
        out += '\n';
    }
    return out;
}

// The key constraint: no node has two outgoing facts.
inline bool is_consistent(const Instance& inst) {
    for (NodeId u = 0; u < inst.node_count(); ++u)
        if (inst.out_degree(u) > 1) return false;
    return true;
}

// Number of subset repairs: every node with out-edges keeps exactly one of
// them, independently, so the count is the product of positive out-degrees.
inline BigInt repair_count(const Instance& inst) {
    BigInt count = 1;
    for (NodeId u = 0; u < inst.node_count(); ++u)
        if (inst.out_degree(u) >= 1) count *= inst.out_degree(u);
    return count;
}

// `candidate` is a repair of `base` iff it keeps exactly one out-edge of every
// node that has any, and nothing else. Node identity is matched by label, so
// repairs materialized as standalone instances compare correctly.
inline bool is_repair(const Instance& candidate, const Instance& base) {
    std::vector<int> kept(static_cast<std::size_t>(base.node_count()), 0);
    for (const auto& [from, to] : candidate.labeled_edges()) {
        auto u = base.find_node(from);
        auto v = base.find_node(to);
        if (!u || !v || !base.has_edge(*u, *v)) return false;  // not a sub-instance
        ++kept[static_cast<std::size_t>(*u)];
    }
    for (NodeId u = 0; u < base.node_count(); ++u) {
        int expected = base.out_degree(u) >= 1 ? 1 : 0;
        if (kept[static_cast<std::size_t>(u)] != expected) return false;
    }
    return true;
}

// Directed walk of exactly `steps` edges, node revisits allowed.
inline bool walk_exists(const Instance& inst, int steps) {
    if (steps <= 0) return inst.node_count() > 0;
    std::vector<char> alive(static_cast<std::size_t>(inst.node_count()), 1);
    for (int k = 0; k < steps; ++k) {
        std::vector<char> next(static_cast<std::size_t>(inst.node_count()), 0);
        bool any = false;
        for (NodeId u = 0; u < inst.node_count(); ++u) {
            for (NodeId v : inst.out(u)) {
                if (alive[static_cast<std::size_t>(v)]) {
                    next[static_cast<std::size_t>(u)] = 1;
                    any = true;
                    break;
                }
            }
        }
        if (!any) return false;
        alive = std::move(next);
    }
    return true;
}

// Closed walk of exactly `len` edges anywhere in the instance. This is the
// evaluation of an n-cycle query: C_n maps homomorphically into a graph iff
// the graph has a closed walk of length n.
inline bool closed_walk_exists(const Instance& inst, int len) {
    if (len <= 0) return false;
    const auto n = static_cast<std::size_t>(inst.node_count());
    for (NodeId start = 0; start < inst.node_count(); ++start) {
        std::vector<char> reach(n, 0);
        reach[static_cast<std::size_t>(start)] = 1;
        for (int k = 0; k < len; ++k) {
            std::vector<char> next(n, 0);
            for (NodeId u = 0; u < inst.node_count(); ++u) {
                if (!reach[static_cast<std::size_t>(u)]) continue;
                for (NodeId v : inst.out(u)) next[static_cast<std::size_t>(v)] = 1;
            }
            reach = std::move(next);
        }
        if (reach[static_cast<std::size_t>(start)]) return true;
    }
    return false;
}

}  // namespace cqa
