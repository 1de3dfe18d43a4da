#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cqa/instance.hpp"
#include "cqa/query.hpp"

namespace cqa {

// The key-equivalent canonical shape of a Boolean conjunctive query: either a
// directed path of `path_edges` edges, or a disjoint collection of cycles
// whose lengths form an antichain under divisibility (if 1 is present it is
// the only length).
struct NormalForm {
    enum class Kind { path, cycles };

    Kind kind = Kind::path;
    int path_edges = 0;              // kind == path
    std::vector<int> cycle_lengths;  // kind == cycles; sorted ascending

    static NormalForm path(int edges) { return {Kind::path, edges, {}}; }
    static NormalForm cycles(std::vector<int> lengths) {
        std::sort(lengths.begin(), lengths.end());
        return {Kind::cycles, 0, std::move(lengths)};
    }

    bool operator==(const NormalForm&) const = default;
};

struct Classification {
    enum class Complexity { fo, ptime_not_fo };

    NormalForm normal_form;
    bool fo_rewritable = false;
    Complexity complexity = Complexity::fo;
};

// `path:<n>` or `cycles:<l1>,<l2>,...` with lengths ascending.
inline std::string to_string(const NormalForm& nf) {
    if (nf.kind == NormalForm::Kind::path) return "path:" + std::to_string(nf.path_edges);
    std::string out = "cycles:";
    for (std::size_t i = 0; i < nf.cycle_lengths.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(nf.cycle_lengths[i]);
    }
    return out;
}

inline const char* to_string(Classification::Complexity c) {
    return c == Classification::Complexity::fo ? "FO" : "PTIME_NOT_FO";
}

// The normal form re-serialized as a plain conjunctive query, with canonical
// x1, x2, ... variable names.
inline ConjunctiveQuery to_query(const NormalForm& nf) {
    ConjunctiveQuery q;
    auto fresh = [&q]() {
        q.names.push_back("x" + std::to_string(q.variable_count() + 1));
        return q.variable_count() - 1;
    };
    if (nf.kind == NormalForm::Kind::path) {
        VariableId prev = fresh();
        for (int k = 0; k < nf.path_edges; ++k) {
            VariableId next = fresh();
            q.atoms.emplace_back(prev, next);
            prev = next;
        }
        return q;
    }
    for (int len : nf.cycle_lengths) {
        VariableId first = fresh();
        VariableId prev = first;
        for (int k = 1; k < len; ++k) {
            VariableId next = fresh();
            q.atoms.emplace_back(prev, next);
            prev = next;
        }
        q.atoms.emplace_back(prev, first);
    }
    return q;
}

// Deduplicates, then drops every length that some other retained length
// divides; the result is an antichain under divisibility. The shorter cycle
// wins because C_m maps homomorphically onto C_k exactly when k divides m,
// making the longer conjunct redundant.
inline std::vector<int> minimal_divisor_set(const std::vector<int>& lengths) {
    std::set<int> distinct(lengths.begin(), lengths.end());
    std::vector<int> kept;
    for (int len : distinct) {
        bool dominated = false;
        for (int other : distinct)
            if (other != len && len % other == 0) dominated = true;
        if (!dominated) kept.push_back(len);
    }
    return kept;
}

namespace detail {

struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }

    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }

    // Keep the smaller id as representative so renaming is deterministic.
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (b < a) std::swap(a, b);
        parent[static_cast<std::size_t>(b)] = a;
        return true;
    }
};

}  // namespace detail

// Merges, to a fixpoint, every pair of second-position variables whose atoms
// share a first-position variable: the finest variable partition making the
// canonical database satisfy the key constraint. The result is key-equivalent
// to the input and its canonical database has out-degree <= 1 everywhere.
inline ConjunctiveQuery key_chase(const ConjunctiveQuery& q) {
    detail::UnionFind uf(q.variable_count());
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<int, int> successor_of;  // class of first var -> class of second var
        for (const auto& [first, second] : q.atoms) {
            int key = uf.find(first);
            int value = uf.find(second);
            auto [it, inserted] = successor_of.emplace(key, value);
            if (!inserted && uf.unite(it->second, value)) {
                changed = true;
                it->second = uf.find(value);
            }
        }
    }

    // Rebuild with representative variables, renumbered densely in
    // first-occurrence order; merged duplicate atoms collapse.
    ConjunctiveQuery chased;
    std::map<int, VariableId> renumber;
    std::set<std::pair<VariableId, VariableId>> seen;
    auto densify = [&](int var) {
        int rep = uf.find(var);
        auto it = renumber.find(rep);
        if (it != renumber.end()) return it->second;
        VariableId id = chased.variable_count();
        chased.names.push_back(q.names[static_cast<std::size_t>(rep)]);
        renumber.emplace(rep, id);
        return id;
    };
    for (const auto& [first, second] : q.atoms) {
        std::pair<VariableId, VariableId> atom{densify(first), densify(second)};
        if (seen.insert(atom).second) chased.atoms.push_back(atom);
    }
    return chased;
}

namespace detail {

// Cycle lengths of a functional graph (out-degree <= 1 everywhere): walk the
// unique successor chain from each node, recording each cycle once.
inline std::vector<int> functional_cycle_lengths(const Instance& g) {
    enum : char { unseen = 0, active = 1, done = 2 };
    std::vector<char> state(static_cast<std::size_t>(g.node_count()), unseen);
    std::vector<int> position(static_cast<std::size_t>(g.node_count()), 0);
    std::vector<int> lengths;
    for (NodeId root = 0; root < g.node_count(); ++root) {
        if (state[static_cast<std::size_t>(root)] != unseen) continue;
        std::vector<NodeId> chain;
        NodeId u = root;
        while (u >= 0 && state[static_cast<std::size_t>(u)] == unseen) {
            state[static_cast<std::size_t>(u)] = active;
            position[static_cast<std::size_t>(u)] = static_cast<int>(chain.size());
            chain.push_back(u);
            u = g.out(u).empty() ? -1 : g.out(u).front();
        }
        if (u >= 0 && state[static_cast<std::size_t>(u)] == active)
            lengths.push_back(static_cast<int>(chain.size()) - position[static_cast<std::size_t>(u)]);
        for (NodeId v : chain) state[static_cast<std::size_t>(v)] = done;
    }
    return lengths;
}

// Longest directed path (in edges) of an acyclic functional graph.
inline int functional_longest_path(const Instance& g) {
    std::vector<int> depth(static_cast<std::size_t>(g.node_count()), -1);
    auto chain_depth = [&](auto&& self, NodeId u) -> int {
        int& memo = depth[static_cast<std::size_t>(u)];
        if (memo >= 0) return memo;
        memo = g.out(u).empty() ? 0 : 1 + self(self, g.out(u).front());
        return memo;
    };
    int best = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) best = std::max(best, chain_depth(chain_depth, u));
    return best;
}

}  // namespace detail

// Chases the key constraint, then reads the normal form off the resulting
// functional canonical database: acyclic means a path query (longest chain);
// otherwise the cycles survive, pruned to a divisibility antichain, and every
// tree part folds onto a cycle and disappears.
inline Classification classify(const ConjunctiveQuery& q) {
    Instance chased_db = canonical_database(key_chase(q));
    std::vector<int> cycle_lengths = detail::functional_cycle_lengths(chased_db);

    Classification result;
    if (cycle_lengths.empty()) {
        result.normal_form = NormalForm::path(detail::functional_longest_path(chased_db));
    } else {
        result.normal_form = NormalForm::cycles(minimal_divisor_set(cycle_lengths));
    }
    const NormalForm& nf = result.normal_form;
    result.fo_rewritable = nf.kind == NormalForm::Kind::path ||
                           (nf.cycle_lengths.size() == 1 && nf.cycle_lengths.front() == 1);
    result.complexity = result.fo_rewritable ? Classification::Complexity::fo
                                             : Classification::Complexity::ptime_not_fo;
    return result;
}

}  // namespace cqa
