#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cqa/instance.hpp"

namespace cqa {

namespace detail {

// `links` consecutive n-cycles sharing the nodes <shared>0 .. <shared><links>:
// cycle i runs <shared><i-1> -> <interior><i>_1 -> ... -> <interior><i>_<n-2>
// -> <shared><i> -> <shared><i-1>. For n = 2 there are no interior nodes and
// the chain degenerates to a path of mutual edge pairs.
inline void append_cycle_chain(InstanceBuilder& builder, int cycle_len, int links,
                               const std::string& shared_prefix, const std::string& interior_prefix) {
    auto shared = [&](int i) { return shared_prefix + std::to_string(i); };
    for (int i = 1; i <= links; ++i) {
        std::string prev = shared(i - 1);
        for (int k = 1; k <= cycle_len - 2; ++k) {
            std::string mid = interior_prefix + std::to_string(i) + "_" + std::to_string(k);
            builder.add_edge(prev, mid);
            prev = mid;
        }
        builder.add_edge(prev, shared(i));
        builder.add_edge(shared(i), shared(i - 1));
    }
}

}  // namespace detail

// A chain of `links` consecutive cycle_len-cycles, adjacent cycles sharing
// one node. Every repair of the plain chain keeps a cycle: the only nodes
// with a choice are the shared ones, and refusing every backward edge forces
// the final cycle intact.
inline Instance gen_cycle_chain(int cycle_len, int links) {
    if (cycle_len < 2) throw std::invalid_argument("gen_cycle_chain expects cycle_len >= 2");
    if (links < 1) throw std::invalid_argument("gen_cycle_chain expects links >= 1");
    InstanceBuilder builder;
    detail::append_cycle_chain(builder, cycle_len, links, "c", "b");
    return builder.build();
}

// An indistinguishability pair for the cycle_len-Cycle query: cert is true on
// d1 and false on d2 for every distance >= 1 (the separation parameter only
// grows the instances; it never changes the verdicts).
struct EfPair {
    Instance d1;
    Instance d2;
    int cycle_len = 2;
    int distance = 1;
};

// Both instances are two disjoint chains of 3*distance consecutive
// cycle_len-cycles with spurs attached to shared nodes at positions distance
// and 2*distance (a spur is a fresh leaf with a single edge in or out).
// Outgoing spurs let a repair escape all cycles of a chain; incoming spurs do
// not. d1 keeps one chain spur-free of outgoing edges, d2 gives every chain
// an outgoing spur.
inline EfPair gen_ef_pair(int cycle_len, int distance) {
    if (cycle_len < 2) throw std::invalid_argument("gen_ef_pair expects cycle_len >= 2");
    if (distance < 1) throw std::invalid_argument("gen_ef_pair expects distance >= 1");
    const int links = 3 * distance;
    const int near = distance, far = 2 * distance;
    auto chain_node = [](int chain, int i) {
        return "p" + std::to_string(chain) + "_" + std::to_string(i);
    };
    auto build_chain = [&](InstanceBuilder& builder, int chain) {
        detail::append_cycle_chain(builder, cycle_len, links, "p" + std::to_string(chain) + "_",
                                   "p" + std::to_string(chain) + "_b");
    };

    EfPair pair;
    pair.cycle_len = cycle_len;
    pair.distance = distance;

    {
        InstanceBuilder builder;
        build_chain(builder, 1);
        build_chain(builder, 2);
        if (cycle_len == 2) {
            builder.add_edge(chain_node(1, near), "out_0");
            builder.add_edge(chain_node(1, far), "out_1");
            builder.add_edge("in_0", chain_node(2, near));
            builder.add_edge("in_1", chain_node(2, far));
        } else {
            builder.add_edge("in_0", chain_node(1, near));
            builder.add_edge("in_1", chain_node(1, far));
            builder.add_edge("in_2", chain_node(2, near));
            builder.add_edge("in_3", chain_node(2, far));
        }
        pair.d1 = builder.build();
    }
    {
        InstanceBuilder builder;
        build_chain(builder, 1);
        build_chain(builder, 2);
        builder.add_edge("in_0", chain_node(1, near));
        builder.add_edge(chain_node(1, far), "out_0");
        builder.add_edge("in_1", chain_node(2, near));
        builder.add_edge(chain_node(2, far), "out_1");
        pair.d2 = builder.build();
    }
    return pair;
}

// Seed-deterministic simple directed graph: draws (rng() % nodes, rng() % nodes)
// pairs from a std::mt19937_64 seeded with `seed`, skipping duplicates, until
// `edges` distinct edges exist. Self-loops are allowed; labels are n0..n<k>.
// The modulo draw and generator are pinned so corpora reproduce everywhere.
inline Instance gen_random(int nodes, int edges, std::uint64_t seed) {
    if (nodes < 1) throw std::invalid_argument("gen_random expects nodes >= 1");
    if (edges < 0 || static_cast<long long>(edges) > static_cast<long long>(nodes) * nodes)
        throw std::invalid_argument("gen_random expects 0 <= edges <= nodes^2");
    std::mt19937_64 rng(seed);
    std::set<std::pair<int, int>> chosen;
    InstanceBuilder builder;
    while (static_cast<int>(chosen.size()) < edges) {
        int u = static_cast<int>(rng() % static_cast<std::uint64_t>(nodes));
        int v = static_cast<int>(rng() % static_cast<std::uint64_t>(nodes));
        if (!chosen.emplace(u, v).second) continue;
        builder.add_edge("n" + std::to_string(u), "n" + std::to_string(v));
    }
    return builder.build();
}

// Copy of an instance with one extra edge; fresh labels create fresh nodes.
inline Instance with_edge(const Instance& base, const std::string& from, const std::string& to) {
    auto edges = base.labeled_edges();
    edges.emplace_back(from, to);
    return Instance::from_edges(edges);
}

}  // namespace cqa
