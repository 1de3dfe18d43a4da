#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cqa/condensation.hpp"
#include "cqa/cycles.hpp"
#include "cqa/homomorphism.hpp"
#include "cqa/instance.hpp"
#include "cqa/normalize.hpp"

namespace cqa {

enum class CertRule { path_psi, self_loop, cycle_sink_scc, cycle_collection, empty_instance };

inline const char* to_string(CertRule rule) {
    switch (rule) {
        case CertRule::path_psi: return "PATH_PSI";
        case CertRule::self_loop: return "SELF_LOOP";
        case CertRule::cycle_sink_scc: return "CYCLE_SINK_SCC";
        case CertRule::cycle_collection: return "CYCLE_COLLECTION";
        case CertRule::empty_instance: return "EMPTY_INSTANCE";
    }
    return "?";
}

// Certain-answer verdict with provenance: which decision rule fired, the sink
// component certifying a "yes" for cycle queries (for collections, the
// witness of the smallest cycle length), and optionally a repair falsifying
// the query when the answer is "no".
struct CertVerdict {
    bool certain = false;
    CertRule rule = CertRule::empty_instance;
    std::optional<std::vector<NodeId>> witness_component;
    std::optional<Instance> falsifying_repair;
};

// Level-k survival: f0 is true everywhere; f_k(u) holds iff u has an
// out-edge and every out-neighbor survives at level k-1. Then cert(n-Path)
// is "some node survives at level n": whatever single out-edge a repair
// keeps at each node, a walk of n edges remains.
inline bool cert_path(int n, const Instance& i) {
    std::vector<char> level(static_cast<std::size_t>(i.node_count()), 1);
    for (int k = 1; k <= n; ++k) {
        std::vector<char> next(static_cast<std::size_t>(i.node_count()), 0);
        bool any = false;
        for (NodeId u = 0; u < i.node_count(); ++u) {
            if (i.out_degree(u) < 1) continue;
            bool all = true;
            for (NodeId v : i.out(u))
                if (!level[static_cast<std::size_t>(v)]) {
                    all = false;
                    break;
                }
            if (all) {
                next[static_cast<std::size_t>(u)] = 1;
                any = true;
            }
        }
        if (!any) return false;
        level = std::move(next);
    }
    return true;
}

// cert(1-Cycle): some node's only out-edge is its self-loop, so every repair
// must keep it.
inline bool cert_self_loop(const Instance& i) {
    for (NodeId u = 0; u < i.node_count(); ++u)
        if (i.out_degree(u) == 1 && i.out(u).front() == u) return true;
    return false;
}

namespace detail {

// A simple k-cycle is a homomorphic image of C_n exactly when k divides n, so
// a sink component certifies cert(n-Cycle) iff it has no simple cycle longer
// than n and every shorter one has length dividing n.
inline bool component_certifies_cycle(const Instance& i, const std::vector<NodeId>& component, int n) {
    if (has_long_simple_cycle(i, component, n)) return false;
    for (const auto& cycle : simple_cycles_up_to(i, component, n, n))
        if (n % static_cast<int>(cycle.size()) != 0) return false;
    return true;
}

}  // namespace detail

// cert(n-Cycle), n >= 2: true iff some nontrivial sink strongly connected
// component has all of its simple cycles homomorphic images of C_n. Every
// repair keeps a cycle inside each nontrivial sink component, and conversely
// a failing component can be steered to a cycle that is not an image.
inline std::pair<bool, std::optional<std::vector<NodeId>>> cert_cycle(int n, const Instance& i) {
    if (n < 2) throw std::invalid_argument("cert_cycle expects n >= 2; the 1-cycle is cert_self_loop");
    for (const auto& component : sink_components(i, /*nontrivial_only=*/true))
        if (detail::component_certifies_cycle(i, component, n)) return {true, component};
    return {false, std::nullopt};
}

// Conjunction over the collection: every length needs its own certifying sink
// component (one component may serve several lengths).
inline std::pair<bool, std::map<int, std::vector<NodeId>>> cert_cycle_collection(
    const std::vector<int>& lengths, const Instance& i) {
    auto sinks = sink_components(i, /*nontrivial_only=*/true);
    std::map<int, std::vector<NodeId>> witnesses;
    for (int n : lengths) {
        if (n < 2)
            throw std::invalid_argument("cert_cycle_collection expects lengths >= 2; route {1} to cert_self_loop");
        bool found = false;
        for (const auto& component : sinks) {
            if (detail::component_certifies_cycle(i, component, n)) {
                witnesses.emplace(n, component);
                found = true;
                break;
            }
        }
        if (!found) return {false, {}};
    }
    return {true, std::move(witnesses)};
}

namespace detail {

inline void check_normal_form(const NormalForm& nf) {
    if (nf.kind == NormalForm::Kind::path) {
        if (nf.path_edges < 1) throw std::invalid_argument("normal form: path length must be >= 1");
        return;
    }
    if (nf.cycle_lengths.empty())
        throw std::invalid_argument("normal form: cycle collection must be non-empty");
    for (int a : nf.cycle_lengths)
        for (int b : nf.cycle_lengths)
            if (a != b && b % a == 0)
                throw std::invalid_argument("normal form: cycle lengths must form a divisibility antichain");
}

// Extends a set of anchored cycles to a full repair that contains no other
// cycle: every remaining node keeps an edge that strictly decreases its
// distance to an anchor node or to a node with no out-edges, so no new cycle
// can close. Distances are finite because every path eventually reaches a
// sink component, whose anchor (or edge-less node) is reachable within it.
inline Instance extend_repair_avoiding_cycles(const Instance& i,
                                              const std::vector<std::vector<NodeId>>& anchor_cycles) {
    const auto n = static_cast<std::size_t>(i.node_count());
    std::vector<int> kept(n, -1);
    std::vector<char> anchored(n, 0);
    for (const auto& cycle : anchor_cycles) {
        for (std::size_t k = 0; k < cycle.size(); ++k) {
            NodeId u = cycle[k];
            NodeId v = cycle[(k + 1) % cycle.size()];
            kept[static_cast<std::size_t>(u)] = v;
            anchored[static_cast<std::size_t>(u)] = 1;
        }
    }

    // Multi-source BFS over reversed edges from anchors and dead ends.
    auto in = in_adjacency(i);
    std::vector<int> dist(n, -1);
    std::vector<NodeId> queue;
    for (NodeId u = 0; u < i.node_count(); ++u) {
        if (anchored[static_cast<std::size_t>(u)] || i.out_degree(u) == 0) {
            dist[static_cast<std::size_t>(u)] = 0;
            queue.push_back(u);
        }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        NodeId v = queue[head];
        for (NodeId u : in[static_cast<std::size_t>(v)]) {
            if (dist[static_cast<std::size_t>(u)] != -1) continue;
            dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
            queue.push_back(u);
        }
    }

    for (NodeId u = 0; u < i.node_count(); ++u) {
        if (kept[static_cast<std::size_t>(u)] != -1 || i.out_degree(u) == 0) continue;
        NodeId best = -1;
        for (NodeId v : i.out(u)) {
            int dv = dist[static_cast<std::size_t>(v)];
            if (dv == -1 || dv >= dist[static_cast<std::size_t>(u)]) continue;
            if (best == -1 || dv < dist[static_cast<std::size_t>(best)] ||
                (dv == dist[static_cast<std::size_t>(best)] && v < best))
                best = v;
        }
        if (best == -1)
            throw std::logic_error("repair extension found no distance-decreasing edge");
        kept[static_cast<std::size_t>(u)] = best;
    }

    InstanceBuilder builder;
    for (NodeId u = 0; u < i.node_count(); ++u)
        if (kept[static_cast<std::size_t>(u)] != -1)
            builder.add_edge(i.label(u), i.label(static_cast<NodeId>(kept[static_cast<std::size_t>(u)])));
    return builder.build();
}

// A repair with no walk of length n, built from the survival levels of
// cert_path: each node keeps the out-edge to its least-surviving neighbor.
// Kept edges strictly decrease the survival level and level-0 nodes are dead
// ends, so no walk can take n steps.
inline Instance path_falsifying_repair(int n, const Instance& i) {
    const auto size = static_cast<std::size_t>(i.node_count());
    std::vector<int> rank(size, 0);
    std::vector<char> level(size, 1);
    for (int k = 1; k <= n; ++k) {
        std::vector<char> next(size, 0);
        for (NodeId u = 0; u < i.node_count(); ++u) {
            if (i.out_degree(u) < 1) continue;
            bool all = true;
            for (NodeId v : i.out(u))
                if (!level[static_cast<std::size_t>(v)]) {
                    all = false;
                    break;
                }
            if (all) {
                next[static_cast<std::size_t>(u)] = 1;
                rank[static_cast<std::size_t>(u)] = k;
            }
        }
        level = std::move(next);
    }

    InstanceBuilder builder;
    for (NodeId u = 0; u < i.node_count(); ++u) {
        if (i.out_degree(u) == 0) continue;
        NodeId best = i.out(u).front();
        for (NodeId v : i.out(u))
            if (rank[static_cast<std::size_t>(v)] < rank[static_cast<std::size_t>(best)]) best = v;
        builder.add_edge(i.label(u), i.label(best));
    }
    return builder.build();
}

// A repair with no self-loop: every looping node also has a foreign out-edge
// (else the answer would have been certain), so keep that one.
inline Instance self_loop_falsifying_repair(const Instance& i) {
    InstanceBuilder builder;
    for (NodeId u = 0; u < i.node_count(); ++u) {
        if (i.out_degree(u) == 0) continue;
        NodeId pick = -1;
        for (NodeId v : i.out(u))
            if (v != u) {
                pick = v;
                break;
            }
        if (pick == -1)
            throw std::logic_error("self-loop falsification hit a node whose only edge is its loop");
        builder.add_edge(i.label(u), i.label(pick));
    }
    return builder.build();
}

// In every nontrivial sink component, pick one simple cycle that is not a
// homomorphic image of C_n (one exists whenever the component does not
// certify n), then extend while breaking every other cycle.
inline Instance cycle_falsifying_repair(int n, const Instance& i) {
    std::vector<std::vector<NodeId>> anchors;
    for (const auto& component : sink_components(i, /*nontrivial_only=*/true)) {
        std::optional<std::vector<NodeId>> bad;
        for (const auto& cycle : simple_cycles_up_to(i, component, n, n)) {
            if (n % static_cast<int>(cycle.size()) != 0) {
                bad = cycle;
                break;
            }
        }
        if (!bad) bad = find_long_simple_cycle(i, component, n);
        if (!bad)
            throw std::logic_error("cycle falsification: a sink component certifies the query after all");
        anchors.push_back(std::move(*bad));
    }
    return extend_repair_avoiding_cycles(i, anchors);
}

}  // namespace detail

// A repair of i on which the normalized query evaluates to false; defined
// whenever the certain answer is negative. The construction is deterministic
// (least-id tie-breaks) and verified before returning: a result that is not a
// repair, or on which the query still holds, is an implementation bug.
inline std::optional<Instance> build_falsifying_repair(const NormalForm& nf, const Instance& i) {
    detail::check_normal_form(nf);
    Instance repair;
    if (i.empty()) {
        repair = i;
    } else if (nf.kind == NormalForm::Kind::path) {
        if (cert_path(nf.path_edges, i)) return std::nullopt;
        repair = detail::path_falsifying_repair(nf.path_edges, i);
    } else if (nf.cycle_lengths.size() == 1 && nf.cycle_lengths.front() == 1) {
        if (cert_self_loop(i)) return std::nullopt;
        repair = detail::self_loop_falsifying_repair(i);
    } else {
        // Smallest length with no certifying sink component breaks the whole
        // conjunction.
        std::optional<int> failing;
        for (int n : nf.cycle_lengths) {
            if (!cert_cycle(n, i).first) {
                failing = n;
                break;
            }
        }
        if (!failing) return std::nullopt;
        repair = detail::cycle_falsifying_repair(*failing, i);
    }

    if (!is_repair(repair, i))
        throw std::logic_error("falsifying construction did not produce a repair");
    if (evaluate(to_query(nf), repair))
        throw std::logic_error("falsifying construction produced a repair satisfying the query");
    return repair;
}

// Certain-answer dispatcher over all normal forms. On the empty instance the
// unique repair is empty and satisfies no conjunctive query.
inline CertVerdict certain_answer(const NormalForm& nf, const Instance& i,
                                  bool want_counterexample = false) {
    detail::check_normal_form(nf);
    CertVerdict verdict;
    if (i.empty()) {
        verdict.certain = false;
        verdict.rule = CertRule::empty_instance;
    } else if (nf.kind == NormalForm::Kind::path) {
        verdict.certain = cert_path(nf.path_edges, i);
        verdict.rule = CertRule::path_psi;
    } else if (nf.cycle_lengths.size() == 1 && nf.cycle_lengths.front() == 1) {
        verdict.certain = cert_self_loop(i);
        verdict.rule = CertRule::self_loop;
    } else if (nf.cycle_lengths.size() == 1) {
        auto [certain, witness] = cert_cycle(nf.cycle_lengths.front(), i);
        verdict.certain = certain;
        verdict.rule = CertRule::cycle_sink_scc;
        verdict.witness_component = std::move(witness);
    } else {
        auto [certain, witnesses] = cert_cycle_collection(nf.cycle_lengths, i);
        verdict.certain = certain;
        verdict.rule = CertRule::cycle_collection;
        if (certain) verdict.witness_component = witnesses.begin()->second;
    }
    if (!verdict.certain && want_counterexample)
        verdict.falsifying_repair = build_falsifying_repair(nf, i);
    return verdict;
}

}  // namespace cqa
