#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cqa/errors.hpp"
#include "cqa/homomorphism.hpp"
#include "cqa/instance.hpp"
#include "cqa/query.hpp"

namespace cqa {

inline constexpr std::uint64_t kDefaultRepairCap = std::uint64_t{1} << 20;

// One repair, addressed as a choice of kept out-edge per node of the base
// instance. Repairs are consistent, so each node has at most one successor.
class RepairView {
public:
    RepairView(const Instance& base, const std::vector<int>& choice)
        : base_(&base), choice_(&choice) {}

    const Instance& base() const { return *base_; }

    std::optional<NodeId> successor(NodeId u) const {
        int pick = (*choice_)[static_cast<std::size_t>(u)];
        if (pick < 0) return std::nullopt;
        return base_->out(u)[static_cast<std::size_t>(pick)];
    }

    Instance to_instance() const {
        InstanceBuilder builder;
        for (NodeId u = 0; u < base_->node_count(); ++u)
            if (auto v = successor(u)) builder.add_edge(base_->label(u), base_->label(*v));
        return builder.build();
    }

private:
    const Instance* base_;
    const std::vector<int>* choice_;
};

// Walks every repair exactly once, in lexicographic choice-vector order
// (nodes ascending; out-edges ascending by target id). Throws before yielding
// anything if the repair count exceeds `cap` — the oracle is exact or absent,
// never a sample.
class RepairIterator {
public:
    RepairIterator(const Instance& base, std::uint64_t cap = kDefaultRepairCap) : base_(base) {
        BigInt total = repair_count(base);
        if (total > cap)
            throw ResourceLimitError("repair enumeration over cap " + std::to_string(cap) + ": instance has " +
                                     total.str() + " repairs");
        choice_.assign(static_cast<std::size_t>(base.node_count()), -1);
        for (NodeId u = 0; u < base.node_count(); ++u)
            if (base.out_degree(u) >= 1) {
                choice_[static_cast<std::size_t>(u)] = 0;
                chosen_nodes_.push_back(u);
            }
        done_ = false;
    }

    bool done() const { return done_; }
    RepairView current() const { return RepairView(base_, choice_); }

    void advance() {
        for (auto it = chosen_nodes_.rbegin(); it != chosen_nodes_.rend(); ++it) {
            NodeId u = *it;
            int& pick = choice_[static_cast<std::size_t>(u)];
            if (pick + 1 < base_.out_degree(u)) {
                ++pick;
                return;
            }
            pick = 0;
        }
        done_ = true;
    }

private:
    const Instance& base_;
    std::vector<int> choice_;
    std::vector<NodeId> chosen_nodes_;
    bool done_ = true;
};

template <typename Callback>
void for_each_repair(const Instance& base, std::uint64_t cap, Callback&& callback) {
    for (RepairIterator it(base, cap); !it.done(); it.advance()) callback(it.current());
}

inline std::vector<Instance> enumerate_repairs(const Instance& base,
                                               std::uint64_t cap = kDefaultRepairCap) {
    std::vector<Instance> repairs;
    for_each_repair(base, cap, [&](const RepairView& view) { repairs.push_back(view.to_instance()); });
    return repairs;
}

namespace detail {

// Evaluating a path- or cycle-shaped query on a repair needs only successor
// chasing: the walk from any node of a consistent instance is unique.
inline bool walk_of_length_exists(const RepairView& repair, int steps) {
    const Instance& base = repair.base();
    for (NodeId start = 0; start < base.node_count(); ++start) {
        NodeId u = start;
        int k = 0;
        for (; k < steps; ++k) {
            auto v = repair.successor(u);
            if (!v) break;
            u = *v;
        }
        if (k == steps) return true;
    }
    return false;
}

inline bool closed_walk_of_length_exists(const RepairView& repair, int len) {
    const Instance& base = repair.base();
    for (NodeId start = 0; start < base.node_count(); ++start) {
        NodeId u = start;
        bool alive = true;
        for (int k = 0; k < len; ++k) {
            auto v = repair.successor(u);
            if (!v) {
                alive = false;
                break;
            }
            u = *v;
        }
        if (alive && u == start) return true;
    }
    return false;
}

inline bool evaluate_on_repair(const Instance& canonical,
                               const std::optional<PathCycleShape>& shape, const RepairView& repair) {
    if (shape) {
        for (int len : shape->path_lengths)
            if (!walk_of_length_exists(repair, len)) return false;
        for (int len : shape->cycle_lengths)
            if (!closed_walk_of_length_exists(repair, len)) return false;
        return true;
    }
    return evaluate_database(canonical, repair.to_instance());
}

}  // namespace detail

// Ground truth by definition: q must hold on every repair.
inline bool oracle_certain(const ConjunctiveQuery& q, const Instance& i,
                           std::uint64_t cap = kDefaultRepairCap) {
    Instance canonical = canonical_database(q);
    auto shape = detail::decompose_path_cycle_shape(canonical);
    for (RepairIterator it(i, cap); !it.done(); it.advance())
        if (!detail::evaluate_on_repair(canonical, shape, it.current())) return false;
    return true;
}

// Number of repairs satisfying q; equals repair_count(i) exactly when
// oracle_certain(q, i) holds.
inline BigInt count_satisfying_repairs(const ConjunctiveQuery& q, const Instance& i,
                                       std::uint64_t cap = kDefaultRepairCap) {
    Instance canonical = canonical_database(q);
    auto shape = detail::decompose_path_cycle_shape(canonical);
    BigInt count = 0;
    for (RepairIterator it(i, cap); !it.done(); it.advance())
        if (detail::evaluate_on_repair(canonical, shape, it.current())) ++count;
    return count;
}

}  // namespace cqa
