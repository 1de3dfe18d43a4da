#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cqa/certain.hpp"
#include "cqa/fixtures.hpp"
#include "cqa/homomorphism.hpp"
#include "cqa/oracle.hpp"
#include "cqa/query.hpp"
#include "support/test_util.hpp"

using namespace cqa;
using test::directed_cycle;
using test::inst;

TEST_CASE("cert_path evaluates the inductive rewriting", "[certain]") {
    REQUIRE(cert_path(2, inst({{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "e"}})));
    REQUIRE_FALSE(cert_path(2, inst({{"a", "b"}, {"a", "c"}, {"b", "d"}})));
    for (int n = 1; n <= 6; ++n) REQUIRE(cert_path(n, inst({{"a", "a"}})));

    SECTION("path monotonicity") {
        std::mt19937_64 rng(67);
        for (int trial = 0; trial < 100; ++trial) {
            Instance i = test::random_instance(rng, 6, 10);
            for (int n = 4; n >= 2; --n)
                if (cert_path(n, i))
                    for (int k = 1; k < n; ++k) REQUIRE(cert_path(k, i));
        }
    }
}

TEST_CASE("cert_self_loop needs a forced loop", "[certain]") {
    REQUIRE(cert_self_loop(inst({{"a", "a"}})));
    REQUIRE_FALSE(cert_self_loop(inst({{"a", "a"}, {"a", "b"}})));
    REQUIRE(cert_self_loop(inst({{"a", "a"}, {"b", "a"}})));
}

TEST_CASE("cert_cycle looks for a certifying sink component", "[certain]") {
    REQUIRE(cert_cycle(2, inst({{"a", "b"}, {"b", "a"}})).first);
    REQUIRE_FALSE(cert_cycle(2, directed_cycle(4)).first);

    SECTION("self-loops certify every length") {
        REQUIRE(cert_cycle(2, inst({{"a", "a"}})).first);
        REQUIRE(cert_cycle(3, inst({{"a", "a"}})).first);
    }
    SECTION("an edge-less sink component certifies nothing") {
        REQUIRE_FALSE(cert_cycle(2, inst({{"a", "b"}})).first);
    }
    SECTION("witness soundness: all witness cycles divide n") {
        std::mt19937_64 rng(71);
        for (int trial = 0; trial < 150; ++trial) {
            Instance i = test::random_instance(rng, 6, 10);
            for (int n = 2; n <= 4; ++n) {
                auto [certain, witness] = cert_cycle(n, i);
                if (!certain) continue;
                REQUIRE(witness);
                auto cycles =
                    simple_cycles_up_to(i, *witness, i.node_count(), i.node_count());
                REQUIRE_FALSE(cycles.empty());
                for (const auto& cycle : cycles) REQUIRE(n % static_cast<int>(cycle.size()) == 0);
            }
        }
    }
    SECTION("chain with an outgoing spur loses certainty") {
        Instance chain = gen_cycle_chain(3, 2);
        REQUIRE(cert_cycle(3, chain).first);
        REQUIRE_FALSE(cert_cycle(3, with_edge(chain, "c1", "leak")).first);
    }
}

TEST_CASE("cert_cycle_collection needs a witness per length", "[certain]") {
    Instance both = inst({{"a", "b"}, {"b", "a"}, {"p", "q"}, {"q", "r"}, {"r", "p"}});
    auto [ok, witnesses] = cert_cycle_collection({2, 3}, both);
    REQUIRE(ok);
    REQUIRE(witnesses.size() == 2);
    REQUIRE(witnesses.at(2) != witnesses.at(3));

    REQUIRE_FALSE(cert_cycle_collection({2, 3}, inst({{"a", "b"}, {"b", "a"}})).first);

    SECTION("one self-loop component serves several lengths") {
        auto [ok1, w] = cert_cycle_collection({2, 3}, inst({{"a", "a"}}));
        REQUIRE(ok1);
        REQUIRE(w.at(2) == w.at(3));
    }
    SECTION("a leaky pair plus a triangle still lacks the 2-witness") {
        auto edges = gen_ef_pair(2, 2).d2.labeled_edges();
        edges.insert(edges.end(), {{"t0", "t1"}, {"t1", "t2"}, {"t2", "t0"}});
        Instance joined = Instance::from_edges(edges);
        REQUIRE_FALSE(cert_cycle_collection({2, 3}, joined).first);
        REQUIRE(cert_cycle(3, joined).first);
        REQUIRE_FALSE(certain_answer(NormalForm::cycles({2, 3}), joined).certain);
        REQUIRE_FALSE(oracle_certain(to_query(NormalForm::cycles({2, 3})), joined, 1 << 20));
    }
}

TEST_CASE("certain_answer dispatches by normal form", "[certain]") {
    SECTION("paths") {
        CertVerdict v = certain_answer(NormalForm::path(2), inst({{"a", "b"}, {"b", "c"}}));
        REQUIRE(v.certain);
        REQUIRE(v.rule == CertRule::path_psi);
    }
    SECTION("self-loop") {
        CertVerdict v = certain_answer(NormalForm::cycles({1}), inst({{"a", "a"}, {"a", "b"}}), true);
        REQUIRE_FALSE(v.certain);
        REQUIRE(v.rule == CertRule::self_loop);
        REQUIRE(v.falsifying_repair);
        REQUIRE(emit_edge_list(*v.falsifying_repair) == "a b\n");
    }
    SECTION("empty instance is never certain") {
        for (const NormalForm& nf :
             {NormalForm::path(1), NormalForm::cycles({1}), NormalForm::cycles({2, 3})}) {
            CertVerdict v = certain_answer(nf, Instance{}, true);
            REQUIRE_FALSE(v.certain);
            REQUIRE(v.rule == CertRule::empty_instance);
            REQUIRE(v.falsifying_repair);
            REQUIRE(v.falsifying_repair->empty());
        }
    }
    SECTION("cycle rules carry witnesses") {
        CertVerdict v = certain_answer(NormalForm::cycles({2}), inst({{"a", "b"}, {"b", "a"}}));
        REQUIRE(v.certain);
        REQUIRE(v.rule == CertRule::cycle_sink_scc);
        REQUIRE(v.witness_component == std::vector<NodeId>{0, 1});

        Instance both = inst({{"a", "b"}, {"b", "a"}, {"p", "q"}, {"q", "r"}, {"r", "p"}});
        CertVerdict w = certain_answer(NormalForm::cycles({2, 3}), both);
        REQUIRE(w.certain);
        REQUIRE(w.rule == CertRule::cycle_collection);
        REQUIRE(w.witness_component == std::vector<NodeId>{0, 1});
    }
    SECTION("malformed normal forms are rejected") {
        REQUIRE_THROWS_AS(certain_answer(NormalForm::path(0), Instance{}), std::invalid_argument);
        REQUIRE_THROWS_AS(certain_answer(NormalForm::cycles({2, 4}), Instance{}), std::invalid_argument);
        REQUIRE_THROWS_AS(certain_answer(NormalForm::cycles({}), Instance{}), std::invalid_argument);
    }
}

TEST_CASE("build_falsifying_repair constructs verified counterexamples", "[certain]") {
    SECTION("path greedy keeps dead ends") {
        auto repair = build_falsifying_repair(NormalForm::path(2), inst({{"a", "b"}, {"a", "c"}, {"b", "d"}}));
        REQUIRE(repair);
        REQUIRE(emit_edge_list(*repair) == "a c\nb d\n");
    }
    SECTION("a consistent instance falsifies itself") {
        Instance four = directed_cycle(4);
        auto repair = build_falsifying_repair(NormalForm::cycles({2}), four);
        REQUIRE(repair);
        REQUIRE(emit_edge_list(*repair) == emit_edge_list(four));
    }
    SECTION("returns nothing when the answer is certain") {
        REQUIRE_FALSE(build_falsifying_repair(NormalForm::path(1), inst({{"a", "b"}})));
    }
}

namespace {

const std::vector<NormalForm>& standard_forms() {
    static const std::vector<NormalForm> forms = {
        NormalForm::path(1),     NormalForm::path(2),     NormalForm::path(3),
        NormalForm::path(4),     NormalForm::cycles({1}), NormalForm::cycles({2}),
        NormalForm::cycles({3}), NormalForm::cycles({2, 3}),
    };
    return forms;
}

}  // namespace

TEST_CASE("certain_answer agrees with the oracle", "[certain][property]") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 250; ++trial) {
        Instance i = test::random_instance(rng, 6, 9);
        if (repair_count(i) > 4096) continue;
        for (const NormalForm& nf : standard_forms()) {
            bool expected = oracle_certain(to_query(nf), i, 4096);
            CertVerdict v = certain_answer(nf, i, !expected);
            REQUIRE(v.certain == expected);
            if (!expected) {
                REQUIRE(v.falsifying_repair);
                REQUIRE(is_repair(*v.falsifying_repair, i));
                REQUIRE_FALSE(evaluate(to_query(nf), *v.falsifying_repair));
            }
        }
    }
}

TEST_CASE("consistent instances reduce to plain evaluation", "[certain][property]") {
    std::mt19937_64 rng(79);
    int consistent_seen = 0;
    for (int trial = 0; trial < 400; ++trial) {
        Instance i = test::random_instance(rng, 5, 6);
        if (!is_consistent(i)) continue;
        ++consistent_seen;
        for (const NormalForm& nf : standard_forms())
            REQUIRE(certain_answer(nf, i).certain == evaluate(to_query(nf), i));
    }
    REQUIRE(consistent_seen > 10);
}
