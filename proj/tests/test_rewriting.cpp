#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cqa/certain.hpp"
#include "cqa/fo.hpp"
#include "support/test_util.hpp"

using namespace cqa;

TEST_CASE("emitted sentences are the pinned rewritings", "[fo]") {
    auto psi1 = emit_fo_rewriting(NormalForm::path(1));
    REQUIRE(psi1);
    REQUIRE(psi1->text == "E v0. E v1. R(v0,v1)");
    REQUIRE(psi1->quantifier_depth == 2);

    auto psi2 = emit_fo_rewriting(NormalForm::path(2));
    REQUIRE(psi2);
    REQUIRE(psi2->text ==
            "E v0. E v1. E v2. R(v0,v1) & R(v1,v2) & (A v3. R(v0,v3) -> (E v4. R(v3,v4)))");
    REQUIRE(psi2->quantifier_depth == 5);

    auto psi3 = emit_fo_rewriting(NormalForm::path(3));
    REQUIRE(psi3);
    REQUIRE(psi3->text ==
            "E v0. E v1. E v2. E v3. R(v0,v1) & R(v1,v2) & R(v2,v3) & "
            "(A v4. R(v0,v4) -> (E v5. E v6. R(v4,v5) & R(v5,v6) & "
            "(A v7. R(v4,v7) -> (E v8. R(v7,v8)))))");
    REQUIRE(psi3->quantifier_depth == 9);

    auto self_loop = emit_fo_rewriting(NormalForm::cycles({1}));
    REQUIRE(self_loop);
    REQUIRE(self_loop->text == "E v0. R(v0,v0) & (A v1. v0 != v1 -> ~R(v0,v1))");
    REQUIRE(self_loop->quantifier_depth == 2);
}

TEST_CASE("proper cycle collections have no rewriting", "[fo]") {
    REQUIRE_FALSE(emit_fo_rewriting(NormalForm::cycles({2})));
    REQUIRE_FALSE(emit_fo_rewriting(NormalForm::cycles({3})));
    REQUIRE_FALSE(emit_fo_rewriting(NormalForm::cycles({2, 3})));
}

TEST_CASE("sentences round-trip through the mini-grammar", "[fo]") {
    for (int n = 1; n <= 5; ++n) {
        auto sentence = emit_fo_rewriting(NormalForm::path(n));
        REQUIRE(sentence);
        fo::Formula parsed = fo::parse_sentence(sentence->text);
        REQUIRE(fo::print(parsed) == sentence->text);
        REQUIRE(fo::quantifier_depth(parsed) == sentence->quantifier_depth);
    }
    auto self_loop = emit_fo_rewriting(NormalForm::cycles({1}));
    fo::Formula parsed = fo::parse_sentence(self_loop->text);
    REQUIRE(fo::print(parsed) == self_loop->text);
}

TEST_CASE("the mini-grammar covers its connectives", "[fo]") {
    auto roundtrip = [](const std::string& text) {
        fo::Formula parsed = fo::parse_sentence(text);
        return fo::print(parsed);
    };
    REQUIRE(roundtrip("E x. R(x,x) | ~R(x,x)") == "E x. R(x,x) | ~R(x,x)");
    REQUIRE(roundtrip("E x. E y. (R(x,y) | R(y,x)) & x != y") ==
            "E x. E y. (R(x,y) | R(y,x)) & x != y");
    REQUIRE(roundtrip("A x. R(x,x) -> R(x,x) -> R(x,x)") == "A x. R(x,x) -> R(x,x) -> R(x,x)");

    SECTION("implication is right-associative") {
        fo::Formula f = fo::parse_sentence("A x. R(x,x) -> R(x,x) -> R(x,x)");
        const fo::Formula& body = f.children.front();
        REQUIRE(body.kind == fo::Formula::Kind::implication);
        REQUIRE(body.children[1].kind == fo::Formula::Kind::implication);
    }
    SECTION("parse errors carry positions") {
        REQUIRE_THROWS_AS(fo::parse_sentence("E x."), ParseError);
        REQUIRE_THROWS_AS(fo::parse_sentence("R(x)"), ParseError);
        REQUIRE_THROWS_AS(fo::parse_sentence("E E. R(E,E)"), ParseError);
        REQUIRE_THROWS_AS(fo::parse_sentence("E x. R(x,x) trailing"), ParseError);
    }
}

TEST_CASE("rewriting fidelity against a literal model checker", "[fo][property]") {
    test::FoModelChecker psi2(fo::parse_sentence(emit_fo_rewriting(NormalForm::path(2))->text));
    test::FoModelChecker psi3(fo::parse_sentence(emit_fo_rewriting(NormalForm::path(3))->text));
    test::FoModelChecker loop(fo::parse_sentence(emit_fo_rewriting(NormalForm::cycles({1}))->text));

    SECTION("exhaustive on 3-node instances") {
        for (std::uint32_t mask = 0; mask < 512; ++mask) {
            Instance i = test::instance_from_mask(3, mask);
            REQUIRE(psi2.eval(i) == cert_path(2, i));
            REQUIRE(psi3.eval(i) == cert_path(3, i));
            REQUIRE(loop.eval(i) == cert_self_loop(i));
        }
    }
    SECTION("random instances with up to 7 nodes") {
        std::mt19937_64 rng(83);
        for (int trial = 0; trial < 250; ++trial) {
            Instance i = test::random_instance(rng, 7, 12);
            REQUIRE(psi2.eval(i) == cert_path(2, i));
            REQUIRE(psi3.eval(i) == cert_path(3, i));
            REQUIRE(loop.eval(i) == cert_self_loop(i));
        }
    }
}
