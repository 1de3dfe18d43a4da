#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqa/errors.hpp"
#include "cqa/normalize.hpp"

namespace cqa::fo {

// First-order formulas over the binary relation R and inequality, in the
// concrete syntax `E x.` / `A y.` (quantifiers, maximal scope), `&`, `|`,
// `->` (right-associative), `~`, `R(t1,t2)`, `t1 != t2`, with parentheses.
// E, A and R are reserved words. Conjunction and disjunction are kept n-ary.
struct Formula {
    enum class Kind { edge, not_equal, negation, conjunction, disjunction, implication, exists, forall };

    Kind kind;
    std::string var1;  // edge/not_equal first argument; quantifier bound variable
    std::string var2;  // edge/not_equal second argument
    std::vector<Formula> children;

    bool operator==(const Formula&) const = default;

    static Formula edge(std::string a, std::string b) {
        return {Kind::edge, std::move(a), std::move(b), {}};
    }
    static Formula not_equal(std::string a, std::string b) {
        return {Kind::not_equal, std::move(a), std::move(b), {}};
    }
    static Formula negation(Formula f) { return {Kind::negation, "", "", {std::move(f)}}; }
    static Formula conjunction(std::vector<Formula> fs) {
        return {Kind::conjunction, "", "", std::move(fs)};
    }
    static Formula implication(Formula lhs, Formula rhs) {
        return {Kind::implication, "", "", {std::move(lhs), std::move(rhs)}};
    }
    static Formula exists(std::string var, Formula body) {
        return {Kind::exists, std::move(var), "", {std::move(body)}};
    }
    static Formula forall(std::string var, Formula body) {
        return {Kind::forall, std::move(var), "", {std::move(body)}};
    }
};

inline int quantifier_depth(const Formula& f) {
    int best = 0;
    for (const Formula& child : f.children) best = std::max(best, quantifier_depth(child));
    return best + (f.kind == Formula::Kind::exists || f.kind == Formula::Kind::forall ? 1 : 0);
}

namespace detail {

inline int precedence(Formula::Kind kind) {
    switch (kind) {
        case Formula::Kind::implication: return 1;
        case Formula::Kind::disjunction: return 2;
        case Formula::Kind::conjunction: return 3;
        case Formula::Kind::negation: return 4;
        default: return 5;  // atoms
    }
}

inline bool is_quantifier(Formula::Kind kind) {
    return kind == Formula::Kind::exists || kind == Formula::Kind::forall;
}

inline void print_into(const Formula& f, std::string& out, int min_level);

// Quantified operands of a binary connective are always parenthesized; the
// body of a quantifier itself extends maximally to the right.
inline void print_operand(const Formula& f, std::string& out, int min_level) {
    bool parens = is_quantifier(f.kind) || (!is_quantifier(f.kind) && precedence(f.kind) < min_level);
    if (parens) out += '(';
    print_into(f, out, 0);
    if (parens) out += ')';
}

inline void print_into(const Formula& f, std::string& out, int) {
    switch (f.kind) {
        case Formula::Kind::edge:
            out += "R(" + f.var1 + "," + f.var2 + ")";
            return;
        case Formula::Kind::not_equal:
            out += f.var1 + " != " + f.var2;
            return;
        case Formula::Kind::negation:
            out += '~';
            print_operand(f.children.front(), out, 5);
            return;
        case Formula::Kind::conjunction:
        case Formula::Kind::disjunction: {
            const char* sep = f.kind == Formula::Kind::conjunction ? " & " : " | ";
            int level = precedence(f.kind) + 1;
            for (std::size_t i = 0; i < f.children.size(); ++i) {
                if (i) out += sep;
                print_operand(f.children[i], out, level);
            }
            return;
        }
        case Formula::Kind::implication:
            print_operand(f.children[0], out, 2);
            out += " -> ";
            print_operand(f.children[1], out, 1);
            return;
        case Formula::Kind::exists:
        case Formula::Kind::forall:
            out += f.kind == Formula::Kind::exists ? "E " : "A ";
            out += f.var1;
            out += ". ";
            print_into(f.children.front(), out, 0);
            return;
    }
}

struct FoLexer {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    std::size_t here() const { return pos + 1; }

    bool eat(std::string_view token) {
        skip_ws();
        if (text.substr(pos, token.size()) != token) return false;
        // Word tokens must not run into a following identifier character.
        if (std::isalnum(static_cast<unsigned char>(token.back())) && pos + token.size() < text.size()) {
            char next = text[pos + token.size()];
            if (std::isalnum(static_cast<unsigned char>(next)) || next == '_') return false;
        }
        pos += token.size();
        return true;
    }

    [[noreturn]] void fail(const std::string& what) {
        throw ParseError("FO syntax error at position " + std::to_string(here()) + ": " + what, here());
    }

    void expect(std::string_view token) {
        if (!eat(token)) fail("expected '" + std::string(token) + "'");
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (pos == start) fail("expected an identifier");
        std::string name(text.substr(start, pos - start));
        if (name == "E" || name == "A" || name == "R") fail("'" + name + "' is reserved");
        return name;
    }
};

inline Formula parse_formula(FoLexer& lex);

inline Formula parse_primary(FoLexer& lex) {
    if (lex.eat("(")) {
        Formula inner = parse_formula(lex);
        lex.expect(")");
        return inner;
    }
    if (lex.eat("~")) return Formula::negation(parse_primary(lex));
    if (lex.eat("E")) {
        std::string var = lex.ident();
        lex.expect(".");
        return Formula::exists(std::move(var), parse_formula(lex));
    }
    if (lex.eat("A")) {
        std::string var = lex.ident();
        lex.expect(".");
        return Formula::forall(std::move(var), parse_formula(lex));
    }
    if (lex.eat("R")) {
        lex.expect("(");
        std::string a = lex.ident();
        lex.expect(",");
        std::string b = lex.ident();
        lex.expect(")");
        return Formula::edge(std::move(a), std::move(b));
    }
    std::string a = lex.ident();
    lex.expect("!=");
    std::string b = lex.ident();
    return Formula::not_equal(std::move(a), std::move(b));
}

inline Formula parse_conjunction(FoLexer& lex) {
    std::vector<Formula> parts{parse_primary(lex)};
    while (lex.eat("&")) parts.push_back(parse_primary(lex));
    if (parts.size() == 1) return std::move(parts.front());
    return Formula::conjunction(std::move(parts));
}

inline Formula parse_disjunction(FoLexer& lex) {
    std::vector<Formula> parts{parse_conjunction(lex)};
    while (lex.eat("|")) parts.push_back(parse_conjunction(lex));
    if (parts.size() == 1) return std::move(parts.front());
    return {Formula::Kind::disjunction, "", "", std::move(parts)};
}

inline Formula parse_implication(FoLexer& lex) {
    Formula lhs = parse_disjunction(lex);
    if (!lex.eat("->")) return lhs;
    return Formula::implication(std::move(lhs), parse_implication(lex));
}

inline Formula parse_formula(FoLexer& lex) { return parse_implication(lex); }

}  // namespace detail

inline std::string print(const Formula& f) {
    std::string out;
    detail::print_into(f, out, 0);
    return out;
}

inline Formula parse_sentence(std::string_view text) {
    detail::FoLexer lex{text};
    Formula f = detail::parse_formula(lex);
    lex.skip_ws();
    if (lex.pos != text.size()) lex.fail("trailing input");
    return f;
}

}  // namespace cqa::fo

namespace cqa {

// A closed first-order sentence in the module's concrete syntax; `text`
// parses back under fo::parse_sentence.
struct FoSentence {
    std::string text;
    int quantifier_depth = 0;
};

namespace detail {

// Tail of the path rewriting at remaining depth k, anchored at `from`: a
// k-edge walk starts at `from`, and whichever out-edge a repair keeps at
// `from`, the tail of depth k-1 holds at its endpoint. Quantified variables
// are numbered v0, v1, ... in emission order.
inline fo::Formula psi_tail(int k, const std::string& from, int& next_var) {
    auto fresh = [&next_var] { return "v" + std::to_string(next_var++); };
    if (k == 1) {
        std::string target = fresh();
        return fo::Formula::exists(target, fo::Formula::edge(from, target));
    }
    std::vector<std::string> spine{from};
    for (int i = 0; i < k; ++i) spine.push_back(fresh());
    std::string guard = fresh();

    std::vector<fo::Formula> parts;
    for (int i = 0; i < k; ++i)
        parts.push_back(fo::Formula::edge(spine[static_cast<std::size_t>(i)],
                                          spine[static_cast<std::size_t>(i + 1)]));
    parts.push_back(fo::Formula::forall(
        guard, fo::Formula::implication(fo::Formula::edge(from, guard), psi_tail(k - 1, guard, next_var))));

    fo::Formula body = fo::Formula::conjunction(std::move(parts));
    for (int i = k; i >= 1; --i)
        body = fo::Formula::exists(spine[static_cast<std::size_t>(i)], std::move(body));
    return body;
}

inline fo::Formula psi_path(int n) {
    int next_var = 0;
    auto fresh = [&next_var] { return "v" + std::to_string(next_var++); };
    std::vector<std::string> spine;
    for (int i = 0; i <= n; ++i) spine.push_back(fresh());

    std::vector<fo::Formula> parts;
    for (int i = 0; i < n; ++i)
        parts.push_back(fo::Formula::edge(spine[static_cast<std::size_t>(i)],
                                          spine[static_cast<std::size_t>(i + 1)]));
    if (n > 1) {
        std::string guard = fresh();
        parts.push_back(fo::Formula::forall(
            guard,
            fo::Formula::implication(fo::Formula::edge(spine.front(), guard),
                                     psi_tail(n - 1, guard, next_var))));
    }
    fo::Formula body =
        parts.size() == 1 ? std::move(parts.front()) : fo::Formula::conjunction(std::move(parts));
    for (int i = n; i >= 0; --i)
        body = fo::Formula::exists(spine[static_cast<std::size_t>(i)], std::move(body));
    return body;
}

inline fo::Formula self_loop_sentence() {
    fo::Formula guard = fo::Formula::forall(
        "v1", fo::Formula::implication(fo::Formula::not_equal("v0", "v1"),
                                       fo::Formula::negation(fo::Formula::edge("v0", "v1"))));
    return fo::Formula::exists(
        "v0", fo::Formula::conjunction({fo::Formula::edge("v0", "v0"), std::move(guard)}));
}

}  // namespace detail

// The first-order rewriting of the certain-answer problem, when one exists:
// the inductively built path sentence for Path(n), the guarded self-loop
// sentence for Cycles({1}), and absence for every other cycle collection.
inline std::optional<FoSentence> emit_fo_rewriting(const NormalForm& nf) {
    fo::Formula formula;
    if (nf.kind == NormalForm::Kind::path) {
        formula = detail::psi_path(nf.path_edges);
    } else if (nf.cycle_lengths.size() == 1 && nf.cycle_lengths.front() == 1) {
        formula = detail::self_loop_sentence();
    } else {
        return std::nullopt;
    }
    return FoSentence{fo::print(formula), fo::quantifier_depth(formula)};
}

}  // namespace cqa
