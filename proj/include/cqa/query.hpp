#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cqa/errors.hpp"
#include "cqa/instance.hpp"

namespace cqa {

using VariableId = int;

// A Boolean conjunctive query over the single binary relation R: a list of
// atoms R(x,y) whose variables are all existentially quantified. Variable ids
// are dense, assigned in first-occurrence order; duplicate atoms are kept in
// the query (they collapse in the canonical database).
struct ConjunctiveQuery {
    std::vector<std::pair<VariableId, VariableId>> atoms;
    std::vector<std::string> names;  // variable id -> source name

    int variable_count() const { return static_cast<int>(names.size()); }
};

namespace detail {

struct QueryLexer {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }

    // 1-based position for error messages.
    std::size_t here() const { return pos + 1; }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    void expect(char c, const char* what) {
        skip_ws();
        if (pos >= text.size() || text[pos] != c)
            throw ParseError("syntax error at position " + std::to_string(here()) + ": expected " + what,
                             here());
        ++pos;
    }

    std::string word() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        return std::string(text.substr(start, pos - start));
    }
};

}  // namespace detail

// Grammar: atoms separated by `,` or `&`; each atom is `R(<ident>,<ident>)`;
// identifiers are alphanumeric-plus-underscore; whitespace is insignificant.
// Constants (numeric literals, quoted tokens) are rejected: queries are
// constant-free.
inline ConjunctiveQuery parse_query(std::string_view text) {
    detail::QueryLexer lex{text};
    ConjunctiveQuery query;
    std::unordered_map<std::string, VariableId> by_name;

    auto term = [&]() -> VariableId {
        lex.skip_ws();
        std::size_t at = lex.here();
        char c = lex.peek();
        if (c == '\'' || c == '"')
            throw ParseError("constant argument at position " + std::to_string(at) +
                                 ": queries are constant-free",
                             at);
        std::string name = lex.word();
        if (name.empty())
            throw ParseError("syntax error at position " + std::to_string(at) + ": expected a variable",
                             at);
        bool all_digits = true;
        for (char ch : name)
            if (!std::isdigit(static_cast<unsigned char>(ch))) all_digits = false;
        if (all_digits)
            throw ParseError("constant argument '" + name + "' at position " + std::to_string(at) +
                                 ": queries are constant-free",
                             at);
        auto it = by_name.find(name);
        if (it != by_name.end()) return it->second;
        VariableId id = query.variable_count();
        by_name.emplace(name, id);
        query.names.push_back(name);
        return id;
    };

    while (true) {
        lex.skip_ws();
        std::size_t at = lex.here();
        std::string rel = lex.word();
        if (rel.empty())
            throw ParseError("syntax error at position " + std::to_string(at) + ": expected an atom", at);
        if (rel != "R")
            throw ParseError("unknown relation symbol " + rel + " at position " + std::to_string(at) +
                                 " (schema has the single binary relation R)",
                             at);
        lex.expect('(', "'('");
        VariableId first = term();
        lex.expect(',', "','");
        VariableId second = term();
        lex.expect(')', "')'");
        query.atoms.emplace_back(first, second);
        if (lex.at_end()) break;
        char sep = lex.peek();
        if (sep != ',' && sep != '&')
            throw ParseError("syntax error at position " + std::to_string(lex.here()) +
                                 ": expected ',' or '&' between atoms",
                             lex.here());
        ++lex.pos;
    }
    return query;
}

// Canonical rendering with variables renamed x1, x2, ... in first-occurrence
// order; parse -> print -> parse is a fixpoint.
inline std::string pretty_print(const ConjunctiveQuery& query) {
    std::vector<int> rename(static_cast<std::size_t>(query.variable_count()), -1);
    int next = 0;
    auto canon = [&](VariableId v) {
        if (rename[static_cast<std::size_t>(v)] < 0) rename[static_cast<std::size_t>(v)] = ++next;
        return "x" + std::to_string(rename[static_cast<std::size_t>(v)]);
    };
    std::string out;
    for (const auto& [first, second] : query.atoms) {
        std::string a = canon(first);
        std::string b = canon(second);
        if (!out.empty()) out += ", ";
        out += "R(" + a + "," + b + ")";
    }
    return out;
}

// One node per variable, one edge per distinct atom; node labels follow the
// canonical x1, x2, ... naming so canonical databases are comparable.
inline Instance canonical_database(const ConjunctiveQuery& query) {
    InstanceBuilder builder;
    auto node_label = [](VariableId v) { return "x" + std::to_string(v + 1); };
    for (VariableId v = 0; v < query.variable_count(); ++v) builder.intern(node_label(v));
    for (const auto& [first, second] : query.atoms) builder.add_edge(node_label(first), node_label(second));
    return builder.build();
}

}  // namespace cqa
