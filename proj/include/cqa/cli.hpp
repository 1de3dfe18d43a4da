#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqa/certain.hpp"
#include "cqa/errors.hpp"
#include "cqa/fixtures.hpp"
#include "cqa/fo.hpp"
#include "cqa/homomorphism.hpp"
#include "cqa/instance.hpp"
#include "cqa/normalize.hpp"
#include "cqa/oracle.hpp"
#include "cqa/query.hpp"

namespace cqa::cli {

// Exit codes: 0 success (and certain-true where applicable), 1 certain-false
// for `certain`/`oracle`, 2 usage or input error, 3 resource cap exceeded.
enum ExitCode { exit_ok = 0, exit_certain_false = 1, exit_usage = 2, exit_resource = 3 };

namespace detail {

using json = nlohmann::ordered_json;

inline Instance read_instance(const std::string& path, std::istream& in) {
    if (path == "-") return load_instance(in);
    std::ifstream file(path);
    if (!file) throw ParseError("cannot open instance file '" + path + "'", 0);
    return load_instance(file);
}

inline std::vector<std::string> witness_labels(const Instance& inst, const std::vector<NodeId>& nodes) {
    std::vector<std::string> labels;
    labels.reserve(nodes.size());
    for (NodeId u : nodes) labels.push_back(inst.label(u));
    std::sort(labels.begin(), labels.end());
    return labels;
}

struct CommandContext {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
    int exit_code = exit_ok;
};

}  // namespace detail

// Runs one command against explicit streams; `args` excludes the program
// name. All diagnostics go to `err` with an `error:` prefix.
inline int run(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
    using detail::json;
    detail::CommandContext ctx{in, out, err};

    CLI::App app{"consistent query answering over a single keyed binary relation"};
    app.require_subcommand(1);

    std::string query_text;
    std::string instance_path;
    std::string format = "json";
    bool counterexample = false;
    std::uint64_t cap = kDefaultRepairCap;

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"json", "text"}))
            ->capture_default_str();
    };

    auto* classify_cmd = app.add_subcommand("classify", "normal form and complexity class of a query");
    classify_cmd->add_option("query", query_text, "conjunctive query text")->required();
    add_format(classify_cmd);
    classify_cmd->callback([&] {
        Classification c = classify(parse_query(query_text));
        if (format == "text") {
            ctx.out << "normal_form=" << to_string(c.normal_form)
                    << " fo_rewritable=" << (c.fo_rewritable ? "true" : "false")
                    << " complexity=" << to_string(c.complexity) << "\n";
            return;
        }
        json doc;
        doc["normal_form"] = to_string(c.normal_form);
        doc["fo_rewritable"] = c.fo_rewritable;
        doc["complexity"] = to_string(c.complexity);
        ctx.out << doc.dump() << "\n";
    });

    auto* certain_cmd = app.add_subcommand("certain", "certain answer of a query on an instance");
    certain_cmd->add_option("query", query_text, "conjunctive query text")->required();
    certain_cmd->add_option("instance", instance_path, "edge-list file, or - for stdin")->required();
    certain_cmd->add_flag("--counterexample", counterexample, "construct a falsifying repair when false");
    add_format(certain_cmd);
    certain_cmd->callback([&] {
        Instance inst = detail::read_instance(instance_path, ctx.in);
        Classification c = classify(parse_query(query_text));
        CertVerdict verdict = certain_answer(c.normal_form, inst, counterexample);
        ctx.exit_code = verdict.certain ? exit_ok : exit_certain_false;
        if (format == "text") {
            ctx.out << "certain=" << (verdict.certain ? "true" : "false")
                    << " rule=" << to_string(verdict.rule);
            if (verdict.witness_component) {
                ctx.out << " witness=";
                auto labels = detail::witness_labels(inst, *verdict.witness_component);
                for (std::size_t i = 0; i < labels.size(); ++i) ctx.out << (i ? "," : "") << labels[i];
            }
            ctx.out << "\n";
            if (verdict.falsifying_repair) ctx.out << emit_edge_list(*verdict.falsifying_repair);
            return;
        }
        json doc;
        doc["certain"] = verdict.certain;
        doc["rule"] = to_string(verdict.rule);
        doc["normal_form"] = to_string(c.normal_form);
        if (verdict.witness_component)
            doc["witness_component"] = detail::witness_labels(inst, *verdict.witness_component);
        else
            doc["witness_component"] = nullptr;
        if (verdict.falsifying_repair)
            doc["falsifying_repair"] = emit_edge_list(*verdict.falsifying_repair);
        else
            doc["falsifying_repair"] = nullptr;
        ctx.out << doc.dump() << "\n";
    });

    auto* rewrite_cmd = app.add_subcommand("rewrite", "first-order rewriting of the certain answer");
    rewrite_cmd->add_option("query", query_text, "conjunctive query text")->required();
    rewrite_cmd->callback([&] {
        Classification c = classify(parse_query(query_text));
        if (auto sentence = emit_fo_rewriting(c.normal_form))
            ctx.out << sentence->text << "\n";
        else
            ctx.out << "NOT_FO_REWRITABLE\n";
    });

    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force certain answer by repair enumeration");
    oracle_cmd->add_option("query", query_text, "conjunctive query text")->required();
    oracle_cmd->add_option("instance", instance_path, "edge-list file, or - for stdin")->required();
    oracle_cmd->add_option("--cap", cap, "repair enumeration cap")->capture_default_str();
    add_format(oracle_cmd);
    oracle_cmd->callback([&] {
        Instance inst = detail::read_instance(instance_path, ctx.in);
        ConjunctiveQuery q = parse_query(query_text);
        bool certain = oracle_certain(q, inst, cap);
        BigInt repairs = repair_count(inst);
        ctx.exit_code = certain ? exit_ok : exit_certain_false;
        if (format == "text") {
            ctx.out << "certain=" << (certain ? "true" : "false") << " repairs=" << repairs.str() << "\n";
            return;
        }
        json doc;
        doc["certain"] = certain;
        doc["repairs"] = repairs.convert_to<std::uint64_t>();
        ctx.out << doc.dump() << "\n";
    });

    auto* count_cmd = app.add_subcommand("count", "count repairs satisfying the query");
    count_cmd->add_option("query", query_text, "conjunctive query text")->required();
    count_cmd->add_option("instance", instance_path, "edge-list file, or - for stdin")->required();
    count_cmd->add_option("--cap", cap, "repair enumeration cap")->capture_default_str();
    add_format(count_cmd);
    count_cmd->callback([&] {
        Instance inst = detail::read_instance(instance_path, ctx.in);
        ConjunctiveQuery q = parse_query(query_text);
        BigInt satisfying = count_satisfying_repairs(q, inst, cap);
        BigInt repairs = repair_count(inst);
        if (format == "text") {
            ctx.out << "repairs=" << repairs.str() << " satisfying=" << satisfying.str() << "\n";
            return;
        }
        json doc;
        doc["repairs"] = repairs.convert_to<std::uint64_t>();
        doc["satisfying"] = satisfying.convert_to<std::uint64_t>();
        ctx.out << doc.dump() << "\n";
    });

    auto* gen_cmd = app.add_subcommand("gen", "emit generated instances as edge lists");
    gen_cmd->require_subcommand(1);
    std::string out_path;
    int cycle_len = 2;
    int distance = 1;
    int links = 1;
    int nodes = 1;
    int edges = 0;
    std::uint64_t seed = 0;
    std::string which = "d1";

    auto emit_generated = [&](const Instance& inst) {
        if (out_path.empty()) {
            ctx.out << emit_edge_list(inst);
            return;
        }
        std::ofstream file(out_path);
        if (!file) throw ParseError("cannot open output file '" + out_path + "'", 0);
        file << emit_edge_list(inst);
    };

    auto* ef_cmd = gen_cmd->add_subcommand("ef", "indistinguishability pair instance");
    ef_cmd->add_option("--cycle-len", cycle_len, "cycle length")->required()->check(CLI::Range(2, 1 << 20));
    ef_cmd->add_option("--distance", distance, "spur separation")->required()->check(CLI::PositiveNumber);
    ef_cmd->add_option("--which", which, "d1 or d2")->required()->check(CLI::IsMember({"d1", "d2"}));
    ef_cmd->add_option("--out", out_path, "output file (default stdout)");
    ef_cmd->callback([&] {
        EfPair pair = gen_ef_pair(cycle_len, distance);
        emit_generated(which == "d1" ? pair.d1 : pair.d2);
    });

    auto* chain_cmd = gen_cmd->add_subcommand("chain", "chain of consecutive cycles");
    chain_cmd->add_option("--cycle-len", cycle_len, "cycle length")->required()->check(CLI::Range(2, 1 << 20));
    chain_cmd->add_option("--links", links, "number of cycles")->required()->check(CLI::PositiveNumber);
    chain_cmd->add_option("--out", out_path, "output file (default stdout)");
    chain_cmd->callback([&] { emit_generated(gen_cycle_chain(cycle_len, links)); });

    auto* random_cmd = gen_cmd->add_subcommand("random", "seeded random digraph");
    random_cmd->add_option("--nodes", nodes, "node universe size")->required()->check(CLI::PositiveNumber);
    random_cmd->add_option("--edges", edges, "edge count")->required();
    random_cmd->add_option("--seed", seed, "generator seed")->required();
    random_cmd->add_option("--out", out_path, "output file (default stdout)");
    random_cmd->callback([&] { emit_generated(gen_random(nodes, edges, seed)); });

    std::reverse(args.begin(), args.end());  // CLI11 takes the vector reversed
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const ResourceLimitError& e) {
        err << "error: " << e.what() << "\n";
        return exit_resource;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return ctx.exit_code;
}

}  // namespace cqa::cli
