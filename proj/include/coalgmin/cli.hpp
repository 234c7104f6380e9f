#pragma once

// Command-line front end. Subcommands operate on coalgebra documents (see
// json_io.hpp) and write result documents to stdout or -o FILE; inputs are
// never mutated. Boolean queries print "true"/"false" on stdout. Exit
// codes: 0 success, 1 bad input or usage, 2 broken internal invariant.

#include <coalgmin/coalgebra.hpp>
#include <coalgmin/errors.hpp>
#include <coalgmin/json_io.hpp>
#include <coalgmin/observability.hpp>
#include <coalgmin/oracles.hpp>
#include <coalgmin/pipeline.hpp>
#include <coalgmin/reachability.hpp>
#include <coalgmin/unravelling.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace coalgmin::cli {

namespace detail {

using coalgmin::detail::require;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw validation_error("cannot open \"" + path + "\"");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline document load(const std::string& path) { return parse_document(read_file(path)); }

inline void emit(const std::string& text, const std::string& out_file, std::ostream& out) {
    if (out_file.empty()) {
        out << text;
        return;
    }
    std::ofstream file(out_file, std::ios::binary);
    if (!file || !(file << text))
        throw validation_error("cannot write \"" + out_file + "\"");
}

inline state_index named_state(const document& doc, const std::string& name) {
    const auto& labels = *doc.base.states.labels;
    auto it = std::find(labels.begin(), labels.end(), name);
    if (it == labels.end())
        throw validation_error(name, "no such state in the document");
    return static_cast<state_index>(it - labels.begin());
}

/// Original names of the input states, in order.
inline std::vector<std::string> original_names(const coalgebra& c) {
    if (c.states.labels)
        return *c.states.labels;
    std::vector<std::string> names;
    for (state_index i = 0; i < c.states.size; ++i)
        names.push_back("s" + std::to_string(i));
    return names;
}

inline std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ','))
        out.push_back(item);
    return out;
}

} // namespace detail

/// Run the tool on an argument list (without the program name), writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"minimization of finite coalgebras: reachability, simple quotients, "
                 "well-pointed form, and tree unravelling"};
    app.require_subcommand(1);

    std::string in_file, second_file, map_file, out_file;
    std::string state_a, state_b;
    bool oracle = false;
    std::string order = "simple-first";
    std::size_t depth = 0;

    std::string gen_functor, gen_alphabet = "a,b", gen_labels = "a,b", gen_monoid = "nat";
    std::size_t gen_states = 0;
    std::optional<std::uint64_t> gen_seed;
    std::string gen_density = "1/2";

    auto* reach = app.add_subcommand("reach", "reachable part of a pointed coalgebra");
    reach->add_option("file", in_file)->required();
    reach->add_flag("--oracle", oracle, "cross-check against the subset-enumeration oracle");
    reach->add_option("-o,--output", out_file, "write the result document to this file");

    auto* simple = app.add_subcommand("simple", "simple quotient (behavioural minimization)");
    simple->add_option("file", in_file)->required();
    simple->add_flag("--oracle", oracle, "cross-check against the congruence-enumeration oracle");
    simple->add_option("-o,--output", out_file);

    auto* wellpointed = app.add_subcommand("wellpointed", "reachable and simple form");
    wellpointed->add_option("file", in_file)->required();
    wellpointed->add_option("--order", order, "simple-first (default) or reach-first");
    wellpointed->add_option("-o,--output", out_file);

    auto* unravel_cmd = app.add_subcommand("unravel", "tree unravelling (nat weights only)");
    unravel_cmd->add_option("file", in_file)->required();
    unravel_cmd->add_option("--depth", depth, "truncation depth")->required();
    unravel_cmd->add_option("-o,--output", out_file);

    auto* check_hom = app.add_subcommand("check-hom", "is MAP a homomorphism C -> D?");
    check_hom->add_option("source", in_file)->required();
    check_hom->add_option("target", second_file)->required();
    check_hom->add_option("map", map_file, "JSON object {source state: target state}")->required();

    auto* equiv = app.add_subcommand("equiv", "are two states behaviourally equivalent?");
    equiv->add_option("file", in_file)->required();
    equiv->add_option("state1", state_a)->required();
    equiv->add_option("state2", state_b)->required();
    equiv->add_flag("--oracle", oracle, "cross-check against the congruence-enumeration oracle");

    auto* orders = app.add_subcommand("orders-agree", "do the two minimization orders agree?");
    orders->add_option("file", in_file)->required();

    auto* gen = app.add_subcommand("gen", "generate a random coalgebra document");
    gen->add_option("--functor", gen_functor, "dfa | powerset | labelled | monoid")->required();
    gen->add_option("--states", gen_states, "number of states")->required();
    gen->add_option("--alphabet", gen_alphabet, "dfa alphabet, comma-separated (default a,b)");
    gen->add_option("--labels", gen_labels, "label set, comma-separated (default a,b)");
    gen->add_option("--monoid", gen_monoid, "nat | int | rational (default nat)");
    gen->add_option("--seed", gen_seed, "generator seed (default 1, or COALGMIN_SEED)");
    gen->add_option("--density", gen_density, "edge density in [0,1], e.g. 1/2 (default)");
    gen->add_option("-o,--output", out_file);

    try {
        std::vector<const char*> argv{"coalgmin"};
        for (const std::string& a : args)
            argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(reach)) {
            document doc = detail::load(in_file);
            pointed_coalgebra c = doc.pointed();
            reachable_result r = reachable_part(c);
            if (oracle) {
                std::vector<state_index> members = r.inclusion.map().table;
                std::sort(members.begin(), members.end());
                detail::require(members == reachable_part_oracle(c),
                                "reachable part disagrees with the enumeration oracle");
            }
            std::vector<std::string> names = detail::original_names(doc.base);
            std::vector<std::vector<std::string>> provenance;
            for (state_index x : r.inclusion.map().table)
                provenance.push_back({names[x]});
            detail::emit(print_document(r.part.base, r.part.point, &provenance), out_file, out);
        } else if (app.got_subcommand(simple)) {
            document doc = detail::load(in_file);
            quotient_result r = simple_quotient(doc.base);
            if (oracle)
                detail::require(behavioural_equivalence(doc.base) == congruence_oracle(doc.base),
                                "behavioural equivalence disagrees with the congruence oracle");
            std::vector<std::string> names = detail::original_names(doc.base);
            std::vector<std::vector<std::string>> provenance(r.quotient.states.size);
            for (state_index x = 0; x < doc.base.states.size; ++x)
                provenance[r.projection.map().table[x]].push_back(names[x]);
            std::optional<state_index> point;
            if (doc.point)
                point = r.projection.map().table[*doc.point];
            detail::emit(print_document(r.quotient, point, &provenance), out_file, out);
        } else if (app.got_subcommand(wellpointed)) {
            if (order != "simple-first" && order != "reach-first")
                throw validation_error("--order must be simple-first or reach-first");
            document doc = detail::load(in_file);
            pointed_coalgebra c = doc.pointed();
            std::vector<std::string> names = detail::original_names(doc.base);

            // Same primitives as well_pointed_minimize, composed here so
            // the two maps can be chained into state provenance.
            pointed_coalgebra result(coalgebra(c.base), c.point);
            std::vector<std::vector<std::string>> provenance;
            if (order == "simple-first") {
                pointed_quotient_result q = simple_quotient_pointed(c);
                reachable_result r = reachable_part(q.quotient);
                result = r.part;
                provenance.resize(result.base.states.size);
                for (state_index x = 0; x < c.base.states.size; ++x) {
                    state_index block = q.projection.map().table[x];
                    const auto& incl = r.inclusion.map().table;
                    auto it = std::find(incl.begin(), incl.end(), block);
                    if (it != incl.end())
                        provenance[it - incl.begin()].push_back(names[x]);
                }
            } else {
                reachable_result r = reachable_part(c);
                pointed_quotient_result q = simple_quotient_pointed(r.part);
                result = q.quotient;
                provenance.resize(result.base.states.size);
                for (state_index x = 0; x < r.part.base.states.size; ++x)
                    provenance[q.projection.map().table[x]].push_back(
                        names[r.inclusion.map().table[x]]);
                if (!is_reachable(result))
                    err << "note: reach-first result is not reachable (weights cancelled in the "
                           "quotient); use --order=simple-first for a well-pointed result\n";
            }
            detail::require(result == well_pointed_minimize(c, order == "simple-first"
                                                                   ? minimize_order::simple_first
                                                                   : minimize_order::reach_first),
                            "composed pipeline must match well_pointed_minimize");
            detail::emit(print_document(result.base, result.point, &provenance), out_file, out);
        } else if (app.got_subcommand(unravel_cmd)) {
            document doc = detail::load(in_file);
            unravel_result r = unravel(doc.pointed(), depth);
            const std::vector<std::string> reached_names = detail::original_names(r.onto.target());
            std::vector<std::vector<std::string>> provenance;
            for (state_index node = 0; node < r.tree.base.states.size; ++node)
                provenance.push_back({reached_names[r.onto.map().table[node]]});
            err << "unravel: complete=" << (r.complete ? "true" : "false")
                << " depth_used=" << r.depth_used << " states=" << r.tree.base.states.size << "\n";
            detail::emit(print_document(r.tree.base, r.tree.point, &provenance), out_file, out);
        } else if (app.got_subcommand(check_hom)) {
            document src = detail::load(in_file);
            document tgt = detail::load(second_file);
            const std::string map_text = detail::read_file(map_file);
            nlohmann::ordered_json map_doc;
            try {
                map_doc = nlohmann::ordered_json::parse(map_text);
            } catch (const nlohmann::json::parse_error& e) {
                throw coalgmin::detail::position_error(map_text, e.byte, e.what());
            }
            if (!map_doc.is_object())
                throw validation_error("map document must be a JSON object");
            std::vector<state_index> table(src.base.states.size, npos);
            for (const auto& [from, to] : map_doc.items()) {
                state_index x = detail::named_state(src, from);
                if (!to.is_string())
                    throw validation_error(from, "map target must be a state name");
                table[x] = detail::named_state(tgt, to.get<std::string>());
            }
            for (state_index x = 0; x < table.size(); ++x)
                if (table[x] == npos)
                    throw validation_error((*src.base.states.labels)[x],
                                           "map does not cover this state");
            finite_map h{src.base.states, tgt.base.states, std::move(table)};
            bool ok = (src.point && tgt.point)
                          ? is_pointed_homomorphism(h, src.pointed(), tgt.pointed())
                          : is_homomorphism(h, src.base, tgt.base);
            out << (ok ? "true" : "false") << "\n";
        } else if (app.got_subcommand(equiv)) {
            document doc = detail::load(in_file);
            partition eq = behavioural_equivalence(doc.base);
            if (oracle)
                detail::require(eq == congruence_oracle(doc.base),
                                "behavioural equivalence disagrees with the congruence oracle");
            bool same = eq.block_of[detail::named_state(doc, state_a)] ==
                        eq.block_of[detail::named_state(doc, state_b)];
            out << (same ? "true" : "false") << "\n";
        } else if (app.got_subcommand(orders)) {
            document doc = detail::load(in_file);
            out << (orders_agree(doc.pointed()) ? "true" : "false") << "\n";
        } else if (app.got_subcommand(gen)) {
            functor_spec spec;
            if (gen_functor == "dfa")
                spec = dfa_functor{detail::split_csv(gen_alphabet)};
            else if (gen_functor == "powerset")
                spec = powerset_functor{};
            else if (gen_functor == "labelled")
                spec = labelled_functor{detail::split_csv(gen_labels)};
            else if (gen_functor == "monoid") {
                if (gen_monoid == "nat")
                    spec = monoid_functor{weight_monoid::nat};
                else if (gen_monoid == "int")
                    spec = monoid_functor{weight_monoid::integer};
                else if (gen_monoid == "rational")
                    spec = monoid_functor{weight_monoid::rational_};
                else
                    throw validation_error("--monoid must be nat, int, or rational");
            } else {
                throw validation_error("--functor must be dfa, powerset, labelled, or monoid");
            }
            std::uint64_t seed = 1;
            if (gen_seed) {
                seed = *gen_seed;
            } else if (const char* env = std::getenv("COALGMIN_SEED")) {
                try {
                    seed = std::stoull(env);
                } catch (const std::exception&) {
                    throw validation_error("COALGMIN_SEED must be an unsigned integer");
                }
            }
            pointed_coalgebra c =
                random_coalgebra(spec, gen_states, seed, parse_rational(gen_density));
            detail::emit(print_document(c.base, c.point), out_file, out);
        }
        return 0;
    } catch (const internal_error& e) {
        err << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace coalgmin::cli
