#pragma once

// On-disk coalgebra format: one UTF-8 JSON document per coalgebra.
//
//   {
//     "functor":   {"kind": "dfa", "alphabet": ["a", "b"]}
//                | {"kind": "powerset"}
//                | {"kind": "labelled", "labels": [...]}
//                | {"kind": "monoid", "monoid": "nat" | "int" | "rational"},
//     "states":    ["q0", "q1", ...],            distinct names
//     "point":     "q0",                         optional
//     "structure": {
//        dfa:      {state: {"accept": bool, "next": {symbol: state}}},
//        powerset: {state: [states]},
//        labelled: {state: [[label, state], ...]},
//        monoid:   {state: {state: "p/q" | integer}}
//     }
//   }
//
// Weights parse from "p/q" / "p" strings or plain JSON integers; explicit
// zeros are dropped (finite support). Printing is canonical: states are
// renamed s0, s1, ... in carrier order, weights always print as strings,
// and original names go into a "provenance" field mapping each new state
// to the original states it came from. Parsing ignores "provenance".
// For dfa structures every state needs an entry (next must be total); for
// the other kinds a missing entry means the empty/zero value.

#include <coalgmin/coalgebra.hpp>
#include <coalgmin/errors.hpp>
#include <coalgmin/factorization.hpp>
#include <coalgmin/functors.hpp>
#include <coalgmin/rational.hpp>

#include <json.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace coalgmin {

/// A parsed document: a coalgebra (carrier labelled with the original
/// state names) and possibly a point.
struct document {
    coalgebra base;
    std::optional<state_index> point;

    pointed_coalgebra pointed() const {
        if (!point)
            throw validation_error("this operation needs a document with a \"point\"");
        return pointed_coalgebra(base, *point);
    }
};

namespace detail {

using json = nlohmann::ordered_json;

inline parse_error position_error(const std::string& text, std::size_t byte,
                                  const std::string& reason) {
    std::size_t offset = std::min(byte > 0 ? byte - 1 : 0, text.size());
    std::size_t line = 1, last_newline = 0;
    for (std::size_t i = 0; i < offset; ++i)
        if (text[i] == '\n') {
            ++line;
            last_newline = i + 1;
        }
    return parse_error(line, offset - last_newline + 1, reason);
}

inline const json& member(const json& object, const char* key, const char* where) {
    auto it = object.find(key);
    if (it == object.end())
        throw validation_error(std::string(where) + " is missing required field \"" + key + "\"");
    return *it;
}

inline std::vector<std::string> string_list(const json& value, const char* what) {
    if (!value.is_array())
        throw validation_error(std::string(what) + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& entry : value) {
        if (!entry.is_string())
            throw validation_error(std::string(what) + " must be an array of strings");
        out.push_back(entry.get<std::string>());
    }
    return out;
}

inline functor_spec parse_spec(const json& value) {
    if (!value.is_object())
        throw validation_error("\"functor\" must be an object");
    for (const auto& [key, ignored] : value.items())
        if (key != "kind" && key != "alphabet" && key != "labels" && key != "monoid")
            throw validation_error("unknown \"functor\" field \"" + key + "\"");
    const json& kind = member(value, "kind", "\"functor\"");
    if (!kind.is_string())
        throw validation_error("functor \"kind\" must be a string");
    std::string k = kind.get<std::string>();
    functor_spec spec;
    if (k == "dfa")
        spec = dfa_functor{string_list(member(value, "alphabet", "dfa functor"), "\"alphabet\"")};
    else if (k == "powerset")
        spec = powerset_functor{};
    else if (k == "labelled")
        spec = labelled_functor{string_list(member(value, "labels", "labelled functor"), "\"labels\"")};
    else if (k == "monoid") {
        const json& m = member(value, "monoid", "monoid functor");
        if (m == "nat")
            spec = monoid_functor{weight_monoid::nat};
        else if (m == "int")
            spec = monoid_functor{weight_monoid::integer};
        else if (m == "rational")
            spec = monoid_functor{weight_monoid::rational_};
        else
            throw validation_error("\"monoid\" must be one of \"nat\", \"int\", \"rational\"");
    } else {
        throw validation_error("unknown functor kind \"" + k + "\"");
    }
    validate_spec(spec);
    return spec;
}

inline rational parse_weight(const json& value, const std::string& state) {
    if (value.is_string())
        return parse_rational(value.get<std::string>());
    if (value.is_number_integer())
        return rational(integer(value.get<std::int64_t>()));
    if (value.is_number_unsigned())
        return rational(integer(value.get<std::uint64_t>()));
    if (value.is_number())
        throw validation_error(state, "non-integer numeric weight; write it as a \"p/q\" string");
    throw validation_error(state, "weight must be an integer or a \"p/q\" string");
}

} // namespace detail

/// Parse a coalgebra document, validating every structural invariant.
/// Malformed JSON raises parse_error with a position; well-formed JSON
/// violating the format raises validation_error naming the state at fault
/// when one is implicated.
inline document parse_document(const std::string& text) {
    detail::json doc;
    try {
        doc = detail::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw detail::position_error(text, e.byte, e.what());
    }
    if (!doc.is_object())
        throw validation_error("document must be a JSON object");
    for (const auto& [key, ignored] : doc.items())
        if (key != "functor" && key != "states" && key != "point" && key != "structure" &&
            key != "provenance")
            throw validation_error("unknown document field \"" + key + "\"");

    functor_spec spec = detail::parse_spec(detail::member(doc, "functor", "document"));
    std::vector<std::string> names =
        detail::string_list(detail::member(doc, "states", "document"), "\"states\"");

    std::map<std::string, state_index> index_of;
    for (std::size_t i = 0; i < names.size(); ++i)
        if (!index_of.emplace(names[i], i).second)
            throw validation_error(names[i], "duplicate state name");
    auto state_ref = [&](const detail::json& v, const std::string& owner) -> state_index {
        if (!v.is_string())
            throw validation_error(owner, "state reference must be a string");
        auto it = index_of.find(v.get<std::string>());
        if (it == index_of.end())
            throw validation_error(v.get<std::string>(), "reference to an undeclared state");
        return it->second;
    };

    const detail::json& structure_obj = detail::member(doc, "structure", "document");
    if (!structure_obj.is_object())
        throw validation_error("\"structure\" must be an object");
    for (const auto& [key, ignored] : structure_obj.items())
        if (index_of.find(key) == index_of.end())
            throw validation_error(key, "structure entry for an undeclared state");

    std::vector<functor_value> structure;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const std::string& name = names[i];
        auto it = structure_obj.find(name);

        if (const auto* d = std::get_if<dfa_functor>(&spec)) {
            if (it == structure_obj.end())
                throw validation_error(name, "dfa state needs an {\"accept\", \"next\"} entry");
            const detail::json& cell = *it;
            if (!cell.is_object())
                throw validation_error(name, "dfa entry must be an object");
            for (const auto& [key, ignored] : cell.items())
                if (key != "accept" && key != "next")
                    throw validation_error(name, "unknown dfa entry field \"" + key + "\"");
            const detail::json& accept = detail::member(cell, "accept", "dfa entry");
            if (!accept.is_boolean())
                throw validation_error(name, "\"accept\" must be a boolean");
            const detail::json& next = detail::member(cell, "next", "dfa entry");
            if (!next.is_object())
                throw validation_error(name, "\"next\" must be an object");
            for (const auto& [sym, ignored] : next.items())
                if (std::find(d->alphabet.begin(), d->alphabet.end(), sym) == d->alphabet.end())
                    throw validation_error(name, "\"next\" uses unknown symbol \"" + sym + "\"");
            dfa_cell value{accept.get<bool>(), {}};
            for (const std::string& sym : d->alphabet) {
                auto entry = next.find(sym);
                if (entry == next.end())
                    throw validation_error(name, "\"next\" is missing symbol \"" + sym + "\"");
                value.next.push_back(state_ref(*entry, name));
            }
            structure.push_back(std::move(value));
        } else if (std::holds_alternative<powerset_functor>(spec)) {
            std::vector<state_index> elements;
            if (it != structure_obj.end()) {
                if (!it->is_array())
                    throw validation_error(name, "powerset entry must be an array of states");
                for (const auto& entry : *it)
                    elements.push_back(state_ref(entry, name));
            }
            structure.push_back(make_subset(std::move(elements)));
        } else if (const auto* l = std::get_if<labelled_functor>(&spec)) {
            std::vector<std::pair<std::size_t, state_index>> edges;
            if (it != structure_obj.end()) {
                if (!it->is_array())
                    throw validation_error(name, "labelled entry must be an array of pairs");
                for (const auto& entry : *it) {
                    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string())
                        throw validation_error(name, "labelled edge must be a [label, state] pair");
                    auto label = std::find(l->labels.begin(), l->labels.end(),
                                           entry[0].get<std::string>());
                    if (label == l->labels.end())
                        throw validation_error(name,
                                               "unknown label \"" + entry[0].get<std::string>() + "\"");
                    edges.emplace_back(label - l->labels.begin(), state_ref(entry[1], name));
                }
            }
            structure.push_back(make_labelled(std::move(edges)));
        } else {
            std::vector<std::pair<state_index, rational>> weights;
            if (it != structure_obj.end()) {
                if (!it->is_object())
                    throw validation_error(name, "weight entry must be an object");
                for (const auto& [target, w] : it->items()) {
                    auto target_it = index_of.find(target);
                    if (target_it == index_of.end())
                        throw validation_error(target, "weight on an undeclared state");
                    weights.emplace_back(target_it->second, detail::parse_weight(w, name));
                }
            }
            // make_weights drops explicit zeros and orders the support.
            structure.push_back(make_weights(weights));
        }
        try {
            validate_value(spec, structure.back(), names.size());
        } catch (const error& e) {
            throw validation_error(name, e.what());
        }
    }

    coalgebra base(spec, make_set(std::move(names)), std::move(structure));

    std::optional<state_index> point;
    if (auto it = doc.find("point"); it != doc.end())
        point = state_ref(*it, "point");
    return document{std::move(base), point};
}

/// Print a coalgebra document in canonical form: states renamed s0, s1,
/// ... in carrier order, weights as strings, optional provenance mapping
/// each new state back to a list of original names. Output is stable
/// byte-for-byte for equal inputs.
inline std::string print_document(const coalgebra& c, std::optional<state_index> point,
                                  const std::vector<std::vector<std::string>>* provenance = nullptr) {
    detail::json root;

    detail::json functor;
    if (const auto* d = std::get_if<dfa_functor>(&c.spec)) {
        functor["kind"] = "dfa";
        functor["alphabet"] = d->alphabet;
    } else if (std::holds_alternative<powerset_functor>(c.spec)) {
        functor["kind"] = "powerset";
    } else if (const auto* l = std::get_if<labelled_functor>(&c.spec)) {
        functor["kind"] = "labelled";
        functor["labels"] = l->labels;
    } else {
        functor["kind"] = "monoid";
        switch (std::get<monoid_functor>(c.spec).monoid) {
        case weight_monoid::nat: functor["monoid"] = "nat"; break;
        case weight_monoid::integer: functor["monoid"] = "int"; break;
        default: functor["monoid"] = "rational"; break;
        }
    }
    root["functor"] = std::move(functor);

    auto new_name = [](state_index i) { return "s" + std::to_string(i); };
    std::vector<std::string> states;
    states.reserve(c.states.size);
    for (state_index i = 0; i < c.states.size; ++i)
        states.push_back(new_name(i));
    root["states"] = states;

    if (point)
        root["point"] = new_name(*point);

    detail::json structure = detail::json::object();
    for (state_index i = 0; i < c.states.size; ++i) {
        const functor_value& v = c.structure[i];
        if (const auto* d = std::get_if<dfa_functor>(&c.spec)) {
            const auto& cell = std::get<dfa_cell>(v);
            detail::json next = detail::json::object();
            for (std::size_t a = 0; a < d->alphabet.size(); ++a)
                next[d->alphabet[a]] = new_name(cell.next[a]);
            structure[new_name(i)] = {{"accept", cell.accept}, {"next", std::move(next)}};
        } else if (std::holds_alternative<powerset_functor>(c.spec)) {
            detail::json elements = detail::json::array();
            for (state_index y : std::get<subset_value>(v).elements)
                elements.push_back(new_name(y));
            structure[new_name(i)] = std::move(elements);
        } else if (const auto* l = std::get_if<labelled_functor>(&c.spec)) {
            detail::json edges = detail::json::array();
            for (const auto& [label, y] : std::get<labelled_value>(v).edges)
                edges.push_back({l->labels[label], new_name(y)});
            structure[new_name(i)] = std::move(edges);
        } else {
            detail::json weights = detail::json::object();
            for (const auto& [y, w] : std::get<weight_value>(v).weights)
                weights[new_name(y)] = format_rational(w);
            structure[new_name(i)] = std::move(weights);
        }
    }
    root["structure"] = std::move(structure);

    if (provenance) {
        detail::require(provenance->size() == c.states.size,
                        "provenance must cover every printed state");
        detail::json prov = detail::json::object();
        for (state_index i = 0; i < c.states.size; ++i)
            prov[new_name(i)] = (*provenance)[i];
        root["provenance"] = std::move(prov);
    }

    return root.dump(2) + "\n";
}

} // namespace coalgmin
