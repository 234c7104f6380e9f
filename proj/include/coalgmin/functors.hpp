#pragma once

// Signature functors on finite sets and their action on maps.
//
// Four families are supported:
//   dfa       FX = 2 x X^A        (an accept flag and a total successor map)
//   powerset  FX = P(X)           (a subset of X)
//   labelled  FX = P(A x X)       (a set of label/target edges)
//   monoid    FX = M^(X)          (finitely supported maps into a monoid M,
//                                  M one of (N,+,0), (Z,+,0), (Q,+,0))
//
// The action on a map f sends a value to its pushforward: successors are
// relabelled pointwise, subsets and edge sets are imaged, and weights of
// states identified by f are added. Under Z and Q this addition can cancel
// to zero; zero weights are dropped, so values stay finitely supported and
// structurally canonical (equal values are representation-equal).

#include <coalgmin/errors.hpp>
#include <coalgmin/factorization.hpp>
#include <coalgmin/rational.hpp>

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace coalgmin {

enum class weight_monoid { nat, integer, rational_ };

struct dfa_functor {
    std::vector<std::string> alphabet;
    bool operator==(const dfa_functor&) const = default;
};

struct powerset_functor {
    bool operator==(const powerset_functor&) const = default;
};

struct labelled_functor {
    std::vector<std::string> labels;
    bool operator==(const labelled_functor&) const = default;
};

struct monoid_functor {
    weight_monoid monoid;
    bool operator==(const monoid_functor&) const = default;
};

using functor_spec = std::variant<dfa_functor, powerset_functor, labelled_functor, monoid_functor>;

inline void validate_spec(const functor_spec& spec) {
    auto check_symbols = [](const std::vector<std::string>& symbols, const char* what) {
        if (symbols.empty())
            throw validation_error(std::string(what) + " must not be empty");
        auto sorted = symbols;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw validation_error(std::string(what) + " must not contain duplicates");
    };
    if (const auto* d = std::get_if<dfa_functor>(&spec))
        check_symbols(d->alphabet, "alphabet");
    else if (const auto* l = std::get_if<labelled_functor>(&spec))
        check_symbols(l->labels, "label set");
}

// --- values -----------------------------------------------------------

/// Value of the dfa functor: accept flag plus one successor per letter,
/// indexed in alphabet order.
struct dfa_cell {
    bool accept = false;
    std::vector<state_index> next;
    bool operator==(const dfa_cell&) const = default;
};

/// Value of the powerset functor: a strictly increasing list of states.
struct subset_value {
    std::vector<state_index> elements;
    bool operator==(const subset_value&) const = default;
};

/// Value of the labelled functor: strictly increasing (label, target)
/// pairs, labels given as indices into the spec's label list.
struct labelled_value {
    std::vector<std::pair<std::size_t, state_index>> edges;
    bool operator==(const labelled_value&) const = default;
};

/// Value of a monoid functor: (state, weight) pairs with strictly
/// increasing states and non-zero weights.
struct weight_value {
    std::vector<std::pair<state_index, rational>> weights;
    bool operator==(const weight_value&) const = default;
};

using functor_value = std::variant<dfa_cell, subset_value, labelled_value, weight_value>;

inline functor_value make_subset(std::vector<state_index> elements) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    return subset_value{std::move(elements)};
}

inline functor_value make_labelled(std::vector<std::pair<std::size_t, state_index>> edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return labelled_value{std::move(edges)};
}

/// Sum up duplicate states and drop zero totals.
inline functor_value make_weights(const std::vector<std::pair<state_index, rational>>& entries) {
    std::map<state_index, rational> total;
    for (const auto& [state, w] : entries)
        total[state] += w;
    weight_value out;
    for (auto& [state, w] : total)
        if (w != 0)
            out.weights.emplace_back(state, std::move(w));
    return out;
}

/// The everywhere-zero weight structure (empty support).
inline functor_value zero_weights() { return weight_value{}; }

inline const char* kind_name(const functor_spec& spec) {
    switch (spec.index()) {
    case 0: return "dfa";
    case 1: return "powerset";
    case 2: return "labelled";
    default: return "monoid";
    }
}

/// Check that a value belongs to F(carrier) for this spec: matching kind,
/// canonical representation, in-range states, and weights inside the monoid.
inline void validate_value(const functor_spec& spec, const functor_value& value,
                           std::size_t carrier_size) {
    auto in_range = [&](state_index x) {
        if (x >= carrier_size)
            throw state_out_of_range("value refers to state " + std::to_string(x) +
                                     " outside carrier of size " + std::to_string(carrier_size));
    };
    if (spec.index() != value.index())
        throw validation_error(std::string("value kind does not match functor kind ") +
                               kind_name(spec));

    if (const auto* d = std::get_if<dfa_functor>(&spec)) {
        const auto& cell = std::get<dfa_cell>(value);
        if (cell.next.size() != d->alphabet.size())
            throw validation_error("dfa cell must list one successor per letter");
        for (state_index x : cell.next)
            in_range(x);
    } else if (std::holds_alternative<powerset_functor>(spec)) {
        const auto& sub = std::get<subset_value>(value);
        for (std::size_t i = 0; i < sub.elements.size(); ++i) {
            in_range(sub.elements[i]);
            if (i > 0 && sub.elements[i - 1] >= sub.elements[i])
                throw validation_error("subset value must be strictly increasing");
        }
    } else if (const auto* l = std::get_if<labelled_functor>(&spec)) {
        const auto& lv = std::get<labelled_value>(value);
        for (std::size_t i = 0; i < lv.edges.size(); ++i) {
            if (lv.edges[i].first >= l->labels.size())
                throw validation_error("labelled value uses an unknown label index");
            in_range(lv.edges[i].second);
            if (i > 0 && lv.edges[i - 1] >= lv.edges[i])
                throw validation_error("labelled value must be strictly increasing");
        }
    } else {
        const auto* m = std::get_if<monoid_functor>(&spec);
        const auto& wv = std::get<weight_value>(value);
        for (std::size_t i = 0; i < wv.weights.size(); ++i) {
            const auto& [state, w] = wv.weights[i];
            in_range(state);
            if (i > 0 && wv.weights[i - 1].first >= state)
                throw validation_error("weight value must have strictly increasing support");
            if (w == 0)
                throw validation_error("weight value must not store zero weights");
            if (m->monoid != weight_monoid::rational_ && !is_integral(w))
                throw validation_error("non-integer weight in an integer-weighted structure");
            if (m->monoid == weight_monoid::nat && w < 0)
                throw validation_error("negative weight in a naturals-weighted structure");
        }
    }
}

/// The functor applied to a map: F(f) at a single value. States referenced
/// by the value must lie inside f's domain.
inline functor_value apply_map(const functor_spec& spec, const finite_map& f,
                               const functor_value& value) {
    validate_value(spec, value, f.domain.size);
    if (const auto* cell = std::get_if<dfa_cell>(&value)) {
        dfa_cell out{cell->accept, cell->next};
        for (state_index& x : out.next)
            x = f.table[x];
        return out;
    }
    if (const auto* sub = std::get_if<subset_value>(&value)) {
        std::vector<state_index> mapped;
        mapped.reserve(sub->elements.size());
        for (state_index x : sub->elements)
            mapped.push_back(f.table[x]);
        return make_subset(std::move(mapped));
    }
    if (const auto* lv = std::get_if<labelled_value>(&value)) {
        std::vector<std::pair<std::size_t, state_index>> mapped;
        mapped.reserve(lv->edges.size());
        for (const auto& [label, x] : lv->edges)
            mapped.emplace_back(label, f.table[x]);
        return make_labelled(std::move(mapped));
    }
    const auto& wv = std::get<weight_value>(value);
    std::vector<std::pair<state_index, rational>> mapped;
    mapped.reserve(wv.weights.size());
    for (const auto& [x, w] : wv.weights)
        mapped.emplace_back(f.table[x], w);
    return make_weights(mapped);
}

/// States a value references, sorted and duplicate-free. A state moved by a
/// map can change apply_map's result exactly when it lies in the support.
inline std::vector<state_index> support(const functor_spec& spec, const functor_value& value) {
    std::vector<state_index> out;
    if (const auto* cell = std::get_if<dfa_cell>(&value)) {
        out = cell->next;
    } else if (const auto* sub = std::get_if<subset_value>(&value)) {
        out = sub->elements;
    } else if (const auto* lv = std::get_if<labelled_value>(&value)) {
        for (const auto& [label, x] : lv->edges)
            out.push_back(x);
    } else {
        for (const auto& [x, w] : std::get<weight_value>(value).weights)
            out.push_back(x);
    }
    (void)spec;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Semantic equality of two values of one functor. Values are canonical,
/// so this is representation equality.
inline bool value_equal(const functor_spec& spec, const functor_value& a, const functor_value& b) {
    if (a.index() != spec.index() || b.index() != spec.index())
        throw validation_error("value_equal applied across functor kinds");
    return a == b;
}

} // namespace coalgmin
