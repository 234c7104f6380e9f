#pragma once

// Behavioural equivalence and the simple quotient of a coalgebra.
//
// The direct algorithm is partition refinement against the structure: two
// states stay identified as long as their structure values agree after
// collapsing targets by the current partition. Every refinement step is
// forced, so the fixpoint is the coarsest congruence, and the quotient by
// it has no non-trivial quotients of its own (it is simple).
//
// Two independent references keep the direct algorithm honest: an oracle
// that enumerates all partitions of the carrier and joins the congruences
// among them, and a textbook automaton minimizer that never touches the
// functor machinery.

#include <coalgmin/coalgebra.hpp>
#include <coalgmin/errors.hpp>
#include <coalgmin/factorization.hpp>
#include <coalgmin/functors.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace coalgmin {

/// Whether p identifies only states with equal collapsed structure, i.e.
/// the quotient map is a homomorphism onto some structure on the blocks.
inline bool is_congruence(const coalgebra& c, const partition& p) {
    if (p.carrier.size != c.states.size)
        throw carrier_mismatch("partition and coalgebra carriers differ");
    finite_map q = quotient_map(p);
    std::vector<std::optional<functor_value>> block_value(p.block_count);
    for (std::size_t x = 0; x < c.states.size; ++x) {
        functor_value v = apply_map(c.spec, q, c.structure[x]);
        auto& slot = block_value[p.block_of[x]];
        if (!slot)
            slot = std::move(v);
        else if (!value_equal(c.spec, *slot, v))
            return false;
    }
    return true;
}

/// Coarsest congruence on c, i.e. behavioural equivalence: the partition
/// identifying exactly the states that no experiment on the structure can
/// tell apart. Starts from the single-block partition and splits blocks by
/// collapsed structure values until stable; each split is forced, so the
/// result is coarser than every congruence.
inline partition behavioural_equivalence(const coalgebra& c) {
    partition current = single_block_partition(c.states);
    for (std::size_t round = 0; round <= c.states.size; ++round) {
        finite_map q = quotient_map(current);
        // Next partition: states are identified iff their structure values
        // collapse to the same thing under the current quotient. Starting
        // from the single block this can only ever split (asserted below).
        std::vector<state_index> next_block(c.states.size);
        std::vector<functor_value> keys;
        for (std::size_t x = 0; x < c.states.size; ++x) {
            functor_value key = apply_map(c.spec, q, c.structure[x]);
            auto it = std::find(keys.begin(), keys.end(), key);
            if (it == keys.end()) {
                keys.push_back(std::move(key));
                next_block[x] = keys.size() - 1;
            } else {
                next_block[x] = static_cast<state_index>(it - keys.begin());
            }
        }
        partition next = make_partition(c.states, next_block);
        detail::require(refines(next, current), "refinement must only split blocks");
        if (next == current) {
            detail::require(is_congruence(c, next), "refinement fixpoint must be a congruence");
            return next;
        }
        current = std::move(next);
    }
    throw internal_error("refinement failed to stabilise within |states| rounds");
}

struct quotient_result {
    coalgebra quotient;
    homomorphism projection; // surjection of the original onto the quotient
};

/// Quotient by behavioural equivalence: the simple quotient. Block values
/// are computed from one member each and re-checked against all others.
inline quotient_result simple_quotient(const coalgebra& c) {
    partition eq = behavioural_equivalence(c);
    finite_map q = quotient_map(eq);
    std::vector<std::optional<functor_value>> block_value(eq.block_count);
    for (std::size_t x = 0; x < c.states.size; ++x) {
        functor_value v = apply_map(c.spec, q, c.structure[x]);
        auto& slot = block_value[eq.block_of[x]];
        if (!slot)
            slot = std::move(v);
        else
            detail::require(value_equal(c.spec, *slot, v),
                            "behavioural equivalence identified distinguishable states");
    }
    std::vector<functor_value> structure;
    structure.reserve(block_value.size());
    for (auto& v : block_value)
        structure.push_back(std::move(*v));
    coalgebra quotient(c.spec, q.codomain, std::move(structure));
    homomorphism projection = homomorphism::verify(std::move(q), c, quotient);
    return quotient_result{std::move(quotient), std::move(projection)};
}

/// Simple means: no two distinct states are behaviourally equivalent, so
/// every surjective homomorphism out of the coalgebra is bijective.
inline bool is_simple(const coalgebra& c) {
    return behavioural_equivalence(c).block_count == c.states.size;
}

/// Pointed version of the simple quotient; the point moves to its block.
struct pointed_quotient_result {
    pointed_coalgebra quotient;
    homomorphism projection;
};

inline pointed_quotient_result simple_quotient_pointed(const pointed_coalgebra& c) {
    quotient_result r = simple_quotient(c.base);
    state_index new_point = r.projection.map().table[c.point];
    return pointed_quotient_result{pointed_coalgebra(std::move(r.quotient), new_point),
                                   std::move(r.projection)};
}

namespace detail {

/// All partitions of {0..n-1} via restricted-growth strings: block_of[0]=0
/// and block_of[x] <= 1 + max of the prefix. Bell(n) many.
inline std::vector<partition> all_partitions(const finite_set& carrier) {
    std::vector<partition> out;
    std::vector<state_index> block_of(carrier.size, 0);
    auto rec = [&](auto&& self, std::size_t x, state_index max_used) -> void {
        if (x == carrier.size) {
            out.push_back(make_partition(carrier, block_of));
            return;
        }
        for (state_index b = 0; b <= max_used + 1; ++b) {
            block_of[x] = b;
            self(self, x + 1, std::max(max_used, b));
        }
    };
    if (carrier.size == 0)
        out.push_back(make_partition(carrier, {}));
    else
        rec(rec, 1, 0); // block_of[0] is fixed to 0
    return out;
}

} // namespace detail

/// Brute-force reference for behavioural equivalence: enumerate every
/// partition of the carrier, keep the congruences, and join them. The join
/// is re-checked to be a congruence itself. Exponential (Bell numbers);
/// carriers are capped at 6 states.
inline partition congruence_oracle(const coalgebra& c) {
    if (c.states.size > 6)
        throw too_large("congruence oracle is capped at 6 states");
    std::vector<partition> congruences;
    for (partition& p : detail::all_partitions(c.states))
        if (is_congruence(c, p))
            congruences.push_back(std::move(p));
    partition join = join_partitions(c.states, congruences);
    detail::require(is_congruence(c, join), "join of congruences must be a congruence");
    return join;
}

/// Textbook deterministic-automaton minimizer, used as an independent
/// reference for the dfa functor: split states into accepting and
/// rejecting, then refine by per-letter successor blocks until stable.
/// Works directly on the transition tables.
inline partition dfa_minimize_reference(const coalgebra& c) {
    const auto* d = std::get_if<dfa_functor>(&c.spec);
    if (!d)
        throw wrong_functor("reference minimizer only handles the dfa functor");
    const std::size_t n = c.states.size;

    std::vector<state_index> block_of(n);
    for (std::size_t x = 0; x < n; ++x)
        block_of[x] = std::get<dfa_cell>(c.structure[x]).accept ? 1 : 0;
    partition current = make_partition(c.states, block_of);

    for (;;) {
        // Signature of a state: its block plus its successors' blocks.
        std::map<std::vector<state_index>, state_index> seen;
        std::vector<state_index> next_block(n);
        for (std::size_t x = 0; x < n; ++x) {
            std::vector<state_index> sig{current.block_of[x]};
            for (state_index y : std::get<dfa_cell>(c.structure[x]).next)
                sig.push_back(current.block_of[y]);
            auto [it, inserted] = seen.emplace(std::move(sig), seen.size());
            next_block[x] = it->second;
        }
        partition next = make_partition(c.states, next_block);
        if (next.block_count == current.block_count)
            return next;
        current = std::move(next);
    }
}

} // namespace coalgmin
