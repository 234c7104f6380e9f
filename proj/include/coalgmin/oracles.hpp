#pragma once

// Brute-force references and instance generators for the property suites.
//
// The enumeration oracles try every candidate map and keep the ones the
// definitional predicates accept; they share nothing with the backtracking
// search they are used to check. The generators are deterministic functions
// of their arguments (a fixed mt19937_64 draw protocol, documented at each
// generator), so any failing instance is reproducible from its seed.

#include <coalgmin/coalgebra.hpp>
#include <coalgmin/errors.hpp>
#include <coalgmin/factorization.hpp>
#include <coalgmin/functors.hpp>
#include <coalgmin/observability.hpp>
#include <coalgmin/reachability.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace coalgmin {

namespace detail {

/// Every table for a map src -> tgt, in lexicographic order, applied to a
/// visitor. Guarded against combinatorial blow-up by the caller.
template <typename Visit>
inline void for_each_table(std::size_t src_size, std::size_t tgt_size, Visit&& visit) {
    std::vector<state_index> table(src_size, 0);
    if (tgt_size == 0 && src_size > 0)
        return; // no maps out of a non-empty set into the empty set
    for (;;) {
        visit(const_cast<const std::vector<state_index>&>(table));
        std::size_t pos = src_size;
        while (pos > 0) {
            if (++table[pos - 1] < tgt_size)
                break;
            table[pos - 1] = 0;
            --pos;
        }
        if (pos == 0)
            return;
    }
}

inline void guard_enumeration(std::size_t src_size, std::size_t tgt_size) {
    // tgt^src candidate tables; refuse anything beyond ~16 million.
    double total = 1;
    for (std::size_t i = 0; i < src_size; ++i) {
        total *= static_cast<double>(tgt_size);
        if (total > 16'777'216.0)
            throw too_large("homomorphism enumeration would exceed 2^24 candidate maps");
    }
}

} // namespace detail

/// All pointed homomorphisms src -> tgt, by filtering every candidate
/// table through is_pointed_homomorphism, in lexicographic table order.
inline std::vector<finite_map> enumerate_pointed_homomorphisms(const pointed_coalgebra& src,
                                                               const pointed_coalgebra& tgt) {
    detail::guard_enumeration(src.base.states.size, tgt.base.states.size);
    std::vector<finite_map> out;
    detail::for_each_table(src.base.states.size, tgt.base.states.size,
                           [&](const std::vector<state_index>& table) {
                               finite_map h{src.base.states, tgt.base.states, table};
                               if (is_pointed_homomorphism(h, src, tgt))
                                   out.push_back(std::move(h));
                           });
    return out;
}

/// All homomorphisms src -> tgt (no point condition), lexicographic order.
inline std::vector<finite_map> enumerate_homomorphisms(const coalgebra& src, const coalgebra& tgt) {
    detail::guard_enumeration(src.states.size, tgt.states.size);
    std::vector<finite_map> out;
    detail::for_each_table(src.states.size, tgt.states.size,
                           [&](const std::vector<state_index>& table) {
                               finite_map h{src.states, tgt.states, table};
                               if (is_homomorphism(h, src, tgt))
                                   out.push_back(std::move(h));
                           });
    return out;
}

namespace detail {

/// Deterministic draw helper. mt19937_64 has a standardized output
/// sequence, and all derived draws below use plain arithmetic on it, so
/// results are identical across platforms and standard libraries.
struct rng64 {
    std::mt19937_64 engine;

    explicit rng64(std::uint64_t seed) : engine(seed) {}

    std::uint64_t next() { return engine(); }

    /// Uniform-enough draw from {0, ..., k-1} (plain modulo; the tiny bias
    /// is irrelevant for test-instance generation and keeps draws portable).
    std::size_t below(std::size_t k) { return static_cast<std::size_t>(next() % k); }

    bool coin() { return (next() & 1) != 0; }

    /// True with probability `density`: draw 32 bits u and test the exact
    /// integer inequality u * den(density) < num(density) * 2^32.
    bool with_density(const rational& density) {
        std::uint64_t u = next() >> 32;
        return integer(u) * denominator(density) < numerator(density) * integer(4294967296ull);
    }

    /// Weight draws: nat from {1,2,3}; int from {-3,...,3} without 0;
    /// rational with that numerator over a denominator from {1,2,3}.
    rational weight(weight_monoid monoid) {
        static const int nonzero[6] = {-3, -2, -1, 1, 2, 3};
        switch (monoid) {
        case weight_monoid::nat: return rational(1 + below(3));
        case weight_monoid::integer: return rational(nonzero[below(6)]);
        default: return rational(nonzero[below(6)], 1 + below(3));
        }
    }
};

/// One random structure value over a carrier of n states. Draw protocol,
/// in order: dfa — accept coin, then one successor per letter; powerset —
/// one density draw per state; labelled — per label, one density draw per
/// state; monoid — per state, one density draw, then a weight if included.
inline functor_value random_value(const functor_spec& spec, std::size_t n, rng64& rng,
                                  const rational& density) {
    if (const auto* d = std::get_if<dfa_functor>(&spec)) {
        dfa_cell cell;
        cell.accept = rng.coin();
        for (std::size_t a = 0; a < d->alphabet.size(); ++a)
            cell.next.push_back(rng.below(n));
        return cell;
    }
    if (std::holds_alternative<powerset_functor>(spec)) {
        std::vector<state_index> elements;
        for (state_index y = 0; y < n; ++y)
            if (rng.with_density(density))
                elements.push_back(y);
        return subset_value{std::move(elements)};
    }
    if (const auto* l = std::get_if<labelled_functor>(&spec)) {
        std::vector<std::pair<std::size_t, state_index>> edges;
        for (std::size_t a = 0; a < l->labels.size(); ++a)
            for (state_index y = 0; y < n; ++y)
                if (rng.with_density(density))
                    edges.emplace_back(a, y);
        return labelled_value{std::move(edges)};
    }
    const auto& m = std::get<monoid_functor>(spec);
    std::vector<std::pair<state_index, rational>> weights;
    for (state_index y = 0; y < n; ++y)
        if (rng.with_density(density))
            weights.emplace_back(y, rng.weight(m.monoid));
    return weight_value{std::move(weights)};
}

} // namespace detail

/// Deterministic random pointed coalgebra: n states, point 0, structure
/// drawn state by state with detail::random_value. Identical arguments
/// give identical results on every platform. Negative weights for the int
/// and rational monoids are deliberate, so weight cancellation shows up in
/// randomized runs and not only in fixed fixtures.
inline pointed_coalgebra random_coalgebra(const functor_spec& spec, std::size_t n,
                                          std::uint64_t seed, const rational& density) {
    validate_spec(spec);
    if (n == 0)
        throw validation_error("random coalgebra needs at least one state");
    if (density < 0 || density > 1)
        throw validation_error("density must lie in [0, 1]");
    detail::rng64 rng(seed);
    std::vector<functor_value> structure;
    structure.reserve(n);
    for (std::size_t x = 0; x < n; ++x)
        structure.push_back(detail::random_value(spec, n, rng, density));
    return pointed_coalgebra(coalgebra(spec, make_set(n), std::move(structure)), 0);
}

/// A coalgebra together with a planted pointed homomorphism onto it.
struct planted_cover {
    pointed_coalgebra source;
    finite_map projection; // verified surjective pointed homomorphism onto the base
};

/// Blow a pointed coalgebra up into a random cover: each state x becomes
/// 1..max_copies copies, and each structure value is lifted by choosing,
/// per referenced state, which copies carry the reference (weights are
/// randomly split across copies, summing back to the original). The
/// projection collapsing copies is then a surjective pointed homomorphism
/// by construction — input for suites that quantify over all homomorphisms
/// into a fixed target.
inline planted_cover random_cover(const pointed_coalgebra& c, std::uint64_t seed,
                                  std::size_t max_copies) {
    if (max_copies == 0)
        throw validation_error("cover needs at least one copy per state");
    detail::rng64 rng(seed);
    const std::size_t n = c.base.states.size;

    std::vector<std::size_t> copies(n);
    std::vector<std::size_t> offset(n);
    std::size_t total = 0;
    for (std::size_t x = 0; x < n; ++x) {
        copies[x] = 1 + rng.below(max_copies);
        offset[x] = total;
        total += copies[x];
    }

    std::vector<state_index> projection_table(total);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t j = 0; j < copies[x]; ++j)
            projection_table[offset[x] + j] = x;

    auto some_copy = [&](state_index y) { return offset[y] + rng.below(copies[y]); };

    // Lift one structure value from the base to a copy.
    auto lift = [&](const functor_value& v) -> functor_value {
        if (const auto* cell = std::get_if<dfa_cell>(&v)) {
            dfa_cell out{cell->accept, cell->next};
            for (state_index& y : out.next)
                y = some_copy(y);
            return out;
        }
        if (const auto* sub = std::get_if<subset_value>(&v)) {
            std::vector<state_index> elements;
            for (state_index y : sub->elements) {
                elements.push_back(some_copy(y)); // image must keep y
                for (std::size_t j = 0; j < copies[y]; ++j)
                    if (rng.coin())
                        elements.push_back(offset[y] + j);
            }
            return make_subset(std::move(elements));
        }
        if (const auto* lv = std::get_if<labelled_value>(&v)) {
            std::vector<std::pair<std::size_t, state_index>> edges;
            for (const auto& [label, y] : lv->edges) {
                edges.emplace_back(label, some_copy(y));
                for (std::size_t j = 0; j < copies[y]; ++j)
                    if (rng.coin())
                        edges.emplace_back(label, offset[y] + j);
            }
            return make_labelled(std::move(edges));
        }
        const auto& wv = std::get<weight_value>(v);
        const auto& monoid = std::get<monoid_functor>(c.base.spec).monoid;
        std::vector<std::pair<state_index, rational>> weights;
        for (const auto& [y, w] : wv.weights) {
            state_index main = some_copy(y);
            if (copies[y] >= 2 && rng.coin()) {
                // Split the weight over two copies; totals are preserved.
                state_index other = some_copy(y);
                if (other == main)
                    other = offset[y] + (main - offset[y] + 1) % copies[y];
                if (monoid == weight_monoid::nat) {
                    if (is_integral(w) && numerator(w) >= 2) {
                        rational part(1 + rng.below(
                                          numerator(w).convert_to<std::size_t>() - 1));
                        weights.emplace_back(main, w - part);
                        weights.emplace_back(other, part);
                        continue;
                    }
                } else {
                    rational delta(1 + rng.below(2));
                    weights.emplace_back(main, w + delta);
                    weights.emplace_back(other, -delta);
                    continue;
                }
            }
            weights.emplace_back(main, w);
        }
        return make_weights(weights);
    };

    std::vector<functor_value> structure;
    structure.reserve(total);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t j = 0; j < copies[x]; ++j)
            structure.push_back(lift(c.base.structure[x]));

    pointed_coalgebra source(coalgebra(c.base.spec, make_set(total), std::move(structure)),
                             offset[c.point]);
    finite_map projection{source.base.states, c.base.states, std::move(projection_table)};
    detail::require(is_surjective(projection) && is_pointed_homomorphism(projection, source, c),
                    "cover projection must be a surjective pointed homomorphism");
    return planted_cover{std::move(source), std::move(projection)};
}

/// A coalgebra embedded into a larger one.
struct planted_extension {
    pointed_coalgebra larger;
    finite_map inclusion; // verified injective pointed homomorphism from the base
};

/// Add `extra` states with random structure after a copy of c. The copy's
/// structure never references the new states, so the prefix inclusion is a
/// homomorphism by construction — input for suites that quantify over all
/// homomorphisms out of a fixed source.
inline planted_extension extend_with_junk(const pointed_coalgebra& c, std::size_t extra,
                                          std::uint64_t seed, const rational& density) {
    detail::rng64 rng(seed);
    const std::size_t n = c.base.states.size;
    std::vector<functor_value> structure = c.base.structure;
    for (std::size_t i = 0; i < extra; ++i)
        structure.push_back(detail::random_value(c.base.spec, n + extra, rng, density));

    pointed_coalgebra larger(coalgebra(c.base.spec, make_set(n + extra), std::move(structure)),
                             c.point);
    std::vector<state_index> table(n);
    std::iota(table.begin(), table.end(), state_index{0});
    finite_map inclusion{c.base.states, larger.base.states, std::move(table)};
    detail::require(is_pointed_homomorphism(inclusion, c, larger),
                    "prefix inclusion must be a pointed homomorphism");
    return planted_extension{std::move(larger), std::move(inclusion)};
}

} // namespace coalgmin
