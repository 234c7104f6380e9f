#pragma once

// Coalgebras for a signature functor, pointed variants, homomorphisms
// between them, and the image factorization of a homomorphism into a
// surjection followed by an embedding.

#include <coalgmin/errors.hpp>
#include <coalgmin/factorization.hpp>
#include <coalgmin/functors.hpp>

#include <numeric>
#include <optional>
#include <utility>
#include <vector>

namespace coalgmin {

/// A finite coalgebra: a carrier plus one functor value per state,
/// validated on construction.
struct coalgebra {
    functor_spec spec;
    finite_set states;
    std::vector<functor_value> structure; // structure[x] = transition value of x

    coalgebra(functor_spec spec_, finite_set states_, std::vector<functor_value> structure_)
        : spec(std::move(spec_)), states(std::move(states_)), structure(std::move(structure_)) {
        validate_spec(spec);
        if (structure.size() != states.size)
            throw carrier_mismatch("coalgebra needs exactly one value per state");
        for (const functor_value& v : structure)
            validate_value(spec, v, states.size);
    }

    bool operator==(const coalgebra&) const = default;
};

/// A coalgebra with a distinguished initial state.
struct pointed_coalgebra {
    coalgebra base;
    state_index point;

    pointed_coalgebra(coalgebra base_, state_index point_)
        : base(std::move(base_)), point(point_) {
        if (point >= base.states.size)
            throw state_out_of_range("point outside the carrier");
    }

    bool operator==(const pointed_coalgebra&) const = default;
};

/// Whether h is a homomorphism src -> tgt: both share the functor, h's
/// carriers match, and the structure square commutes at every state,
/// i.e. tgt.structure[h(x)] = F(h)(src.structure[x]).
inline bool is_homomorphism(const finite_map& h, const coalgebra& src, const coalgebra& tgt) {
    if (src.spec != tgt.spec)
        throw spec_mismatch("homomorphism between coalgebras of different functors");
    if (h.domain.size != src.states.size || h.codomain.size != tgt.states.size)
        throw carrier_mismatch("homomorphism map does not match the carriers");
    for (std::size_t x = 0; x < src.states.size; ++x)
        if (!value_equal(src.spec, tgt.structure[h.table[x]], apply_map(src.spec, h, src.structure[x])))
            return false;
    return true;
}

/// A homomorphism additionally has to send point to point.
inline bool is_pointed_homomorphism(const finite_map& h, const pointed_coalgebra& src,
                                    const pointed_coalgebra& tgt) {
    if (h.domain.size != src.base.states.size || h.codomain.size != tgt.base.states.size)
        throw carrier_mismatch("homomorphism map does not match the carriers");
    return h.table[src.point] == tgt.point && is_homomorphism(h, src.base, tgt.base);
}

/// A record of a map between two coalgebras. verified() = true is proof
/// that the structure square commuted when the record was built; records
/// made through unverified() carry no such claim (used for maps that are
/// deliberately not homomorphisms, like truncated unravellings).
class homomorphism {
public:
    static homomorphism verify(finite_map map, coalgebra source, coalgebra target) {
        if (!is_homomorphism(map, source, target))
            throw not_a_homomorphism("structure square does not commute");
        return homomorphism(std::move(map), std::move(source), std::move(target), true);
    }

    static homomorphism unverified(finite_map map, coalgebra source, coalgebra target) {
        if (map.domain.size != source.states.size || map.codomain.size != target.states.size)
            throw carrier_mismatch("homomorphism map does not match the carriers");
        return homomorphism(std::move(map), std::move(source), std::move(target), false);
    }

    const finite_map& map() const { return map_; }
    const coalgebra& source() const { return source_; }
    const coalgebra& target() const { return target_; }
    bool verified() const { return verified_; }

private:
    homomorphism(finite_map map, coalgebra source, coalgebra target, bool verified)
        : map_(std::move(map)), source_(std::move(source)), target_(std::move(target)),
          verified_(verified) {}

    finite_map map_;
    coalgebra source_;
    coalgebra target_;
    bool verified_;
};

/// h = embedding . quotient through a coalgebra on h's image.
struct homomorphism_factorization {
    homomorphism quotient;  // surjective onto mid
    homomorphism embedding; // injective into h's target
    coalgebra mid;
};

/// Factor a homomorphism through its image. The image inherits a unique
/// coalgebra structure making both legs homomorphisms: the value at e(x)
/// must be F(e)(src.structure[x]), and surjectivity of e pins every image
/// state down. Consistency across the fibers of e is re-checked here.
inline homomorphism_factorization factorize_homomorphism(const homomorphism& h) {
    if (!h.verified())
        throw not_a_homomorphism("only verified homomorphisms can be factorized");
    image_factorization split = image_factorize(h.map());
    const coalgebra& src = h.source();
    const coalgebra& tgt = h.target();

    std::vector<std::optional<functor_value>> mid_structure(split.quotient.codomain.size);
    for (std::size_t x = 0; x < src.states.size; ++x) {
        functor_value v = apply_map(src.spec, split.quotient, src.structure[x]);
        state_index image_state = split.quotient.table[x];
        if (!mid_structure[image_state])
            mid_structure[image_state] = std::move(v);
        else
            detail::require(value_equal(src.spec, *mid_structure[image_state], v),
                            "image structure disagrees across a fiber of a homomorphism");
    }

    std::vector<functor_value> structure;
    structure.reserve(mid_structure.size());
    for (auto& v : mid_structure) {
        detail::require(v.has_value(), "image state missed by the quotient leg");
        structure.push_back(std::move(*v));
    }
    coalgebra mid(src.spec, split.quotient.codomain, std::move(structure));

    homomorphism quotient = homomorphism::verify(split.quotient, src, mid);
    homomorphism embedding = homomorphism::verify(split.embedding, mid, tgt);
    return homomorphism_factorization{std::move(quotient), std::move(embedding), std::move(mid)};
}

namespace detail {

/// Backtracking search for a pointed homomorphism. States of src are
/// assigned in breadth-first order from the point (unreachable states in
/// index order), candidate targets in index order, so the result is
/// deterministic. When `bijective` is set, assignments must not reuse
/// targets, which finds isomorphisms.
inline std::optional<std::vector<state_index>> search_pointed_homomorphism(
    const pointed_coalgebra& src, const pointed_coalgebra& tgt, bool bijective) {
    if (src.base.spec != tgt.base.spec)
        throw spec_mismatch("homomorphism search across different functors");
    const std::size_t n = src.base.states.size;
    const std::size_t m = tgt.base.states.size;
    if (bijective && n != m)
        return std::nullopt;
    if (n == 0)
        return std::vector<state_index>{};

    // Assignment order: plain state-index order with candidates tried in
    // increasing order, so the first complete table found is the
    // lexicographically least solution.
    std::vector<state_index> order(n);
    std::iota(order.begin(), order.end(), state_index{0});

    std::vector<state_index> assign(n, npos);
    std::vector<char> used(m, 0);

    // A state's structure constraint can be checked once the state and its
    // whole support are assigned.
    auto ready = [&](state_index x) {
        for (state_index y : support(src.base.spec, src.base.structure[x]))
            if (assign[y] == npos)
                return false;
        return true;
    };
    auto consistent = [&](state_index x) {
        finite_map partial{src.base.states, tgt.base.states, assign};
        return value_equal(src.base.spec, tgt.base.structure[assign[x]],
                           apply_map(src.base.spec, partial, src.base.structure[x]));
    };

    auto rec = [&](auto&& self, std::size_t depth) -> bool {
        if (depth == n)
            return true;
        state_index x = order[depth];
        for (state_index candidate = 0; candidate < m; ++candidate) {
            if (bijective && used[candidate])
                continue;
            if (x == src.point && candidate != tgt.point)
                continue;
            assign[x] = candidate;
            used[candidate] = 1;
            bool ok = true;
            for (std::size_t d = 0; d <= depth && ok; ++d)
                if (ready(order[d]))
                    ok = consistent(order[d]);
            if (ok && self(self, depth + 1))
                return true;
            assign[x] = npos;
            used[candidate] = 0;
        }
        return false;
    };

    if (!rec(rec, 0))
        return std::nullopt;
    return assign;
}

} // namespace detail

/// The lexicographically least (in table order) pointed homomorphism
/// src -> tgt, if any exists.
inline std::optional<finite_map> find_pointed_homomorphism(const pointed_coalgebra& src,
                                                           const pointed_coalgebra& tgt) {
    auto assign = detail::search_pointed_homomorphism(src, tgt, /*bijective=*/false);
    if (!assign)
        return std::nullopt;
    finite_map h{src.base.states, tgt.base.states, std::move(*assign)};
    detail::require(is_pointed_homomorphism(h, src, tgt), "search returned a non-homomorphism");
    return h;
}

/// Whether a and b are isomorphic as pointed coalgebras. A bijective
/// homomorphism of set-based coalgebras is automatically an isomorphism
/// (its inverse satisfies the square by functoriality), so searching for a
/// bijective homomorphism suffices. The inverse square is still re-checked.
inline bool are_isomorphic_pointed(const pointed_coalgebra& a, const pointed_coalgebra& b) {
    auto assign = detail::search_pointed_homomorphism(a, b, /*bijective=*/true);
    if (!assign)
        return false;
    finite_map h{a.base.states, b.base.states, std::move(*assign)};
    detail::require(is_pointed_homomorphism(h, a, b), "search returned a non-homomorphism");
    detail::require(is_pointed_homomorphism(invert(h), b, a), "inverse of a bijective homomorphism failed");
    return true;
}

} // namespace coalgmin
