#pragma once

// The reachable part of a pointed coalgebra: its least pointed
// subcoalgebra. Computed directly by closing the point under value
// supports; checked against an oracle that intersects all point-containing
// closed subsets.

#include <coalgmin/coalgebra.hpp>
#include <coalgmin/errors.hpp>
#include <coalgmin/factorization.hpp>
#include <coalgmin/functors.hpp>

#include <algorithm>
#include <vector>

namespace coalgmin {

struct reachable_result {
    pointed_coalgebra part;    // the reachable subcoalgebra, point first
    homomorphism inclusion;    // its embedding into the original coalgebra
};

/// The least subcoalgebra containing the point: breadth-first closure of
/// {point} under the supports of the structure values. States are numbered
/// in discovery order, so the new point is state 0.
inline reachable_result reachable_part(const pointed_coalgebra& c) {
    const std::size_t n = c.base.states.size;
    std::vector<state_index> order;
    std::vector<state_index> to_new(n, npos);
    order.push_back(c.point);
    to_new[c.point] = 0;
    for (std::size_t head = 0; head < order.size(); ++head)
        for (state_index next : support(c.base.spec, c.base.structure[order[head]]))
            if (to_new[next] == npos) {
                to_new[next] = order.size();
                order.push_back(next);
            }

    finite_set sub = make_set(order.size());
    if (c.base.states.labels) {
        std::vector<std::string> labels;
        labels.reserve(order.size());
        for (state_index x : order)
            labels.push_back((*c.base.states.labels)[x]);
        sub.labels = std::move(labels);
    }

    // Supports of kept states are closed under discovery, so renaming
    // through to_new never hits npos.
    finite_map rename{c.base.states, sub, to_new};
    std::vector<functor_value> structure;
    structure.reserve(order.size());
    for (state_index x : order)
        structure.push_back(apply_map(c.base.spec, rename, c.base.structure[x]));

    pointed_coalgebra part(coalgebra(c.base.spec, sub, std::move(structure)), 0);
    homomorphism inclusion =
        homomorphism::verify(finite_map{part.base.states, c.base.states, order}, part.base, c.base);
    detail::require(is_injective(inclusion.map()), "reachable part inclusion must be injective");
    return reachable_result{std::move(part), std::move(inclusion)};
}

inline bool is_reachable(const pointed_coalgebra& c) {
    return reachable_part(c).part.base.states.size == c.base.states.size;
}

/// Brute-force reference: intersect every subset of states that contains
/// the point and is closed under supports. Returns the member states of
/// the intersection in increasing order. Exponential; carriers are capped
/// at 12 states.
inline std::vector<state_index> reachable_part_oracle(const pointed_coalgebra& c) {
    const std::size_t n = c.base.states.size;
    if (n > 12)
        throw too_large("reachable-part oracle is capped at 12 states");

    auto closed = [&](unsigned long mask) {
        for (std::size_t x = 0; x < n; ++x) {
            if (!(mask >> x & 1))
                continue;
            for (state_index y : support(c.base.spec, c.base.structure[x]))
                if (!(mask >> y & 1))
                    return false;
        }
        return true;
    };

    unsigned long all = (n == 0) ? 0ul : (~0ul >> (64 - n));
    unsigned long meet = all;
    for (unsigned long mask = 0; mask <= all && n > 0; ++mask)
        if ((mask >> c.point & 1) && closed(mask))
            meet &= mask;

    std::vector<state_index> members;
    for (std::size_t x = 0; x < n; ++x)
        if (meet >> x & 1)
            members.push_back(x);
    return members;
}

} // namespace coalgmin
