#pragma once

// Minimization of pointed coalgebras to well-pointed form (reachable and
// simple), by chaining the two constructions in either order.
//
// Taking the simple quotient first always lands on a well-pointed result:
// the reachable part of a simple coalgebra is again simple. Restricting to
// the reachable part first works for the dfa, powerset, labelled, and
// naturals-weighted functors, where collapsing states never cuts edges;
// with integer or rational weights, opposite weights on two states cancel
// once the states are identified, so the quotient of a reachable coalgebra
// can lose reachability and the two orders genuinely disagree. The
// reach-first result is returned as computed — possibly not well-pointed —
// because surfacing that effect is the point of offering both orders.

#include <coalgmin/coalgebra.hpp>
#include <coalgmin/errors.hpp>
#include <coalgmin/observability.hpp>
#include <coalgmin/reachability.hpp>

#include <utility>

namespace coalgmin {

enum class minimize_order {
    simple_first, // simple quotient, then reachable part
    reach_first,  // reachable part, then simple quotient
};

/// Minimize a pointed coalgebra by composing the simple quotient and the
/// reachable part in the requested order. simple_first output is always
/// reachable and simple; reach_first output can fail to be reachable for
/// cancellative weights. States come out in canonical order: quotient
/// blocks by least member, reachable parts in discovery order.
inline pointed_coalgebra well_pointed_minimize(const pointed_coalgebra& c, minimize_order order) {
    if (order == minimize_order::simple_first) {
        pointed_coalgebra simple = simple_quotient_pointed(c).quotient;
        pointed_coalgebra out = reachable_part(simple).part;
        detail::require(is_simple(out.base), "reachable part of a simple quotient must be simple");
        return out;
    }
    pointed_coalgebra reached = reachable_part(c).part;
    pointed_coalgebra out = simple_quotient_pointed(reached).quotient;
    detail::require(is_simple(out.base), "simple quotient must be simple");
    return out;
}

/// Whether the two orders of well_pointed_minimize agree on c, up to
/// pointed isomorphism.
inline bool orders_agree(const pointed_coalgebra& c) {
    pointed_coalgebra via_simple = well_pointed_minimize(c, minimize_order::simple_first);
    pointed_coalgebra via_reach = well_pointed_minimize(c, minimize_order::reach_first);
    return are_isomorphic_pointed(via_simple, via_reach);
}

/// Outcome of the fixed weight-cancellation construction below.
struct cancellation_report {
    pointed_coalgebra domain;   // reachable by construction
    pointed_coalgebra codomain; // its image under the quotient
    finite_map quotient;        // the surjection identifying b1 and b2
    bool hom_verified = false;
    bool domain_reachable = false;
    bool codomain_reachable = false;
};

/// Build the fixed integer-weighted witness that surjective images of
/// reachable coalgebras need not be reachable. The point sees two states
/// with weights +3 and -3; identifying them adds the weights to zero, so
/// in the image the point has empty structure and the merged state goes
/// unreached, even though the quotient map is a genuine surjective pointed
/// homomorphism.
inline cancellation_report demonstrate_cancellation_counterexample() {
    functor_spec spec = monoid_functor{weight_monoid::integer};

    // a -> {b1: +3, b2: -3}; b1 and b2 carry zero structure.
    coalgebra domain_base(spec, make_set({"a", "b1", "b2"}),
                          {make_weights({{1, 3}, {2, -3}}), zero_weights(), zero_weights()});
    pointed_coalgebra domain(std::move(domain_base), 0);

    // Image under h(a) = a, h(b1) = h(b2) = b: the weights on b cancel.
    coalgebra codomain_base(spec, make_set({"a", "b"}), {zero_weights(), zero_weights()});
    pointed_coalgebra codomain(std::move(codomain_base), 0);

    finite_map quotient{domain.base.states, codomain.base.states, {0, 1, 1}};

    cancellation_report report{std::move(domain), std::move(codomain), std::move(quotient)};
    report.hom_verified = is_surjective(report.quotient) &&
                          is_pointed_homomorphism(report.quotient, report.domain, report.codomain);
    report.domain_reachable = is_reachable(report.domain);
    report.codomain_reachable = is_reachable(report.codomain);
    return report;
}

} // namespace coalgmin
