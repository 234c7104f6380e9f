#pragma once

// Tree unravelling of pointed coalgebras with natural-number weights (the
// bag functor): the path-indexed tree over the reachable part, with every
// weight-k edge expanded into k distinct children. Unravellings of cyclic
// inputs are infinite, so construction truncates at a caller-chosen depth
// and reports whether it finished.

#include <coalgmin/coalgebra.hpp>
#include <coalgmin/errors.hpp>
#include <coalgmin/factorization.hpp>
#include <coalgmin/functors.hpp>
#include <coalgmin/reachability.hpp>

#include <algorithm>
#include <utility>
#include <vector>

namespace coalgmin {

namespace detail {

inline void require_bag(const functor_spec& spec, const char* who) {
    const auto* m = std::get_if<monoid_functor>(&spec);
    if (!m || m->monoid != weight_monoid::nat)
        throw wrong_functor(std::string(who) + " is only defined for natural-number weights");
}

} // namespace detail

struct unravel_result {
    pointed_coalgebra tree; // the (truncated) unravelling, nodes in BFS order
    homomorphism onto;      // tree node -> its underlying state in the reachable part
    bool complete = false;  // false when the depth cut-off left expandable frontier nodes
    std::size_t depth_used = 0;
};

/// Unravel the reachable part of c into a tree, breadth-first, stopping at
/// max_depth. A node over state x with weight k on target y gets k distinct
/// children over y (grouped by target in state order, creation order within
/// a group), each reached by a weight-1 edge. Frontier nodes cut off by the
/// depth bound keep zero structure; that breaks the homomorphism square
/// exactly when something was cut, so onto is verified iff complete.
inline unravel_result unravel(const pointed_coalgebra& c, std::size_t max_depth) {
    detail::require_bag(c.base.spec, "unravelling");
    const pointed_coalgebra reached = reachable_part(c).part;

    // Unravellings grow exponentially; refuse silly blow-ups early.
    constexpr std::size_t node_cap = 1u << 20;

    std::vector<state_index> under; // tree node -> underlying state
    std::vector<std::size_t> depth;
    std::vector<functor_value> structure;
    under.push_back(reached.point);
    depth.push_back(0);
    bool complete = true;

    for (std::size_t node = 0; node < under.size(); ++node) {
        const auto& weights = std::get<weight_value>(reached.base.structure[under[node]]).weights;
        if (depth[node] == max_depth) {
            structure.push_back(zero_weights());
            if (!weights.empty())
                complete = false; // this node still had children to expand
            continue;
        }
        std::vector<std::pair<state_index, rational>> children;
        for (const auto& [target, weight] : weights) {
            // nat weights are positive integers; expand multiplicity.
            integer k = numerator(weight);
            for (integer i = 0; i < k; ++i) {
                if (under.size() >= node_cap)
                    throw too_large("unravelling exceeds the node cap; lower max_depth");
                children.emplace_back(under.size(), 1);
                under.push_back(target);
                depth.push_back(depth[node] + 1);
            }
        }
        structure.push_back(weight_value{std::move(children)});
    }

    finite_set nodes = make_set(under.size());
    pointed_coalgebra tree(coalgebra(reached.base.spec, nodes, std::move(structure)), 0);
    finite_map onto_map{tree.base.states, reached.base.states, under};

    homomorphism onto = complete
                            ? homomorphism::verify(onto_map, tree.base, reached.base)
                            : homomorphism::unverified(onto_map, tree.base, reached.base);
    if (complete)
        detail::require(is_surjective(onto.map()) && onto.map().table[0] == reached.point,
                        "complete unravelling must cover the reachable part");

    std::size_t depth_used = depth.empty() ? 0 : *std::max_element(depth.begin(), depth.end());
    return unravel_result{std::move(tree), std::move(onto), complete, depth_used};
}

/// Whether a pointed bag coalgebra is a tree: reachable from the point,
/// total incoming weight 0 at the point and exactly 1 everywhere else, and
/// no cycle in the support graph. All three conditions are checked
/// directly.
inline bool is_tree(const pointed_coalgebra& c) {
    detail::require_bag(c.base.spec, "is_tree");
    const std::size_t n = c.base.states.size;

    if (!is_reachable(c))
        return false;

    std::vector<rational> in_weight(n, 0);
    for (const functor_value& v : c.base.structure)
        for (const auto& [target, weight] : std::get<weight_value>(v).weights)
            in_weight[target] += weight;
    for (std::size_t x = 0; x < n; ++x) {
        if (x == c.point ? in_weight[x] != 0 : in_weight[x] != 1)
            return false;
    }

    // Kahn's algorithm on the support graph: acyclic iff all states drain.
    std::vector<std::size_t> in_degree(n, 0);
    for (std::size_t x = 0; x < n; ++x)
        for (state_index y : support(c.base.spec, c.base.structure[x]))
            ++in_degree[y];
    std::vector<state_index> queue;
    for (std::size_t x = 0; x < n; ++x)
        if (in_degree[x] == 0)
            queue.push_back(x);
    std::size_t drained = 0;
    while (!queue.empty()) {
        state_index x = queue.back();
        queue.pop_back();
        ++drained;
        for (state_index y : support(c.base.spec, c.base.structure[x]))
            if (--in_degree[y] == 0)
                queue.push_back(y);
    }
    return drained == n;
}

/// Count the bijective pointed endo-homomorphisms phi of r.tree satisfying
/// onto . phi = onto, by exhaustive backtracking over the nodes. In a tree
/// every such phi maps the children of a node onto the children of its
/// image, so candidates for a node are the unused same-fiber children of
/// the parent's image; every counted assignment is re-checked in full.
inline std::size_t count_automorphisms_over(const unravel_result& r) {
    if (!r.complete)
        throw incomplete_unravelling("automorphism count needs a complete unravelling");
    detail::require(is_tree(r.tree), "complete unravelling must be a tree");
    const std::size_t n = r.tree.base.states.size;
    const std::vector<state_index>& onto = r.onto.map().table;

    // Unique parent of every non-root node (in-weight 1), and child lists.
    std::vector<state_index> parent(n, npos);
    std::vector<std::vector<state_index>> children(n);
    for (std::size_t v = 0; v < n; ++v)
        for (const auto& [child, weight] : std::get<weight_value>(r.tree.base.structure[v]).weights) {
            parent[child] = v;
            children[v].push_back(child);
        }

    std::vector<state_index> phi(n, npos);
    std::vector<char> used(n, 0);
    phi[0] = 0;
    used[0] = 1;
    std::size_t count = 0;

    // Nodes are in BFS order, so parent[v] < v is always assigned first.
    auto rec = [&](auto&& self, std::size_t v) -> void {
        if (v == n) {
            finite_map map{r.tree.base.states, r.tree.base.states, phi};
            detail::require(is_pointed_homomorphism(map, r.tree, r.tree) &&
                                compose(r.onto.map(), map) == r.onto.map(),
                            "counted assignment must be an automorphism over onto");
            ++count;
            return;
        }
        for (state_index w : children[phi[parent[v]]]) {
            if (used[w] || onto[w] != onto[v])
                continue;
            phi[v] = w;
            used[w] = 1;
            self(self, v + 1);
            phi[v] = npos;
            used[w] = 0;
        }
    };
    rec(rec, 1);
    return count;
}

} // namespace coalgmin
