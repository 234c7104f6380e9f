#pragma once

// Finite sets, maps between them, and the (surjective, injective)
// factorization machinery: image factorization, the unique diagonal
// fill-in, wide intersections of injections, and joins of partitions.

#include <coalgmin/errors.hpp>

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace coalgmin {

using state_index = std::size_t;

inline constexpr state_index npos = std::numeric_limits<state_index>::max();

/// A finite set {0, ..., size-1}, optionally carrying one display label
/// per element. Labels, when present, must be pairwise distinct.
struct finite_set {
    std::size_t size = 0;
    std::optional<std::vector<std::string>> labels;

    bool operator==(const finite_set&) const = default;
};

inline finite_set make_set(std::size_t size) { return finite_set{size, std::nullopt}; }

inline finite_set make_set(std::vector<std::string> labels) {
    finite_set s{labels.size(), std::move(labels)};
    auto sorted = *s.labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw validation_error("finite set labels must be pairwise distinct");
    return s;
}

/// Name of element i: its label when the set has labels, else "s<i>".
inline std::string element_name(const finite_set& s, state_index i) {
    if (i >= s.size)
        throw state_out_of_range("element index " + std::to_string(i) + " outside carrier of size " +
                                 std::to_string(s.size));
    if (s.labels)
        return (*s.labels)[i];
    return "s" + std::to_string(i);
}

/// A total function between finite sets, tabulated as table[x] = f(x).
struct finite_map {
    finite_set domain;
    finite_set codomain;
    std::vector<state_index> table;

    state_index operator()(state_index x) const {
        if (x >= table.size())
            throw state_out_of_range("map applied outside its domain");
        return table[x];
    }

    bool operator==(const finite_map&) const = default;
};

inline finite_map make_map(finite_set domain, finite_set codomain, std::vector<state_index> table) {
    if (table.size() != domain.size)
        throw carrier_mismatch("map table length does not match its domain");
    for (state_index y : table)
        if (y >= codomain.size)
            throw state_out_of_range("map table entry outside its codomain");
    return finite_map{std::move(domain), std::move(codomain), std::move(table)};
}

inline finite_map identity_map(finite_set carrier) {
    std::vector<state_index> table(carrier.size);
    std::iota(table.begin(), table.end(), state_index{0});
    return finite_map{carrier, std::move(carrier), std::move(table)};
}

/// Composite g . f (apply f first). The inner carriers must have equal size.
inline finite_map compose(const finite_map& g, const finite_map& f) {
    if (f.codomain.size != g.domain.size)
        throw carrier_mismatch("composition of maps with incompatible middle carrier");
    std::vector<state_index> table(f.table.size());
    for (std::size_t x = 0; x < f.table.size(); ++x)
        table[x] = g.table[f.table[x]];
    return finite_map{f.domain, g.codomain, std::move(table)};
}

inline bool is_surjective(const finite_map& f) {
    std::vector<char> hit(f.codomain.size, 0);
    for (state_index y : f.table)
        hit[y] = 1;
    return std::all_of(hit.begin(), hit.end(), [](char b) { return b != 0; });
}

inline bool is_injective(const finite_map& f) {
    std::vector<char> hit(f.codomain.size, 0);
    for (state_index y : f.table) {
        if (hit[y])
            return false;
        hit[y] = 1;
    }
    return true;
}

inline bool is_bijective(const finite_map& f) {
    return f.domain.size == f.codomain.size && is_injective(f);
}

/// Inverse of a bijection.
inline finite_map invert(const finite_map& f) {
    if (!is_bijective(f))
        throw not_injective("only bijections can be inverted");
    std::vector<state_index> table(f.codomain.size);
    for (std::size_t x = 0; x < f.table.size(); ++x)
        table[f.table[x]] = x;
    return finite_map{f.codomain, f.domain, std::move(table)};
}

/// f split as (embedding . quotient) through its image. Image elements are
/// numbered by first hit in domain order, and inherit codomain labels.
struct image_factorization {
    finite_map quotient;  // surjection onto the image
    finite_map embedding; // injection into the original codomain
    finite_set image;     // = quotient.codomain = embedding.domain
};

inline image_factorization image_factorize(const finite_map& f) {
    std::vector<state_index> to_image(f.codomain.size, npos);
    std::vector<state_index> embed;
    std::vector<state_index> quot(f.table.size());
    for (std::size_t x = 0; x < f.table.size(); ++x) {
        state_index y = f.table[x];
        if (to_image[y] == npos) {
            to_image[y] = embed.size();
            embed.push_back(y);
        }
        quot[x] = to_image[y];
    }
    finite_set image = make_set(embed.size());
    if (f.codomain.labels) {
        std::vector<std::string> labels;
        labels.reserve(embed.size());
        for (state_index y : embed)
            labels.push_back((*f.codomain.labels)[y]);
        image.labels = std::move(labels);
    }
    return image_factorization{finite_map{f.domain, image, std::move(quot)},
                               finite_map{image, f.codomain, std::move(embed)}, image};
}

/// For a commuting square g . e = m . f with e surjective and m injective,
/// return the unique d with d . e = f and m . d = g.
///
///        e
///    A ----->> B
///    |        /|
///  f |   d  /  | g
///    v    L    v
///    C >-----> D
///        m
inline finite_map diagonal_fill_in(const finite_map& e, const finite_map& f, const finite_map& g,
                                   const finite_map& m) {
    if (e.domain.size != f.domain.size || e.codomain.size != g.domain.size ||
        f.codomain.size != m.domain.size || g.codomain.size != m.codomain.size)
        throw carrier_mismatch("diagonal fill-in: square sides do not line up");
    if (!is_surjective(e))
        throw not_surjective("diagonal fill-in: top edge is not surjective");
    if (!is_injective(m))
        throw not_injective("diagonal fill-in: bottom edge is not injective");
    if (compose(g, e) != compose(m, f))
        throw square_does_not_commute("diagonal fill-in: g . e != m . f");

    // d(e(a)) = f(a) is forced; surjectivity of e defines d everywhere, and
    // commutation plus injectivity of m makes the choice of preimage moot.
    std::vector<state_index> table(e.codomain.size, npos);
    for (std::size_t a = 0; a < e.table.size(); ++a)
        table[e.table[a]] = f.table[a];
    return finite_map{e.codomain, f.codomain, std::move(table)};
}

/// Intersection of subobjects: given injections m_i : S_i >-> X, return the
/// injection of { x in X | x lies in every image } into X, numbered in
/// ascending order of X. An empty family yields all of X (identity).
inline finite_map intersect_injections(const finite_set& target, const std::vector<finite_map>& subs) {
    std::vector<char> in_all(target.size, 1);
    for (const finite_map& m : subs) {
        if (m.codomain.size != target.size)
            throw mixed_codomains("intersection of injections into different codomains");
        if (!is_injective(m))
            throw not_injective("intersection expects injections");
        std::vector<char> hit(target.size, 0);
        for (state_index y : m.table)
            hit[y] = 1;
        for (std::size_t y = 0; y < target.size; ++y)
            in_all[y] &= hit[y];
    }
    std::vector<state_index> table;
    for (std::size_t y = 0; y < target.size; ++y)
        if (in_all[y])
            table.push_back(y);
    finite_set sub = make_set(table.size());
    if (target.labels) {
        std::vector<std::string> labels;
        for (state_index y : table)
            labels.push_back((*target.labels)[y]);
        sub.labels = std::move(labels);
    }
    return finite_map{std::move(sub), target, std::move(table)};
}

/// A partition of a carrier into block_count non-empty blocks, in canonical
/// form: blocks are numbered by their least member, in increasing order.
struct partition {
    finite_set carrier;
    std::vector<state_index> block_of; // block_of[x] = block id of x
    std::size_t block_count = 0;

    bool operator==(const partition&) const = default;
};

/// Renumber an arbitrary block assignment into canonical form.
inline partition make_partition(finite_set carrier, const std::vector<state_index>& raw_block_of) {
    if (raw_block_of.size() != carrier.size)
        throw carrier_mismatch("partition block assignment does not match its carrier");
    std::vector<state_index> rename;
    std::vector<state_index> block_of(raw_block_of.size());
    for (std::size_t x = 0; x < raw_block_of.size(); ++x) {
        state_index raw = raw_block_of[x];
        auto it = std::find(rename.begin(), rename.end(), raw);
        if (it == rename.end()) {
            rename.push_back(raw);
            block_of[x] = rename.size() - 1;
        } else {
            block_of[x] = static_cast<state_index>(it - rename.begin());
        }
    }
    return partition{std::move(carrier), std::move(block_of), rename.size()};
}

inline partition discrete_partition(finite_set carrier) {
    std::vector<state_index> block_of(carrier.size);
    std::iota(block_of.begin(), block_of.end(), state_index{0});
    std::size_t count = carrier.size;
    return partition{std::move(carrier), std::move(block_of), count};
}

inline partition single_block_partition(finite_set carrier) {
    std::size_t count = carrier.size == 0 ? 0 : 1;
    return partition{carrier, std::vector<state_index>(carrier.size, 0), count};
}

/// Blocks listed as sorted member lists, in block id order.
inline std::vector<std::vector<state_index>> blocks(const partition& p) {
    std::vector<std::vector<state_index>> out(p.block_count);
    for (std::size_t x = 0; x < p.block_of.size(); ++x)
        out[p.block_of[x]].push_back(x);
    return out;
}

/// The projection of the carrier onto the block set. Block labels are taken
/// from each block's least member when the carrier is labelled.
inline finite_map quotient_map(const partition& p) {
    finite_set target = make_set(p.block_count);
    if (p.carrier.labels) {
        std::vector<std::string> labels(p.block_count);
        std::vector<char> seen(p.block_count, 0);
        for (std::size_t x = 0; x < p.block_of.size(); ++x)
            if (!seen[p.block_of[x]]) {
                seen[p.block_of[x]] = 1;
                labels[p.block_of[x]] = (*p.carrier.labels)[x];
            }
        target.labels = std::move(labels);
    }
    return finite_map{p.carrier, std::move(target), p.block_of};
}

/// Whether every block of p is contained in a block of q (p is finer).
inline bool refines(const partition& p, const partition& q) {
    if (p.carrier.size != q.carrier.size)
        throw mixed_carriers("refinement compared across different carriers");
    std::vector<state_index> image(p.block_count, npos);
    for (std::size_t x = 0; x < p.block_of.size(); ++x) {
        state_index b = p.block_of[x];
        if (image[b] == npos)
            image[b] = q.block_of[x];
        else if (image[b] != q.block_of[x])
            return false;
    }
    return true;
}

namespace detail {

struct union_find {
    std::vector<state_index> parent;

    explicit union_find(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), state_index{0});
    }

    state_index find(state_index x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    void unite(state_index a, state_index b) { parent[find(a)] = find(b); }
};

} // namespace detail

/// Least upper bound of a family of partitions of one carrier: the finest
/// partition that every member refines. An empty family yields the discrete
/// partition.
inline partition join_partitions(const finite_set& carrier, const std::vector<partition>& parts) {
    detail::union_find uf(carrier.size);
    for (const partition& p : parts) {
        if (p.carrier.size != carrier.size)
            throw mixed_carriers("join of partitions of different carriers");
        std::vector<state_index> first(p.block_count, npos);
        for (std::size_t x = 0; x < p.block_of.size(); ++x) {
            state_index b = p.block_of[x];
            if (first[b] == npos)
                first[b] = x;
            else
                uf.unite(first[b], x);
        }
    }
    std::vector<state_index> raw(carrier.size);
    for (std::size_t x = 0; x < carrier.size; ++x)
        raw[x] = uf.find(x);
    return make_partition(carrier, raw);
}

} // namespace coalgmin
