#include "testutil.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace coalgmin;

TEST_CASE("image factorization splits a map through its image") {
    SECTION("identity stays identity") {
        finite_map id = identity_map(make_set(3));
        image_factorization r = image_factorize(id);
        CHECK(r.image.size == 3);
        CHECK(r.quotient == id);
        CHECK(r.embedding == id);
    }

    SECTION("table [0,0,1] into a 2-element codomain") {
        finite_map f = make_map(make_set(3), make_set(2), {0, 0, 1});
        image_factorization r = image_factorize(f);
        CHECK(r.image.size == 2);
        CHECK(r.quotient.table == std::vector<state_index>{0, 0, 1});
        CHECK(r.embedding.table == std::vector<state_index>{0, 1});
    }

    SECTION("empty domain gives the empty injection") {
        finite_map f = make_map(make_set(0), make_set(1), {});
        image_factorization r = image_factorize(f);
        CHECK(r.image.size == 0);
        CHECK(r.embedding.table.empty());
    }

    SECTION("image elements are ordered by first occurrence") {
        finite_map f = make_map(make_set(4), make_set(5), {3, 1, 3, 0});
        image_factorization r = image_factorize(f);
        CHECK(r.embedding.table == std::vector<state_index>{3, 1, 0});
        CHECK(r.quotient.table == std::vector<state_index>{0, 1, 0, 2});
    }

    SECTION("image inherits codomain labels") {
        finite_map f{make_set(2), make_set({"x", "y", "z"}), {2, 2}};
        image_factorization r = image_factorize(f);
        REQUIRE(r.image.labels.has_value());
        CHECK(*r.image.labels == std::vector<std::string>{"z"});
    }

    SECTION("composite equals the original on random maps") {
        tu::rng rng(101);
        for (int i = 0; i < 200; ++i) {
            std::size_t dom = rng.below(7), cod = 1 + rng.below(7);
            finite_map f = tu::random_map(rng, dom, cod);
            image_factorization r = image_factorize(f);
            CHECK(compose(r.embedding, r.quotient) == f);
            CHECK(is_surjective(r.quotient));
            CHECK(is_injective(r.embedding));
        }
    }
}

TEST_CASE("diagonal fill-in of a commuting square") {
    SECTION("identity edges force d = f") {
        finite_map e = identity_map(make_set(3));
        finite_map f = make_map(make_set(3), make_set(4), {1, 2, 3});
        finite_map m = identity_map(make_set(4));
        finite_map d = diagonal_fill_in(e, f, f, m);
        CHECK(d == f);
    }

    SECTION("collapsed fiber with constant f") {
        // e collapses {0,1}; f is constant 0; g must send the point to m(0).
        finite_map e = make_map(make_set(2), make_set(1), {0, 0});
        finite_map f = make_map(make_set(2), make_set(2), {0, 0});
        finite_map m = make_map(make_set(2), make_set(3), {2, 0});
        finite_map g = make_map(make_set(1), make_set(3), {2});
        finite_map d = diagonal_fill_in(e, f, g, m);
        CHECK(d.table == std::vector<state_index>{0});
    }

    SECTION("f separating an e-fiber cannot commute") {
        finite_map e = make_map(make_set(2), make_set(1), {0, 0});
        finite_map f = make_map(make_set(2), make_set(2), {0, 1});
        finite_map m = identity_map(make_set(2));
        finite_map g = make_map(make_set(1), make_set(2), {0});
        CHECK_THROWS_AS(diagonal_fill_in(e, f, g, m), square_does_not_commute);
    }

    SECTION("class violations are rejected") {
        finite_map not_epi = make_map(make_set(1), make_set(2), {0});
        finite_map not_mono = make_map(make_set(2), make_set(1), {0, 0});
        finite_map id1 = identity_map(make_set(1));
        finite_map id2 = identity_map(make_set(2));
        CHECK_THROWS_AS(diagonal_fill_in(not_epi, id1, not_mono, id1), not_surjective);
        CHECK_THROWS_AS(diagonal_fill_in(id2, id2, not_mono, not_mono), not_injective);
    }

    SECTION("the fill-in is the unique diagonal, by exhaustion") {
        // Plant d, derive f and g, then enumerate every candidate B -> C.
        tu::rng rng(202);
        for (int i = 0; i < 300; ++i) {
            std::size_t a = 1 + rng.below(4), b = 1 + rng.below(4);
            if (b > a)
                std::swap(a, b);
            std::size_t c = 1 + rng.below(4), dd = c + rng.below(3);
            finite_map e = tu::random_surjection(rng, a, b);
            finite_map d = tu::random_map(rng, b, c);
            finite_map m = tu::random_injection(rng, c, dd);
            finite_map f = compose(d, e);
            finite_map g = compose(m, d);
            CHECK(diagonal_fill_in(e, f, g, m) == d);

            std::size_t matches = 0;
            coalgmin::detail::for_each_table(b, c, [&](const std::vector<state_index>& table) {
                finite_map candidate{make_set(b), make_set(c), table};
                if (compose(candidate, e) == f && compose(m, candidate) == g)
                    ++matches;
            });
            CHECK(matches == 1);
        }
    }
}

TEST_CASE("maps that are both surjective and injective are bijections") {
    tu::rng rng(303);
    for (int i = 0; i < 200; ++i) {
        std::size_t dom = rng.below(6), cod = rng.below(6);
        if (dom > 0 && cod == 0)
            continue;
        finite_map f = tu::random_map(rng, dom, cod);
        CHECK(is_bijective(f) == (is_surjective(f) && is_injective(f)));
        if (is_bijective(f)) {
            CHECK(compose(invert(f), f) == identity_map(f.domain));
            CHECK(compose(f, invert(f)) == identity_map(f.codomain));
        }
    }
}

TEST_CASE("injectivity cancels on the left") {
    // If m . g is injective and m is injective then g is injective.
    tu::rng rng(404);
    for (int i = 0; i < 300; ++i) {
        std::size_t a = rng.below(5), b = 1 + rng.below(5), c = b + rng.below(3);
        finite_map g = tu::random_map(rng, a, b);
        finite_map m = tu::random_injection(rng, b, c);
        if (is_injective(compose(m, g)))
            CHECK(is_injective(g));
    }
}

TEST_CASE("intersection of injections") {
    finite_set x = make_set(3);
    auto inj = [&](std::vector<state_index> table) {
        return finite_map{make_set(table.size()), x, std::move(table)};
    };

    SECTION("empty family yields the identity subobject") {
        finite_map p = intersect_injections(make_set(4), {});
        CHECK(p == identity_map(make_set(4)));
    }

    SECTION("{0,1} meets {1,2} in {1}") {
        finite_map p = intersect_injections(x, {inj({0, 1}), inj({1, 2})});
        CHECK(p.table == std::vector<state_index>{1});
    }

    SECTION("disjoint images meet in the empty subobject") {
        finite_map p = intersect_injections(x, {inj({0}), inj({1})});
        CHECK(p.table.empty());
    }

    SECTION("codomain mismatch and non-injections are rejected") {
        CHECK_THROWS_AS(
            intersect_injections(x, {finite_map{make_set(1), make_set(2), {0}}}),
            mixed_codomains);
        CHECK_THROWS_AS(
            intersect_injections(x, {finite_map{make_set(2), x, {1, 1}}}),
            not_injective);
    }

    SECTION("result factors through every input and is the largest such") {
        tu::rng rng(505);
        for (int i = 0; i < 200; ++i) {
            std::size_t n = 1 + rng.below(6);
            finite_set target = make_set(n);
            std::vector<finite_map> subs;
            std::vector<char> expected(n, 1);
            for (std::size_t k = rng.below(4); k > 0; --k) {
                finite_map s = tu::random_injection(rng, rng.below(n + 1), n);
                std::vector<char> hit(n, 0);
                for (state_index y : s.table)
                    hit[y] = 1;
                for (std::size_t y = 0; y < n; ++y)
                    expected[y] &= hit[y];
                subs.push_back(std::move(s));
            }
            finite_map p = intersect_injections(target, subs);
            std::vector<state_index> members;
            for (std::size_t y = 0; y < n; ++y)
                if (expected[y])
                    members.push_back(y);
            CHECK(p.table == members);
        }
    }
}

TEST_CASE("partitions: canonical form, refinement, quotient maps") {
    SECTION("renumbering by first occurrence") {
        partition p = make_partition(make_set(4), {7, 2, 7, 5});
        CHECK(p.block_count == 3);
        CHECK(p.block_of == std::vector<state_index>{0, 1, 0, 2});
        CHECK(blocks(p) == std::vector<std::vector<state_index>>{{0, 2}, {1}, {3}});
    }

    SECTION("quotient map takes labels from least members") {
        partition p = make_partition(make_set({"w", "x", "y", "z"}), {0, 1, 0, 1});
        finite_map q = quotient_map(p);
        REQUIRE(q.codomain.labels.has_value());
        CHECK(*q.codomain.labels == std::vector<std::string>{"w", "x"});
    }

    SECTION("refines is containment of blocks") {
        finite_set carrier = make_set(4);
        partition fine = make_partition(carrier, {0, 1, 2, 2});
        partition coarse = make_partition(carrier, {0, 0, 1, 1});
        CHECK(refines(fine, coarse));
        CHECK_FALSE(refines(coarse, fine));
        CHECK(refines(discrete_partition(carrier), coarse));
        CHECK(refines(coarse, single_block_partition(carrier)));
    }
}

TEST_CASE("join of partitions") {
    finite_set carrier = make_set(3);

    SECTION("join with only the discrete partition is discrete") {
        partition d = discrete_partition(carrier);
        CHECK(join_partitions(carrier, {d}) == d);
    }

    SECTION("{{0,1},{2}} joined with {{0},{1,2}} is everything") {
        partition p = make_partition(carrier, {0, 0, 1});
        partition q = make_partition(carrier, {0, 1, 1});
        CHECK(join_partitions(carrier, {p, q}) == single_block_partition(carrier));
    }

    SECTION("empty family yields the discrete partition") {
        CHECK(join_partitions(make_set(2), {}) == discrete_partition(make_set(2)));
    }

    SECTION("carrier mismatch is rejected") {
        CHECK_THROWS_AS(join_partitions(carrier, {discrete_partition(make_set(2))}),
                        mixed_carriers);
    }

    SECTION("join is the least upper bound, by brute force") {
        tu::rng rng(606);
        for (int i = 0; i < 60; ++i) {
            std::size_t n = 1 + rng.below(5);
            finite_set c = make_set(n);
            std::vector<partition> all = coalgmin::detail::all_partitions(c);
            std::vector<partition> inputs;
            for (std::size_t k = 1 + rng.below(3); k > 0; --k)
                inputs.push_back(all[rng.below(all.size())]);
            partition j = join_partitions(c, inputs);
            for (const partition& p : inputs)
                CHECK(refines(p, j));
            for (const partition& q : all) {
                bool upper_bound = true;
                for (const partition& p : inputs)
                    upper_bound = upper_bound && refines(p, q);
                if (upper_bound)
                    CHECK(refines(j, q));
            }
        }
    }
}
