// End-to-end acceptance gate. Each numbered check prints exactly one
//   [PASS|FAIL] <n>. <name> (<measured> ms, limit <limit> ms)
// line; the process exits 1 if any check fails its content or its time
// budget. Randomized checks run on fixed seeds and name the failing seed.

#include <coalgmin/cli.hpp>
#include <coalgmin/coalgebra.hpp>
#include <coalgmin/json_io.hpp>
#include <coalgmin/observability.hpp>
#include <coalgmin/oracles.hpp>
#include <coalgmin/pipeline.hpp>
#include <coalgmin/reachability.hpp>
#include <coalgmin/unravelling.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace coalgmin;

namespace {

std::string fixture_path(const std::string& name) {
    return std::string(COALGMIN_FIXTURE_DIR) + "/" + name;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw validation_error("cannot open \"" + path + "\"");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

document load_fixture(const std::string& name) {
    return parse_document(read_file(fixture_path(name)));
}

functor_spec dfa2() { return dfa_functor{{"a", "b"}}; }
functor_spec pows() { return powerset_functor{}; }
functor_spec lab2() { return labelled_functor{{"a", "b"}}; }
functor_spec natm() { return monoid_functor{weight_monoid::nat}; }
functor_spec intm() { return monoid_functor{weight_monoid::integer}; }
functor_spec ratm() { return monoid_functor{weight_monoid::rational_}; }

std::vector<functor_spec> all_specs() { return {dfa2(), pows(), lab2(), natm(), intm(), ratm()}; }

/// The four functors whose quotients preserve reachability (no weight
/// cancellation).
std::vector<functor_spec> cancellation_free_specs() { return {dfa2(), pows(), lab2(), natm()}; }

std::string describe(const functor_spec& spec, std::uint64_t seed) {
    return std::string(kind_name(spec)) + " instance, seed " + std::to_string(seed);
}

/// Independent classical DFA minimization on raw tables: breadth-first
/// reachability from state 0, then Moore refinement of accept/reject over
/// the reachable states. Shares nothing with the library's machinery.
std::size_t classical_minimal_dfa_size(const coalgebra& c) {
    const std::size_t n = c.states.size;
    std::vector<char> accept(n);
    std::vector<std::vector<std::size_t>> next(n);
    for (std::size_t x = 0; x < n; ++x) {
        const auto& cell = std::get<dfa_cell>(c.structure[x]);
        accept[x] = cell.accept ? 1 : 0;
        next[x].assign(cell.next.begin(), cell.next.end());
    }

    std::vector<char> seen(n, 0);
    std::vector<std::size_t> reached{0};
    seen[0] = 1;
    for (std::size_t i = 0; i < reached.size(); ++i)
        for (std::size_t y : next[reached[i]])
            if (!seen[y]) {
                seen[y] = 1;
                reached.push_back(y);
            }

    std::vector<std::size_t> cls(n, 0);
    for (std::size_t x : reached)
        cls[x] = accept[x];
    std::size_t classes = 0;
    {
        std::set<std::size_t> distinct;
        for (std::size_t x : reached)
            distinct.insert(cls[x]);
        classes = distinct.size();
    }
    for (;;) {
        std::map<std::vector<std::size_t>, std::size_t> ids;
        std::vector<std::size_t> refined(n, 0);
        for (std::size_t x : reached) {
            std::vector<std::size_t> signature{cls[x]};
            for (std::size_t y : next[x])
                signature.push_back(cls[y]);
            refined[x] = ids.emplace(signature, ids.size()).first->second;
        }
        if (ids.size() == classes)
            return classes;
        classes = ids.size();
        cls = std::move(refined);
    }
}

/// Quotient of a pointed coalgebra by a congruence, built from the block
/// representatives.
pointed_coalgebra quotient_by(const pointed_coalgebra& c, const partition& p) {
    finite_map q = quotient_map(p);
    std::vector<functor_value> structure;
    for (const auto& block : blocks(p))
        structure.push_back(apply_map(c.base.spec, q, c.base.structure[block.front()]));
    return pointed_coalgebra(coalgebra(c.base.spec, q.codomain, std::move(structure)),
                             q.table[c.point]);
}

/// Count, by exhaustion over every table, the diagonals d with d . e = f
/// and m . d = g; when the count is one, also insist d is a homomorphism.
bool diagonal_is_unique(const finite_map& e, const finite_map& m, const finite_map& f,
                        const finite_map& g, const coalgebra& mid_src, const coalgebra& mid_tgt,
                        std::string& why) {
    std::size_t found = 0;
    bool found_is_hom = false;
    detail::for_each_table(e.codomain.size, f.codomain.size,
                           [&](const std::vector<state_index>& table) {
                               finite_map d{e.codomain, f.codomain, table};
                               if (compose(d, e) == f && compose(m, d) == g) {
                                   ++found;
                                   found_is_hom = is_homomorphism(d, mid_src, mid_tgt);
                               }
                           });
    if (found != 1) {
        why = "expected exactly one diagonal, found " + std::to_string(found);
        return false;
    }
    if (!found_is_hom) {
        why = "the unique diagonal is not a homomorphism";
        return false;
    }
    return true;
}

struct gate {
    bool all_passed = true;

    template <typename Body>
    void criterion(int number, const std::string& name, double limit_ms, Body&& body) {
        std::string why;
        bool ok = false;
        auto start = std::chrono::steady_clock::now();
        try {
            ok = body(why);
        } catch (const std::exception& e) {
            ok = false;
            why = e.what();
        }
        auto stop = std::chrono::steady_clock::now();
        double ms = std::chrono::duration<double, std::milli>(stop - start).count();

        bool timely = ms < limit_ms;
        bool pass = ok && timely;
        all_passed = all_passed && pass;

        std::cout << (pass ? "[PASS] " : "[FAIL] ") << number << ". " << name << " ("
                  << std::fixed << std::setprecision(1) << ms << " ms, limit "
                  << std::setprecision(0) << limit_ms << " ms)";
        if (!ok && !why.empty())
            std::cout << " -- " << why;
        else if (ok && !timely)
            std::cout << " -- over the time budget";
        std::cout << "\n";
    }
};

} // namespace

int main() {
    gate g;

    g.criterion(1, "powerset fixture minimizes to the 2-state quotient, byte-exact", 10.0,
                [&](std::string& why) {
                    document doc = load_fixture("fig4a.json");
                    quotient_result r = simple_quotient(doc.base);
                    if (r.quotient.states.size != 2 ||
                        r.quotient.structure[0] != functor_value(make_subset({0, 1})) ||
                        r.quotient.structure[1] != functor_value(make_subset({}))) {
                        why = "wrong quotient structure";
                        return false;
                    }
                    if (r.projection.map().table != std::vector<state_index>{0, 0, 1}) {
                        why = "wrong projection";
                        return false;
                    }
                    std::ostringstream out, err;
                    if (cli::run({"simple", fixture_path("fig4a.json")}, out, err) != 0) {
                        why = "cli exit code nonzero";
                        return false;
                    }
                    if (out.str() != read_file(fixture_path("golden/fig4a-simple.json"))) {
                        why = "output differs from the golden document";
                        return false;
                    }
                    return true;
                });

    g.criterion(2, "rational fixture minimizes with exact weight arithmetic", 10.0,
                [&](std::string& why) {
                    document doc = load_fixture("fig4b.json");
                    quotient_result r = simple_quotient(doc.base);
                    if (r.quotient.states.size != 2 ||
                        r.quotient.structure[0] != functor_value(make_weights({{1, -3}})) ||
                        r.quotient.structure[1] != functor_value(make_weights({{1, 5}}))) {
                        why = "wrong quotient structure";
                        return false;
                    }
                    if (r.projection.map().table != std::vector<state_index>{0, 1, 1}) {
                        why = "wrong projection";
                        return false;
                    }
                    return true;
                });

    g.criterion(3, "weight cancellation strands a state in the quotient image", 10.0,
                [&](std::string& why) {
                    cancellation_report report = demonstrate_cancellation_counterexample();
                    if (!report.domain_reachable)
                        why = "domain should be reachable";
                    else if (!report.hom_verified)
                        why = "quotient map should be a surjective pointed homomorphism";
                    else if (report.codomain_reachable)
                        why = "codomain should not be reachable";
                    return why.empty();
                });

    g.criterion(4, "minimization orders agree for 2000 cancellation-free instances", 30'000.0,
                [&](std::string& why) {
                    detail::rng64 r(41);
                    for (const functor_spec& spec : cancellation_free_specs())
                        for (int iter = 0; iter < 500; ++iter) {
                            std::uint64_t seed = r.next();
                            pointed_coalgebra c =
                                random_coalgebra(spec, 1 + r.below(6), seed, rational(1, 2));
                            if (!orders_agree(c)) {
                                why = "orders disagree on " + describe(spec, seed);
                                return false;
                            }
                        }
                    if (orders_agree(load_fixture("cancel4.json").pointed())) {
                        why = "orders unexpectedly agree on the 4-state cancellation instance";
                        return false;
                    }
                    return true;
                });

    g.criterion(5, "behavioural equivalence matches the congruence oracle (1200 instances)",
                60'000.0, [&](std::string& why) {
                    detail::rng64 r(51);
                    for (const functor_spec& spec : all_specs())
                        for (int iter = 0; iter < 200; ++iter) {
                            std::uint64_t seed = r.next();
                            pointed_coalgebra c =
                                random_coalgebra(spec, 1 + r.below(5), seed, rational(1, 2));
                            if (behavioural_equivalence(c.base) != congruence_oracle(c.base)) {
                                why = "partitions differ on " + describe(spec, seed);
                                return false;
                            }
                        }
                    return true;
                });

    g.criterion(6, "reachable part matches the subset-enumeration oracle (1200 instances)",
                30'000.0, [&](std::string& why) {
                    detail::rng64 r(61);
                    for (const functor_spec& spec : all_specs())
                        for (int iter = 0; iter < 200; ++iter) {
                            std::uint64_t seed = r.next();
                            pointed_coalgebra c =
                                random_coalgebra(spec, 1 + r.below(8), seed, rational(1, 2));
                            std::vector<state_index> members =
                                reachable_part(c).inclusion.map().table;
                            std::sort(members.begin(), members.end());
                            if (members != reachable_part_oracle(c)) {
                                why = "carriers differ on " + describe(spec, seed);
                                return false;
                            }
                        }
                    return true;
                });

    g.criterion(7, "dfa minimization matches the classical reference (100 automata)", 30'000.0,
                [&](std::string& why) {
                    detail::rng64 r(71);
                    for (int iter = 0; iter < 100; ++iter) {
                        std::uint64_t seed = r.next();
                        pointed_coalgebra c =
                            random_coalgebra(dfa2(), 1 + r.below(50), seed, rational(1, 2));
                        if (behavioural_equivalence(c.base) != dfa_minimize_reference(c.base)) {
                            why = "refinement differs on " + describe(dfa2(), seed);
                            return false;
                        }
                        std::size_t minimized =
                            well_pointed_minimize(c, minimize_order::simple_first)
                                .base.states.size;
                        if (minimized != classical_minimal_dfa_size(c.base)) {
                            why = "minimal state count differs on " + describe(dfa2(), seed);
                            return false;
                        }
                    }
                    return true;
                });

    g.criterion(8, "factorization lemma suite", 60'000.0, [&](std::string& why) {
        detail::rng64 r(81);

        // (a) Unique diagonal fill-in: surjective top edge, injective
        // bottom edge, every candidate diagonal table exhausted.
        std::size_t squares = 0;
        for (const functor_spec& spec : all_specs())
            for (int iter = 0; iter < 20; ++iter) {
                std::uint64_t seed = r.next();
                pointed_coalgebra base = random_coalgebra(spec, 1 + r.below(2), seed,
                                                          rational(1, 2));
                planted_cover cover = random_cover(base, r.next(), 2);
                planted_extension ext = extend_with_junk(base, 1 + r.below(2), r.next(),
                                                         rational(1, 2));
                if (!diagonal_is_unique(cover.projection, ext.inclusion, cover.projection,
                                        ext.inclusion, base.base, base.base, why)) {
                    why += " (planted square, " + describe(spec, seed) + ")";
                    return false;
                }
                ++squares;
            }
        // Independently drawn squares, whenever the four edges commute.
        for (const functor_spec& spec : all_specs())
            for (int iter = 0; iter < 10; ++iter) {
                std::uint64_t seed = r.next();
                coalgebra a = random_coalgebra(spec, 1 + r.below(3), seed, rational(1, 2)).base;
                coalgebra b = random_coalgebra(spec, 1 + r.below(3), r.next(), rational(1, 2)).base;
                coalgebra cc = random_coalgebra(spec, 1 + r.below(3), r.next(), rational(1, 2)).base;
                coalgebra d = random_coalgebra(spec, 1 + r.below(3), r.next(), rational(1, 2)).base;
                std::vector<finite_map> tops, bottoms;
                for (const finite_map& e : enumerate_homomorphisms(a, b))
                    if (is_surjective(e))
                        tops.push_back(e);
                for (const finite_map& m : enumerate_homomorphisms(cc, d))
                    if (is_injective(m))
                        bottoms.push_back(m);
                if (tops.empty() || bottoms.empty())
                    continue;
                std::vector<finite_map> lefts = enumerate_homomorphisms(a, cc);
                std::vector<finite_map> rights = enumerate_homomorphisms(b, d);
                for (const finite_map& e : tops)
                    for (const finite_map& m : bottoms)
                        for (const finite_map& f : lefts)
                            for (const finite_map& ge : rights) {
                                if (compose(ge, e) != compose(m, f))
                                    continue;
                                if (!diagonal_is_unique(e, m, f, ge, b, cc, why)) {
                                    why += " (drawn square, " + describe(spec, seed) + ")";
                                    return false;
                                }
                                ++squares;
                            }
            }
        if (squares < 120) {
            why = "too few commuting squares exercised: " + std::to_string(squares);
            return false;
        }

        // (b) At most one homomorphism into a simple coalgebra, checked by
        // exhausting every candidate table.
        std::size_t into_simple = 0;
        for (const functor_spec& spec : all_specs())
            for (int iter = 0; iter < 20; ++iter) {
                std::uint64_t seed = r.next();
                coalgebra simple =
                    simple_quotient(random_coalgebra(spec, 1 + r.below(4), seed, rational(1, 2))
                                        .base)
                        .quotient;
                pointed_coalgebra src =
                    iter % 2 == 0
                        ? random_coalgebra(spec, 1 + r.below(4), r.next(), rational(1, 2))
                        : random_cover(pointed_coalgebra(simple, 0), r.next(), 2).source;
                std::size_t count = enumerate_homomorphisms(src.base, simple).size();
                if (count > 1) {
                    why = std::to_string(count) + " maps into a simple coalgebra (" +
                          describe(spec, seed) + ")";
                    return false;
                }
                into_simple += count;
            }
        if (into_simple < 30) {
            why = "too few maps into simple coalgebras exercised";
            return false;
        }

        // (c) Maps out of a simple coalgebra are injective; pointed maps
        // into a reachable coalgebra are surjective.
        std::size_t out_of_simple = 0;
        for (int iter = 0; iter < 200; ++iter) {
            const functor_spec spec = all_specs()[iter % 6];
            std::uint64_t seed = r.next();
            coalgebra simple =
                simple_quotient(random_coalgebra(spec, 1 + r.below(3), seed, rational(1, 2)).base)
                    .quotient;
            planted_extension ext = extend_with_junk(pointed_coalgebra(simple, 0),
                                                     1 + r.below(2), r.next(), rational(1, 2));
            std::vector<finite_map> homs = enumerate_homomorphisms(simple, ext.larger.base);
            out_of_simple += homs.size();
            for (const finite_map& h : homs)
                if (!is_injective(h)) {
                    why = "non-injective map out of a simple coalgebra (" + describe(spec, seed) +
                          ")";
                    return false;
                }
        }
        if (out_of_simple < 200) {
            why = "too few maps out of simple coalgebras exercised";
            return false;
        }

        std::size_t into_reachable = 0;
        for (int iter = 0; iter < 200; ++iter) {
            const functor_spec spec = all_specs()[iter % 6];
            std::uint64_t seed = r.next();
            pointed_coalgebra reached =
                reachable_part(random_coalgebra(spec, 1 + r.below(3), seed, rational(1, 2))).part;
            planted_cover cover = random_cover(reached, r.next(), 2);
            std::vector<finite_map> homs =
                enumerate_pointed_homomorphisms(cover.source, reached);
            into_reachable += homs.size();
            for (const finite_map& h : homs)
                if (!is_surjective(h)) {
                    why = "non-surjective pointed map into a reachable coalgebra (" +
                          describe(spec, seed) + ")";
                    return false;
                }
        }
        if (into_reachable < 200) {
            why = "too few pointed maps into reachable coalgebras exercised";
            return false;
        }

        // (d) The reachable part receives a unique factoring of every
        // pointed map out of a reachable source, exhausting all tables.
        std::size_t factorings = 0;
        for (const functor_spec& spec : all_specs())
            for (int iter = 0; iter < 15; ++iter) {
                std::uint64_t seed = r.next();
                pointed_coalgebra big =
                    random_coalgebra(spec, 1 + r.below(3), seed, rational(1, 2));
                reachable_result reach = reachable_part(big);
                planted_cover cover = random_cover(reach.part, r.next(), 2);
                pointed_coalgebra src = reachable_part(cover.source).part;
                for (const finite_map& h : enumerate_pointed_homomorphisms(src, big)) {
                    std::size_t through = 0;
                    bool through_is_hom = false;
                    detail::for_each_table(
                        src.base.states.size, reach.part.base.states.size,
                        [&](const std::vector<state_index>& table) {
                            finite_map d{src.base.states, reach.part.base.states, table};
                            if (compose(reach.inclusion.map(), d) == h) {
                                ++through;
                                through_is_hom =
                                    is_pointed_homomorphism(d, src, reach.part);
                            }
                        });
                    if (through != 1 || !through_is_hom) {
                        why = "map does not factor uniquely through the reachable part (" +
                              describe(spec, seed) + ")";
                        return false;
                    }
                    ++factorings;
                }
            }
        if (factorings < 90) {
            why = "too few factorings through reachable parts exercised";
            return false;
        }

        // (e) Quotients of reachable coalgebras stay reachable when weights
        // cannot cancel: one randomly chosen congruence per instance.
        for (const functor_spec& spec : cancellation_free_specs())
            for (int iter = 0; iter < 50; ++iter) {
                std::uint64_t seed = r.next();
                pointed_coalgebra reached =
                    reachable_part(random_coalgebra(spec, 1 + r.below(6), seed, rational(1, 2)))
                        .part;
                std::vector<partition> congruences;
                for (partition& p : detail::all_partitions(reached.base.states))
                    if (is_congruence(reached.base, p))
                        congruences.push_back(std::move(p));
                const partition& chosen = congruences[r.below(congruences.size())];
                if (!is_reachable(quotient_by(reached, chosen))) {
                    why = "quotient lost reachability (" + describe(spec, seed) + ")";
                    return false;
                }
            }
        return true;
    });

    g.criterion(9, "tree unravelling fixtures: sibling swap and truncated loop", 10.0,
                [&](std::string& why) {
                    unravel_result siblings = unravel(load_fixture("fig6a.json").pointed(), 3);
                    if (siblings.tree.base.states.size != 3 || !siblings.complete ||
                        !siblings.onto.verified()) {
                        why = "expected a complete, verified 3-state tree";
                        return false;
                    }
                    if (count_automorphisms_over(siblings) != 2) {
                        why = "expected exactly the identity and the sibling swap";
                        return false;
                    }
                    unravel_result loop = unravel(load_fixture("fig6b.json").pointed(), 5);
                    if (loop.tree.base.states.size != 6 || loop.complete) {
                        why = "expected an incomplete 6-state chain";
                        return false;
                    }
                    for (std::size_t node = 0; node < 5; ++node)
                        if (loop.tree.base.structure[node] !=
                            functor_value(make_weights({{node + 1, 1}}))) {
                            why = "truncated loop is not a chain";
                            return false;
                        }
                    return true;
                });

    std::cout << (g.all_passed ? "acceptance: all criteria passed"
                               : "acceptance: at least one criterion failed")
              << "\n";
    return g.all_passed ? 0 : 1;
}
