#include "symplab/quasimorphism.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace symplab;

namespace {

const FreeByAbelian kF2(2, 0);

// Independent count: overlapping substring scan on the printed word.
long scan(const std::string& hay, const std::string& needle) {
    long n = 0;
    for (std::size_t p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
    return n;
}

double scan_phi(const FreeWord& x, const FreeWord& w) {
    std::string s = free_str(x);
    if (x.empty()) s.clear();
    return static_cast<double>(scan(s, free_str(w)) - scan(s, free_str(free_inverse(w))));
}

Element el(const char* s) { return kF2.from_word(parse_free_word(s)); }

}  // namespace

TEST_CASE("free words reduce, multiply and print") {
    CHECK(free_str(parse_free_word("abBA")) == "e");
    CHECK(free_str(free_multiply(parse_free_word("abc"), parse_free_word("CBa"))) == "aa");
    FreeWord u;
    CHECK(free_str(cyclic_core(parse_free_word("abaB"), &u)) == "abaB");
    CHECK(free_str(cyclic_core(parse_free_word("baaB"), &u)) == "aa");
    CHECK(free_str(u) == "b");
    CHECK_THROWS_AS(parse_free_word("ab1"), std::invalid_argument);
    // 1 + 4 + 12 + 36 reduced words of length <= 3 in F_2.
    CHECK(all_reduced_words(2, 3).size() == 53);
}

TEST_CASE("group models satisfy the group axioms") {
    FreeByAbelian real(2, 1, FreeByAbelian::Abelian::real);
    FreeByAbelian twisted(2, 2, FreeByAbelian::Abelian::integer, true);
    Heisenberg heis;
    for (const GroupModel* g : std::initializer_list<const GroupModel*>{&kF2, &real, &twisted, &heis}) {
        CAPTURE(g->name());
        for (int i = 0; i < 1000; ++i) {
            auto rng = seed_stream(7, static_cast<std::uint64_t>(i));
            Element x = g->sample(rng, 8), y = g->sample(rng, 8), z = g->sample(rng, 8);
            CHECK(g->multiply(g->multiply(x, y), z) == g->multiply(x, g->multiply(y, z)));
            CHECK(g->multiply(x, g->invert(x)) == g->identity());
            CHECK(g->multiply(g->identity(), x) == x);
        }
    }
    // The swap really acts: conjugating a by the first Z generator gives b.
    Element t = twisted.make({}, {1, 0});
    CHECK(twisted.conjugate(t, twisted.from_word(parse_free_word("a"))) == twisted.from_word(parse_free_word("b")));
}

TEST_CASE("Brooks counting values") {
    QuasimorphismFn ab = brooks_counting(parse_free_word("ab"));
    CHECK(ab(el("abab")) == 2.0);
    CHECK(ab(kF2.identity()) == 0.0);
    CHECK(brooks_counting(parse_free_word("aa"))(el("aaaa")) == 3.0);
    CHECK(brooks_counting(parse_free_word("aa"), false)(el("aaaa")) == 2.0);
    CHECK(brooks_counting(parse_free_word("aa"), false)(el("aaab")) == 1.0);
    CHECK_THROWS_AS(brooks_counting(FreeWord{}), std::invalid_argument);
    for (const char* w : {"ab", "aab", "abAB"}) {
        QuasimorphismFn phi = brooks_counting(parse_free_word(w));
        for (int i = 0; i < 200; ++i) {
            auto rng = seed_stream(11, static_cast<std::uint64_t>(i));
            Element x = kF2.sample(rng, 30);
            CHECK(phi(x) == scan_phi(x.word, parse_free_word(w)));
            CHECK(phi(kF2.invert(x)) == -phi(x));
        }
    }
}

TEST_CASE("exact Brooks defect agrees with exhaustive enumeration up to length 6") {
    for (const char* w : {"ab", "aab", "abAB", "aaaa"}) {
        QuasimorphismFn phi = brooks_counting(parse_free_word(w));
        DefectSample ex = exhaustive_defect(phi, 2, 6);
        CAPTURE(w);
        REQUIRE(phi.known_defect.has_value());
        CHECK(ex.value == *phi.known_defect);
        CHECK(std::abs(phi(kF2.multiply(ex.x, ex.y)) - phi(ex.x) - phi(ex.y)) == ex.value);
        DefectSample sampled = estimate_defect(phi, kF2, 10000, 3, 40);
        CHECK(sampled.value <= *phi.known_defect);
    }
    // Little counting: exhaustive enumeration is only a lower bound.
    QuasimorphismFn little = brooks_counting(parse_free_word("aa"), false);
    CHECK_FALSE(little.known_defect.has_value());
    CHECK(exhaustive_defect(little, 2, 4).value > 0.0);
}

TEST_CASE("defect estimation: homomorphisms, scaling, monotonicity") {
    FreeByAbelian g(2, 1);
    CHECK(estimate_defect(exponent_sum(1), g, 2000, 5).value == 0.0);
    QuasimorphismFn phi = brooks_counting(parse_free_word("aab"));
    double base = estimate_defect(phi, kF2, 3000, 9).value;
    CHECK(estimate_defect(scaled(phi, -2.5), kF2, 3000, 9).value == doctest::Approx(2.5 * base));
    double prev = 0.0;
    for (long n : {10L, 100L, 1000L, 5000L}) {
        double v = estimate_defect(phi, kF2, n, 21).value;
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("homogenization bounds") {
    for (const char* w : {"ab", "aab", "abAB"}) {
        CAPTURE(w);
        QuasimorphismFn phi = brooks_counting(parse_free_word(w));
        QuasimorphismFn exact = brooks_homogeneous(parse_free_word(w));
        QuasimorphismFn trunc = homogenize(phi, kF2, 64);
        const double D = *phi.known_defect;
        CHECK(trunc.truncation_error == doctest::Approx(D / 64));
        for (const FreeWord& x : all_reduced_words(2, 6)) {
            Element e{x, {}};
            CHECK(std::abs(exact(e) - phi(e)) <= D);
            CHECK(std::abs(trunc(e) - exact(e)) <= D / 64 + 1e-12);
        }
        CHECK(exhaustive_defect(exact, 2, 5).value <= 2 * D);
        DefectSample dh = estimate_defect(exact, kF2, 10000, 17, 40);
        CHECK(dh.value <= 2 * D);
        for (int i = 0; i < 300; ++i) {
            auto rng = seed_stream(23, static_cast<std::uint64_t>(i));
            Element x = kF2.sample(rng, 30), y = kF2.sample(rng, 12);
            CHECK(std::abs(exact(x) - phi(x)) <= D);
            for (long m = 1; m <= 8; ++m) CHECK(exact(kF2.power(x, m)) == doctest::Approx(m * exact(x)));
            CHECK(trunc(kF2.invert(x)) == -trunc(x));
            CHECK(std::abs(trunc(kF2.conjugate(y, x)) - trunc(x)) <= 4 * D / 64 + 1e-12);
            // commuting pair: powers of a common element
            Element u = kF2.sample(rng, 6);
            Element p = kF2.power(u, 2), q = kF2.power(u, -5);
            CHECK(std::abs(trunc(kF2.multiply(p, q)) - trunc(p) - trunc(q)) <= 3 * D / 64 + 1e-12);
        }
    }
    QuasimorphismFn chi = exponent_sum(2);
    QuasimorphismFn chih = homogenize(chi, kF2, 64);
    for (int i = 0; i < 100; ++i) {
        auto rng = seed_stream(29, static_cast<std::uint64_t>(i));
        Element x = kF2.sample(rng, 20);
        CHECK(chih(x) == chi(x));
    }
}

TEST_CASE("invariance defect") {
    // Homogeneous on G = Ghat: conjugation invariant.
    QuasimorphismFn h = brooks_homogeneous(parse_free_word("aab"));
    CHECK(estimate_invariance_defect(h, whole_group(kF2), kF2, 2000, 1).value == 0.0);
    // Central subgroup of the Heisenberg group.
    Heisenberg heis;
    Subgroup center{"center", [](const Element& e) { return e.coords[0] == 0.0 && e.coords[1] == 0.0; },
                    [](std::mt19937_64& rng, int len) {
                        std::uniform_int_distribution<int> d(-len, len);
                        return Heisenberg::make(0, 0, d(rng));
                    }};
    QuasimorphismFn z{"z", [](const Element& e) { return e.coords[2]; }, 0.0, true, 0.0};
    CHECK(estimate_invariance_defect(z, center, heis, 1000, 2).value == 0.0);
    // Exponent sum of a is not invariant under the swap.
    FreeByAbelian tw(2, 1, FreeByAbelian::Abelian::integer, true);
    DefectSample s = estimate_invariance_defect(exponent_sum(1), free_factor(tw), tw, 500, 3);
    CHECK(s.value > 0.0);
    Element t = tw.make({}, {1});
    Element x = tw.from_word(parse_free_word("aab"));
    CHECK(exponent_sum(1)(tw.conjugate(t, x)) == 1.0);
    // <a> is not normal.
    Subgroup cyclic{"<a>",
                    [](const Element& e) {
                        for (int l : e.word)
                            if (std::abs(l) != 1) return false;
                        return true;
                    },
                    [](std::mt19937_64& rng, int len) {
                        std::uniform_int_distribution<int> d(-len, len);
                        return kF2.power(kF2.from_word({1}), d(rng));
                    }};
    CHECK_THROWS_AS(estimate_invariance_defect(exponent_sum(1), cyclic, kF2, 100, 4), NormalityViolation);
}

TEST_CASE("gamma_m estimate") {
    Subgroup all = whole_group(kF2);
    // Homomorphism: exactly zero.
    GammaBoundReport hom = check_gamma_bound(exponent_sum(1), kF2, all, el("ab"), el("b"), el("aB"), 6, 0.0);
    CHECK(hom.pass);
    for (const auto& r : hom.rows) CHECK(r.value == 0.0);
    // Homogenized Brooks with g_a g_b = e.
    QuasimorphismFn h = brooks_homogeneous(parse_free_word("ab"));
    GammaBoundReport r1 = check_gamma_bound(h, kF2, all, el("a"), el("b"), el("B"), 8, *h.known_defect);
    CHECK(r1.pass);
    CHECK(r1.rows.size() == 8);
    CHECK(r1.rows[0].steps.size() == 5);
    // A nontrivial gamma_m.
    GammaBoundReport r2 = check_gamma_bound(h, kF2, all, el("aab"), el("b"), el("Ab"), 8, *h.known_defect);
    CHECK(r2.pass);
    // Twisted model: g_a is the swap, g_b = (b, -1), g_a g_b = a lies in F_2.
    FreeByAbelian tw(2, 1, FreeByAbelian::Abelian::integer, true);
    QuasimorphismFn sym = brooks_combination({{1.0, parse_free_word("ab")}, {1.0, parse_free_word("ba")}}, true);
    GammaBoundReport r3 = check_gamma_bound(sym, tw, free_factor(tw), tw.from_word(parse_free_word("aab")), tw.make({}, {1}),
                                   tw.make(parse_free_word("b"), {-1}), 8, *sym.known_defect);
    CHECK(r3.pass);
    // Truncated homogenization needs its tolerance.
    QuasimorphismFn tr = homogenize(brooks_counting(parse_free_word("ab")), kF2, 64);
    GammaBoundReport r4 =
        check_gamma_bound(tr, kF2, all, el("aab"), el("b"), el("Ab"), 4, *tr.known_defect, tr.truncation_error);
    CHECK(r4.pass);
    // Membership violations are reported.
    CHECK_THROWS_AS(check_gamma_bound(sym, tw, free_factor(tw), tw.make({}, {1}), tw.make({}, {1}), tw.make({}, {-1}), 2,
                                 *sym.known_defect),
                    std::invalid_argument);
}
