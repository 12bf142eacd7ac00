#include "symplab/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace symplab;

namespace {

// Pairing of dual basis vectors e_i, e_k indexed (a1,b1,a2,b2,...), from the table of the form.
int basis_pairing(int i, int k) {
    if (i / 2 != k / 2) return 0;
    if (i % 2 == 0 && k % 2 == 1) return 1;
    if (i % 2 == 1 && k % 2 == 0) return -1;
    return 0;
}

Number bilinear_expansion(const CohomologyClass& v, const CohomologyClass& w) {
    Number total(0);
    for (std::size_t i = 0; i < v.coeffs().size(); ++i)
        for (std::size_t k = 0; k < w.coeffs().size(); ++k)
            total += v.coeffs()[i] * w.coeffs()[k] * Number(basis_pairing(int(i), int(k)));
    return total;
}

CohomologyClass random_class(std::mt19937_64& rng, int genus) {
    std::uniform_int_distribution<long> num(-20, 20), den(1, 9);
    std::vector<Number> c;
    for (int i = 0; i < 2 * genus; ++i) c.push_back(Number::rational(num(rng), den(rng)));
    return {genus, c};
}

}  // namespace

TEST_CASE("number literals parse exactly") {
    CHECK(Number::parse("1/16") == Number::rational(1, 16));
    CHECK(Number::parse("0.05") == Number::rational(1, 20));
    CHECK(Number::parse("-1.5e-3") == Number::rational(-3, 2000));
    CHECK(Number::parse("3") == Number(3));
    CHECK(Number::parse("0.05").is_exact());
    CHECK(Number::parse("2/6").str() == "1/3");
    CHECK_THROWS(Number::parse("abc"));
    CHECK_THROWS(Number::parse("1/0"));
    Number f(0.25);
    CHECK_FALSE(f.is_exact());
    CHECK((f + Number(1)).value() == 1.25);
    CHECK(Number::parse(Number(0.1).str()).value() == 0.1);
}

TEST_CASE("punctured torus membership") {
    Epsilon e(Number::parse("0.1"));
    CHECK(in_punctured_torus({0.0, 0.5}, e));
    CHECK_FALSE(in_punctured_torus({0.5, 0.5}, e));
    CHECK(in_punctured_torus({0.2, 0.2}, e));
    CHECK(in_punctured_torus({0.8, 0.5}, e));
    CHECK_FALSE(in_punctured_torus({0.21, 0.79}, e));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> shift(-5, 5);
    for (int i = 0; i < 1000; ++i) {
        double x = u(rng), y = u(rng);
        // Brute-force membership by the definition of D_eps.
        bool inner = x > 0.2 && x < 0.8 && y > 0.2 && y < 0.8;
        TorusPoint p(x, y), q(x + shift(rng), y + shift(rng));
        CHECK(in_punctured_torus(p, e) == !inner);
        CHECK(in_punctured_torus(q, e) == in_punctured_torus(p, e));
    }
}

TEST_CASE("epsilon must lie in (0, 1/4)") {
    CHECK_THROWS(Epsilon(Number(0)));
    CHECK_THROWS(Epsilon(Number::rational(1, 4)));
    CHECK_NOTHROW(Epsilon(Number::rational(1, 5)));
}

TEST_CASE("torus points reduce to the unit square") {
    TorusPoint p(-0.25, 3.5);
    CHECK(p.x() == 0.75);
    CHECK(p.y() == 0.5);
    CHECK(torus_distance(Vec2{0.99, 0.0}, Vec2{0.01, 0.0}) == doctest::Approx(0.02));
}

TEST_CASE("intersection form values") {
    CohomologyClass a1 = CohomologyClass::alpha_dual(2, 0), b1 = CohomologyClass::beta_dual(2, 0);
    CHECK(intersection_form(a1, b1) == Number(1));
    CHECK(intersection_form(b1, a1) == Number(-1));
    CohomologyClass v = CohomologyClass::alpha_dual(2, 0, 2) + CohomologyClass::beta_dual(2, 1, 3);
    CohomologyClass w = CohomologyClass::beta_dual(2, 0, 5) + CohomologyClass::alpha_dual(2, 1, -7);
    CHECK(intersection_form(v, w) == Number(31));
    CHECK(bilinear_expansion(v, w) == Number(31));
    CHECK_THROWS(intersection_form(CohomologyClass(2), CohomologyClass(3)));
}

TEST_CASE("intersection form is bilinear, antisymmetric and nondegenerate") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        int g = 2 + trial % 3;
        auto u = random_class(rng, g), v = random_class(rng, g), w = random_class(rng, g);
        Number s = Number::rational(long(trial % 7) - 3, 5);
        CHECK(intersection_form(v, w) == bilinear_expansion(v, w));
        CHECK(intersection_form(v, w) == -intersection_form(w, v));
        CHECK(intersection_form(v, v) == Number(0));
        CHECK(intersection_form(u + s * v, w) == intersection_form(u, w) + s * intersection_form(v, w));
    }
    // A class pairing to zero with every basis vector is zero: the Gram matrix has full rank.
    for (int g = 2; g <= 4; ++g) {
        for (int i = 0; i < 2 * g; ++i) {
            int nonzero = 0;
            for (int k = 0; k < 2 * g; ++k) {
                std::vector<Number> ei(2 * g, Number(0)), ek(2 * g, Number(0));
                ei[i] = 1;
                ek[k] = 1;
                if (!intersection_form({g, ei}, {g, ek}).is_zero()) ++nonzero;
            }
            CHECK(nonzero == 1);
        }
    }
}

TEST_CASE("max norm") {
    CHECK(max_norm(CohomologyClass(2)) == Number(0));
    CHECK(max_norm({2, {1, -3, 0, 0}}) == Number(3));
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        auto w = random_class(rng, 3);
        double m = 0.0;
        for (const auto& c : w.coeffs()) m = std::max(m, std::fabs(c.value()));
        CHECK(max_norm(w).value() == m);
    }
}

TEST_CASE("cohomology vector space operations are exact") {
    std::mt19937_64 rng(9);
    auto v = random_class(rng, 2), w = random_class(rng, 2);
    CHECK((v + w) - w == v);
    CHECK(Number(2) * v == v + v);
    CHECK(v.is_exact());
}

TEST_CASE("epsilon_for") {
    CHECK(epsilon_for(2, Number(1)).number() == Number::rational(1, 16));
    CHECK(epsilon_for(2, Number(16)).number() == Number::rational(1, 16));
    CHECK(epsilon_for(3, Number::parse("0.6")).number() == Number::parse("0.025"));
    for (int l = 2; l < 8; ++l) {
        for (Number area : {Number::parse("0.01"), Number::parse("0.5"), Number(1), Number(7)}) {
            Epsilon e = epsilon_for(l, area);
            CHECK(Number(8 * l) * e.number() <= min(Number(1), area));
            CHECK(Number(l) * punctured_torus_area(e) < area);
        }
    }
}

TEST_CASE("k0_bound") {
    CHECK(k0_bound(2, Number(1), Number(1)) == 16);
    CHECK(k0_bound(2, Number(0), Number(1)) == 16);
    CHECK(k0_bound(3, Number(5), Number(2)) == 72);
    CHECK(k0_bound(2, Number::parse("0.5"), Number::parse("0.25")) == 32);
}

TEST_CASE("surface model") {
    SurfaceModel s(2, Number(1));
    CHECK(s.epsilon().number() == Number::rational(1, 16));
    CHECK(s.area_per_chart() == Number::rational(7, 16));
    CHECK_THROWS(SurfaceModel(1, Number(1)));
    CHECK_THROWS(SurfaceModel(2, Epsilon(Number::rational(1, 5)), Number::rational(1, 2)));
}

TEST_CASE("curves are closed loops") {
    for (CurveKind k : {CurveKind::alpha, CurveKind::beta}) {
        Curve c{0, k};
        CHECK(torus_distance(c.point(0.0), c.point(1.0)) == 0.0);
    }
    CHECK(Curve{0, CurveKind::alpha}.point(0.3) == Vec2{0.0, 0.3});
    CHECK(Curve{0, CurveKind::beta}.point(0.3) == Vec2{0.3, 0.0});
}
