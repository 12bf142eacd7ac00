#include "symplab/fields.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace symplab;

namespace {

const Epsilon kEps(Number::rational(1, 16));

// Composite Simpson rule on a uniform grid, independent of the library quadrature.
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    double h = (b - a) / n, s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("bump profile examples") {
    BumpProfile rho = make_bump(0.06, 0.02, kEps);
    CHECK(rho.value(0.0) == 1.0);
    CHECK(rho.value(0.02) == 1.0);
    CHECK(rho.value(-0.04) == 0.0);
    CHECK(rho.value(0.04) == 0.0);
    CHECK(rho.value(-0.03) + rho.value(-0.03 + 0.06) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS(make_bump(0.07, 0.02, kEps));
    CHECK_THROWS(make_bump(0.03, 0.04, kEps));
    CHECK_THROWS(make_bump(0.03, 0.0, kEps));
}

TEST_CASE("bump profile conditions on a 1000-point grid") {
    for (auto [q, r] : {std::pair{0.06, 0.02}, {0.05, 0.05}, {-0.04, 0.01}, {-0.0625, 0.03}, {0.001, 0.0005}}) {
        BumpProfile rho(q, r);
        double sgn = q > 0 ? 1.0 : -1.0;
        double qa = std::abs(q);
        for (int i = 0; i <= 1000; ++i) {
            double x = -0.1 + 0.2 * i / 1000.0;
            if (std::abs(x) >= 0.5 * (qa + r)) CHECK(rho.value(x) == 0.0);
            if (std::abs(x) <= 0.5 * (qa - r)) CHECK(std::abs(rho.value(x) - sgn) <= 1e-10);
            double t = -0.5 * (qa + r) + 0.5 * r * (i + 0.5) / 500.0;  // sweeps I_{-|q|,r}
            double xi = q > 0 ? t : -t;  // sweeps I_{-q,r}
            if (i < 1000) CHECK(std::abs(rho.value(xi) + rho.value(xi + q) - sgn) <= 1e-10);
            double h = 1e-4 * r;
            double fd = (rho.value(x + h) - rho.value(x - h)) / (2 * h);
            CHECK(std::abs(fd - rho.derivative(x)) <= 1e-6 / r);
            // The third derivative jumps at the breakpoints; skip their h-neighbourhoods.
            bool near_break = false;
            for (double b : rho.breakpoints()) near_break |= std::abs(x - b) < 10 * h;
            double fd2 = (rho.derivative(x + h) - rho.derivative(x - h)) / (2 * h);
            if (!near_break) CHECK(std::abs(fd2 - rho.second_derivative(x)) <= 1e-5 / (r * r));
        }
    }
}

TEST_CASE("H_{q,r} point values") {
    for (double q : {0.05, -0.04}) {
        ScalarField H = make_H(q, 0.02, false, kEps);
        CHECK(H.value({0.0, 0.5}) == -(q > 0 ? 1.0 : -1.0));
        CHECK(H.value({0.5, 0.3}) == 0.0);
        CHECK(H.value({1.0, 0.3}) == H.value({0.0, 0.3}));
        ScalarField Hp = make_H(q, 0.02, true, kEps);
        CHECK(Hp.value({0.5, 0.0}) == -(q > 0 ? 1.0 : -1.0));
        CHECK(Hp.value({0.3, 0.5}) == 0.0);
        CHECK(Hp.value({0.25, -0.011}) == H.value({-0.011, 0.25}));
    }
    ScalarField H0 = make_H(0.0, 0.01, false, kEps), He = make_H(1.0 / 16, 1.0 / 16, false, kEps);
    for (double x = -0.1; x < 0.1; x += 0.003) CHECK(H0.value({x, 0.2}) == He.value({x, 0.2}));
    CHECK_THROWS(make_H(0.07, 0.02, false, kEps));
}

TEST_CASE("integral of H over the punctured torus is -q") {
    ScalarField H = make_H(0.05, 0.02, false, kEps);
    auto res = integrate_over_punctured_torus(H, kEps);
    CHECK(std::abs(res.value + 0.05) <= 1e-8);
    // Oracle: for |x| <= 2 eps the whole vertical circle lies in D_eps, so the
    // integral collapses to -int rho dx.
    BumpProfile rho(0.05, 0.02);
    double one_d = simpson([&](double x) { return rho.value(x); }, -0.0625, 0.0625, 20000);
    CHECK(std::abs(res.value + one_d) <= 1e-9);
    for (double q : {0.03, -0.06}) {
        auto hp = integrate_over_punctured_torus(make_H(q, 0.01, true, kEps), kEps);
        CHECK(std::abs(hp.value + q) <= 1e-8);
    }
}

TEST_CASE("G^c strip, inner-square and equivariance conditions") {
    double c = 0.05;
    ScalarField G = make_G(c, kEps);
    double e = kEps.value();
    for (double y = 0.0; y <= e; y += e / 16) CHECK(std::abs(G.value({0.0, y}) + c * y) <= 1e-15);
    CHECK(G.value({0.5, 0.5}) == doctest::Approx(-c / 2).epsilon(1e-15));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0), strip(-1.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        double x = u(rng) * 3, y = u(rng) * 3;
        // Strip x in [-eps,eps] + Z and strip y in [-eps,eps] + Z.
        double xs = std::round(x) + strip(rng) * e, ys = std::round(y) + strip(rng) * e;
        CHECK(std::abs(G.value({xs, y}) + c * y) <= 1e-14);
        CHECK(std::abs(G.value({x, ys}) + c * ys) <= 1e-14);
        // Near the inner square: within [2eps, 1-2eps] up to integer shifts.
        double xi = std::floor(x) + 2 * e + (1 - 4 * e) * (0.5 + 0.5 * u(rng));
        double yi = 2 * e + (1 - 4 * e) * (0.5 + 0.5 * u(rng));
        CHECK(std::abs(G.value({xi, yi}) + c / 2) <= 1e-15);
    }
    for (int i = 0; i < 100; ++i) {
        // Boundary-adjacent: near y in Z and near the band.
        double x = u(rng), y = std::round(u(rng)) + 1e-3 * u(rng);
        CHECK(std::abs(G.value({x, y + 1}) - G.value({x, y}) + c) <= 1e-14);
        double yb = 1.7 * e + 0.3 * e * u(rng);
        CHECK(std::abs(G.value({x, yb + 1}) - G.value({x, yb}) + c) <= 1e-14);
        CHECK(std::abs(G.value({x + 1, yb}) - G.value({x, yb})) <= 1e-14);
    }
}

TEST_CASE("closed-form derivatives of G agree with finite differences") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (bool primed : {false, true}) {
        ScalarField G = primed ? make_G_prime(-0.04, kEps) : make_G(0.05, kEps);
        for (int i = 0; i < 2000; ++i) {
            Vec2 p{u(rng), u(rng)};
            double h = 1e-6;
            Vec2 g = G.gradient(p);
            double gx = (G.value({p.x + h, p.y}) - G.value({p.x - h, p.y})) / (2 * h);
            double gy = (G.value({p.x, p.y + h}) - G.value({p.x, p.y - h})) / (2 * h);
            CHECK(std::abs(g.x - gx) <= 1e-6);
            CHECK(std::abs(g.y - gy) <= 1e-6);
            Mat2 H = G.hessian(p);
            Vec2 dgx = (1 / (2 * h)) * (G.gradient({p.x + h, p.y}) - G.gradient({p.x - h, p.y}));
            Vec2 dgy = (1 / (2 * h)) * (G.gradient({p.x, p.y + h}) - G.gradient({p.x, p.y - h}));
            CHECK(std::abs(H.a - dgx.x) <= 1e-3);
            CHECK(std::abs(H.c - dgx.y) <= 1e-3);
            CHECK(std::abs(H.b - dgy.x) <= 1e-3);
            CHECK(std::abs(H.d - dgy.y) <= 1e-3);
        }
    }
}

TEST_CASE("Hamiltonian vector fields") {
    ScalarField H = make_H(0.05, 0.02, false, kEps);
    BumpProfile rho(0.05, 0.02);
    VectorField X = hamiltonian_field(H);
    ScalarField Hfd = H;
    Hfd.gradient = nullptr;
    Hfd.hessian = nullptr;
    VectorField Xfd = hamiltonian_field(Hfd);
    for (double x = -0.06; x < 0.06; x += 0.0007) {
        Vec2 v = X.value({x, 0.3});
        CHECK(v.x == 0.0);
        CHECK(v.y == -rho.derivative(x));
        CHECK(std::abs(Xfd.value({x, 0.3}).y - v.y) <= 1e-4);
    }
    ScalarField constant{"const", [](Vec2) { return 2.5; }, {}, {}, {}, {}};
    VectorField Z = hamiltonian_field(constant);
    CHECK(Z.value({0.3, 0.7}).x == 0.0);
    CHECK(Z.value({0.3, 0.7}).y == 0.0);
}

TEST_CASE("Y_c and Y'_d on strips, divergence and support") {
    double c = 0.05, d = -0.03, e = kEps.value();
    VectorField Y = field_Y(c, kEps), Yp = field_Y_prime(d, kEps);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0), s(-1.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        Vec2 a{s(rng) * e, u(rng)}, b{u(rng), s(rng) * e};
        for (Vec2 p : {a, b}) {
            Vec2 v = Y.value(p), w = Yp.value(p);
            CHECK(std::abs(v.x - c) <= 1e-15);
            CHECK(std::abs(v.y) <= 1e-15);
            CHECK(std::abs(w.x) <= 1e-15);
            CHECK(std::abs(w.y + d) <= 1e-15);
        }
    }
    for (int i = 0; i <= 100; ++i)
        for (int j = 0; j <= 100; ++j) {
            Vec2 p{i / 100.0, j / 100.0};
            CHECK(std::abs(divergence_fd(Y, p)) < 1e-6);
            CHECK(std::abs(divergence_fd(Yp, p)) < 1e-6);
            CHECK(Y.jacobian(p).trace() == doctest::Approx(0.0));
            if (!in_punctured_torus(TorusPoint(p.x, p.y), kEps)) {
                CHECK(std::abs(Y.value(p).x) <= 1e-12);
                CHECK(std::abs(Y.value(p).y) <= 1e-12);
                CHECK(std::abs(Yp.value(p).x) <= 1e-12);
                CHECK(std::abs(Yp.value(p).y) <= 1e-12);
            }
        }
}

TEST_CASE("direct band fields match the generic Hamiltonian fields") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (bool primed : {false, true}) {
        double c = primed ? -0.03 : 0.05;
        VectorField generic = primed ? field_Y_prime(c, kEps) : field_Y(c, kEps);
        BandField direct{c, BandStep(kEps), primed};
        for (int i = 0; i < 2000; ++i) {
            Vec2 p{u(rng), u(rng)};
            Vec2 a = generic.value(p), b = direct.value(p);
            CHECK(a.x == b.x);
            CHECK(a.y == b.y);
            Mat2 ja = generic.jacobian(p), jb = direct.jacobian(p);
            CHECK(ja.a == jb.a);
            CHECK(ja.b == jb.b);
            CHECK(ja.c == jb.c);
            CHECK(ja.d == jb.d);
        }
    }
}
