#include "symplab/maps.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace symplab;

namespace {

const SurfaceModel kModel(2, Number(1));
const Epsilon& kEps = kModel.epsilon();
const Quadruple kQ{Number(1), Number(1), Number::parse("0.05"), Number::parse("0.03")};
const Quadruple kQ2{Number::parse("0.7"), Number::parse("-1.3"), Number::parse("-0.04"), Number::parse("0.06")};

// Classical RK4 with step doubling: refine until two resolutions agree.
Vec2 rk4_flow(const VectorField& X, Vec2 p, double t, double tol) {
    auto run = [&](int n) {
        Vec2 q = p;
        double h = t / n;
        for (int i = 0; i < n; ++i) {
            Vec2 k1 = X.value(q), k2 = X.value(q + 0.5 * h * k1), k3 = X.value(q + 0.5 * h * k2),
                 k4 = X.value(q + h * k3);
            q = q + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return q;
    };
    int n = 64;
    Vec2 prev = run(n);
    while (n < (1 << 16)) {
        n *= 2;
        Vec2 cur = run(n);
        if (std::hypot(cur.x - prev.x, cur.y - prev.y) < tol) return cur;
        prev = cur;
    }
    return prev;
}

std::vector<Word> corpus_generators() {
    std::vector<Word> out;
    for (const auto& q : {kQ, kQ2}) {
        out.push_back(sigma(0, q, kEps));
        out.push_back(sigma_prime(0, q, kEps));
        out.push_back(tau(0, q, kEps));
        out.push_back(tau_prime(0, q, kEps));
        out.push_back(ham(0, q, kEps));
        out.push_back(ham_prime(0, q, kEps));
    }
    return out;
}

SurfacePoint random_point(std::mt19937_64& rng, int chart = 0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {chart, {u(rng), u(rng)}};
}

}  // namespace

TEST_CASE("quadruple delta") {
    CHECK(kQ.delta() == Number::parse("0.03"));
    CHECK(Quadruple{1, 1, Number::parse("0.05"), 0}.delta() == Number::parse("0.05"));
    CHECK(Quadruple{1, 1, 0, Number::parse("-0.02")}.delta() == Number::parse("0.02"));
    CHECK(Quadruple{1, 1, 0, 0}.delta() == Number(0));
}

TEST_CASE("generator construction enforces |c|,|d| <= eps") {
    CHECK_THROWS(Generator(0, GenKind::sigma, {1, 1, Number::parse("0.07"), 0}, kEps));
    CHECK_THROWS(Generator(0, GenKind::tau, {1, 1, 0, Number::parse("-0.1")}, kEps));
    CHECK_NOTHROW(Generator(0, GenKind::tau, {1, 1, Number::rational(1, 16), 0}, kEps));
}

TEST_CASE("zero time and the empty word act as the identity") {
    MapEvaluator ev;
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        SurfacePoint p = random_point(rng);
        CHECK(ev.eval(Word(), p).p == p.p);
        for (const Word& w : corpus_generators()) CHECK(ev.apply(w.letters()[0].gen, 0.0, p.p) == p.p);
    }
}

TEST_CASE("sigma shear: off-strip identity and agreement with integrated field") {
    MapEvaluator ev;
    Generator s(0, GenKind::sigma, kQ, kEps);
    Interval strip = s.strip();
    CHECK(strip.lo == doctest::Approx(-0.04));
    CHECK(strip.hi == doctest::Approx(-0.01));
    CHECK(ev.apply(s, 1.0, {0.02, 0.3}) == Vec2{0.02, 0.3});
    CHECK(ev.apply(s, 1.0, {0.5, 0.3}) == Vec2{0.5, 0.3});
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0), x(-0.05, 0.0);
    double worst = 0.0;
    for (const Generator& g : {s, Generator(0, GenKind::sigma_prime, kQ2, kEps), Generator(0, GenKind::ham, kQ2, kEps)}) {
        VectorField X = generator_field(g);
        for (int i = 0; i < 1000; ++i) {
            Vec2 p = g.acts_horizontally() ? Vec2{u(rng), -x(rng)} : Vec2{x(rng), u(rng)};
            Vec2 a = ev.apply(g, 1.0, p), b = rk4_flow(X, p, 1.0, 1e-12);
            worst = std::max(worst, std::hypot(a.x - b.x, a.y - b.y));
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("tau: identity for c = 0, translation on the strips") {
    MapEvaluator ev;
    Generator t0(0, GenKind::tau, {1, 1, 0, Number::parse("0.03")}, kEps);
    CHECK(ev.apply(t0, 1.0, {0.4, 0.4}) == Vec2{0.4, 0.4});
    Generator t(0, GenKind::tau, kQ, kEps);
    Vec2 q = ev.apply(t, 1.0, {0.0, 0.3});
    CHECK(q.x == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(q.y == 0.3);
    Generator tp(0, GenKind::tau_prime, kQ, kEps);
    Vec2 r = ev.apply(tp, 1.0, {0.3, 0.0});
    CHECK(r.x == 0.3);
    CHECK(r.y == doctest::Approx(-0.03).epsilon(1e-15));
    // Horizontal strip: the whole orbit is a translation.
    Vec2 s = ev.apply(t, 1.0, {0.5, 0.01});
    CHECK(s.x == doctest::Approx(0.55).epsilon(1e-15));
}

TEST_CASE("tau in the band agrees with an independent RK4 integration") {
    MapEvaluator ev;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (const Quadruple& quad : {kQ, kQ2}) {
        for (GenKind k : {GenKind::tau, GenKind::tau_prime}) {
            Generator g(0, k, quad, kEps);
            VectorField X = generator_field(g);
            for (int i = 0; i < 150; ++i) {
                Vec2 p{u(rng), u(rng)};
                Vec2 a = ev.apply(g, 1.0, p), b = rk4_flow(X, p, 1.0, 1e-11);
                worst = std::max(worst, torus_distance(a, b));
            }
        }
    }
    // The midpoint rule is second order with step 1e-3.
    CHECK(worst < 1e-4);
    MESSAGE("midpoint vs RK4 max distance " << worst);
}

TEST_CASE("inverse letters undo the flow") {
    MapEvaluator ev;
    std::mt19937_64 rng(4);
    for (const Word& w : corpus_generators()) {
        Word wi = w.inverse();
        for (int i = 0; i < 300; ++i) {
            SurfacePoint p = random_point(rng);
            CHECK(torus_distance(ev.eval(wi, ev.eval(w, p)).p, p.p) < 1e-12);
        }
    }
}

TEST_CASE("powers equal repeated composition") {
    MapEvaluator ev;
    std::mt19937_64 rng(5);
    for (const Word& w : corpus_generators()) {
        Word p3 = Word(w.letters()[0].gen, 3);
        for (int i = 0; i < 100; ++i) {
            SurfacePoint p = random_point(rng);
            SurfacePoint a = ev.eval(p3, p), b = ev.eval(w, ev.eval(w, ev.eval(w, p)));
            // Numeric flows accumulate roundoff over 3000 midpoint steps.
            double tol = w.letters()[0].gen.is_shear() ? 1e-13 : 1e-10;
            CHECK(torus_distance(a.p, b.p) < tol);
        }
    }
}

TEST_CASE("word algebra") {
    Word s = sigma(0, kQ, kEps), t = tau(0, kQ, kEps), tp = tau_prime(1, kQ2, kEps);
    Word w = s * t * tp.power(2) * s.inverse();
    CHECK(commutator(w, w).empty());
    CHECK(invert(invert(w)) == w);
    CHECK((w * w.inverse()).empty());
    CHECK(s.power(3) * s.power(-3) == Word());
    CHECK((s * s).letters().size() == 1);
    CHECK((s * s).letters()[0].exponent == 2);
    CHECK(compose(w, Word()) == w);
    MapEvaluator ev;
    Word c = commutator(s * tp, t);
    std::mt19937_64 rng(6);
    for (int i = 0; i < 1000; ++i) {
        SurfacePoint p = random_point(rng, i % 2);
        SurfacePoint direct = ev.eval(s * tp, ev.eval(t, ev.eval((s * tp).inverse(), ev.eval(t.inverse(), p))));
        CHECK(torus_distance(ev.eval(c, p).p, direct.p) < 1e-12);
    }
}

TEST_CASE("canonical text round trip") {
    Word w = sigma(0, kQ, kEps, 3) * tau_prime(1, kQ2, kEps, -1) * ham(1, kQ2, kEps) *
             Word(Generator(0, GenKind::sigma_prime, kQ, kEps, Number::rational(1, 2)), 2);
    std::string text = w.str();
    CHECK(text == "s[1;1,1,1/20,3/100]^3 * t'[2;7/10,-13/10,-1/25,3/50]^-1 * h[2;7/10,-13/10,-1/25,3/50] * "
                  "s'[1;1,1,1/20,3/100;t=1/2]^2");
    CHECK(parse_word(text, kEps) == w);
    CHECK(parse_word(" s[1; 1, 1, 0.05, 0.03] ^3*t'[2;0.7,-1.3,-0.04,0.06]^-1 * h[2;0.7,-1.3,-0.04,0.06]*"
                     "s'[1;1,1,0.05,0.03;t=0.5]^2",
                     kEps) == w);
    CHECK(parse_word("id", kEps).empty());
    CHECK(Word().str() == "id");
    Word f(Generator(0, GenKind::tau, kQ, kEps, Number(std::sqrt(2.0))));
    CHECK(parse_word(f.str(), kEps) == f);
    CHECK_THROWS_AS(parse_word("x[1;1,1,0,0]", kEps), std::invalid_argument);
    CHECK_THROWS_AS(parse_word("s[0;1,1,0,0]", kEps), std::invalid_argument);
    CHECK_THROWS_AS(parse_word("s[1;1,1,0.5,0]", kEps), std::invalid_argument);
    CHECK_THROWS_AS(parse_word("s[1;1,1,0]", kEps), std::invalid_argument);
    CHECK_THROWS_AS(parse_word("s[1;1,1,0,0] t[1;1,1,0,0]", kEps), std::invalid_argument);
}

TEST_CASE("maps_equal") {
    MapEvaluator ev;
    Word w = sigma(0, kQ, kEps) * tau(1, kQ2, kEps);
    auto same = maps_equal(w, w * Word(), kModel, ev, 16);
    CHECK(same.equal);
    CHECK(same.max_distance == 0.0);
    auto commutator_identity = maps_equal(commutator(sigma(0, kQ, kEps), tau(0, kQ, kEps)), ham(0, kQ, kEps), kModel, ev, 32);
    CHECK(commutator_identity.equal);
    auto primed = maps_equal(commutator(sigma_prime(0, kQ2, kEps), tau_prime(0, kQ2, kEps, -1)),
                             ham_prime(0, kQ2, kEps), kModel, ev, 32);
    CHECK(primed.equal);
    // The bracket rules of the oracle: tau sigma tau^-1 and tau'^-1 sigma' tau' act as
    // sigma h^-1 and sigma' h'^-1.
    CHECK(maps_equal(tau(0, kQ, kEps) * sigma(0, kQ, kEps) * tau(0, kQ, kEps, -1),
                     sigma(0, kQ, kEps) * ham(0, kQ, kEps, -1), kModel, ev, 32).equal);
    CHECK(maps_equal(tau_prime(0, kQ, kEps, -1) * sigma_prime(0, kQ, kEps) * tau_prime(0, kQ, kEps),
                     sigma_prime(0, kQ, kEps) * ham_prime(0, kQ, kEps, -1), kModel, ev, 32).equal);
    Word s = sigma(0, kQ, kEps), tp = tau_prime(0, kQ, kEps);
    CHECK(maps_equal(s * tp, tp * s, kModel, ev, 32).equal);
    // A pair that does not commute is detected.
    auto diff = maps_equal(s * tau(0, kQ, kEps), tau(0, kQ, kEps) * s, kModel, ev, 32);
    CHECK_FALSE(diff.equal);
}

TEST_CASE("section words") {
    std::vector<Quadruple> quads{kQ, kQ2};
    auto zero = build_gamma_words(kModel, quads, 0);
    CHECK(zero.f_m.empty());
    CHECK(zero.gamma_m.empty());
    auto one = build_gamma_words(kModel, quads, 1);
    CHECK(one.f_m.size() == 4);
    CHECK(one.g_alpha.size() == 2);
    CHECK(one.g_beta.size() == 2);
    // [f,ga] has 2|f| + 2|ga| letters, and so does [f, gb^-1]^-1.
    CHECK(one.gamma_m.size() == 2 * (2 * 4 + 2 * 2));
    CHECK_THROWS(build_gamma_words(kModel, {kQ}, 1));
    MapEvaluator ev;
    auto two = build_gamma_words(kModel, quads, 2);
    Word f = two.f_m, ga = two.g_alpha, gbi = two.g_beta.inverse();
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        SurfacePoint p = random_point(rng, i % 2);
        // [f,gb^-1]^-1 = gb^-1 f gb^-1^-1 f^-1, applied right to left.
        SurfacePoint q = ev.eval(f.inverse(), p);
        q = ev.eval(gbi.inverse(), q);
        q = ev.eval(f, q);
        q = ev.eval(gbi, q);
        q = ev.eval(ga.inverse(), q);
        q = ev.eval(f.inverse(), q);
        q = ev.eval(ga, q);
        q = ev.eval(f, q);
        CHECK(torus_distance(ev.eval(two.gamma_m, p).p, q.p) < 1e-12);
    }
}

TEST_CASE("Jacobian determinant and finite-difference cross-check") {
    MapEvaluator ev;
    std::mt19937_64 rng(8);
    std::vector<Word> words = corpus_generators();
    words.push_back(build_gamma_words(kModel, {kQ, kQ2}, 1).gamma_m);
    for (const Word& w : words) {
        double worst_det = 0.0, worst_fd = 0.0;
        for (int i = 0; i < 500; ++i) {
            SurfacePoint p = random_point(rng);
            auto [img, J] = ev.eval_with_jacobian(w, p);
            worst_det = std::max(worst_det, std::abs(J.det() - 1.0));
            if (i % 5 == 0) {
                // Orbits turn sharp corners in the band; only small steps resolve the derivative.
                double h = 1e-8;
                Vec2 dx = (1 / (2 * h)) * (ev.eval(w, {p.chart, {p.p.x + h, p.p.y}}).p -
                                           ev.eval(w, {p.chart, {p.p.x - h, p.p.y}}).p);
                Vec2 dy = (1 / (2 * h)) * (ev.eval(w, {p.chart, {p.p.x, p.p.y + h}}).p -
                                           ev.eval(w, {p.chart, {p.p.x, p.p.y - h}}).p);
                double scale = 1.0 + std::max({std::abs(J.a), std::abs(J.b), std::abs(J.c), std::abs(J.d)});
                double err = std::max({std::abs(dx.x - J.a), std::abs(dx.y - J.c), std::abs(dy.x - J.b),
                                       std::abs(dy.y - J.d)});
                worst_fd = std::max(worst_fd, err / scale);
            }
        }
        CHECK(worst_det < 1e-6);
        CHECK(worst_fd < 1e-4);
    }
}

TEST_CASE("image areas of small squares") {
    MapEvaluator ev;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Word> words = corpus_generators();
    words.push_back(commutator(sigma(0, kQ, kEps), tau(0, kQ, kEps)));
    words.push_back(commutator(sigma_prime(0, kQ2, kEps), tau_prime(0, kQ2, kEps, -1)));
    const double side = 5e-4;
    for (const Word& w : words) {
        CAPTURE(w.str());
        double worst = 0.0;
        for (int i = 0; i < 8; ++i) {
            SurfacePoint c{0, {u(rng), u(rng)}};
            double area = image_area(w, c, side, ev);
            REQUIRE(area == area);
            worst = std::max(worst, std::abs(area / (side * side) - 1.0));
        }
        CHECK(worst < 1e-4);
    }
    // Exact for maps that are affine on the square.
    CHECK(image_area(Word(), {0, {0.3, 0.6}}, 0.1, ev) == doctest::Approx(0.01).epsilon(1e-13));
    CHECK(image_area(tau(0, kQ, kEps), {0, {0.01, 0.4}}, 0.01, ev) == doctest::Approx(1e-4).epsilon(1e-12));
    // Two transverse shears stretch squares into filaments far beyond any evaluation budget.
    Word hh = ham(0, kQ, kEps) * ham_prime(0, kQ, kEps);
    CHECK(std::isnan(image_area(hh, {0, {0.374, 0.0034}}, 5e-4, ev, 1e-7, 1e-3, 20000)));
}
