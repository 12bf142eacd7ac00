#pragma once
/// @file maps.hpp
/// Words over the chart-tagged generators sigma, sigma', tau, tau' (and the
/// Hamiltonian shears h, h'), their point evaluation and comparison.
///
/// A word g1 g2 ... gn denotes the composition g1 o g2 o ... o gn, so gn acts
/// first. Points are lifts to R^2 tagged with a chart; generators of other
/// charts act as the identity.

#include "symplab/fields.hpp"
#include "symplab/geometry.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace symplab {

struct Quadruple {
    Number a, b, c, d;
    /// min(|c|,|d|) if both are nonzero, max(|c|,|d|) otherwise.
    [[nodiscard]] Number delta() const;
    [[nodiscard]] std::string str() const;
    friend bool operator==(const Quadruple& x, const Quadruple& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }
};

/// sigma, sigma', tau, tau', and the full shears h = phi^{b}_{H_{c,Delta}},
/// h' = phi^{a}_{H'_{d,Delta}} (the right-hand sides of the commutator identities).
enum class GenKind { sigma, sigma_prime, tau, tau_prime, ham, ham_prime };

std::string_view symbol(GenKind kind);

class Generator {
public:
    /// chart is 0-based; time is the flow time (1 for the plain generator).
    Generator(int chart, GenKind kind, Quadruple quad, const Epsilon& eps, Number time = Number(1));

    [[nodiscard]] int chart() const { return chart_; }
    [[nodiscard]] GenKind kind() const { return kind_; }
    [[nodiscard]] const Quadruple& quadruple() const { return quad_; }
    [[nodiscard]] const Number& time() const { return time_; }
    [[nodiscard]] const Epsilon& eps() const { return eps_; }
    [[nodiscard]] bool is_shear() const;
    [[nodiscard]] bool acts_horizontally() const;

    /// Bump parameters (q, r) of the driving Hamiltonian: (c, Delta) for sigma/h,
    /// (d, Delta) for sigma'/h', with (eps, eps) when c (resp. d) vanishes.
    [[nodiscard]] double bump_q() const { return bump_.q(); }
    [[nodiscard]] double bump_r() const { return bump_.r(); }
    [[nodiscard]] const BumpProfile& bump() const { return bump_; }
    /// Shear amplitude: b for sigma/h, a for sigma'/h'; translation speed c or d for tau/tau'.
    [[nodiscard]] double amplitude() const { return amp_; }
    /// Strip I_{-q,r} on which sigma (sigma') acts.
    [[nodiscard]] Interval strip() const { return interval_I(-bump_.q(), bump_.r()); }

    [[nodiscard]] std::string str() const;
    friend bool operator==(const Generator& x, const Generator& y);

private:
    int chart_;
    GenKind kind_;
    Quadruple quad_;
    Epsilon eps_;
    Number time_;
    BumpProfile bump_{1.0, 1.0};
    double amp_ = 0.0;
};

struct Letter {
    Generator gen;
    long exponent = 1;
    /// Flow time exponent * time.
    [[nodiscard]] double total_time() const { return gen.time().value() * static_cast<double>(exponent); }
};

class Word {
public:
    Word() = default;
    explicit Word(Generator g, long exponent = 1);
    explicit Word(std::vector<Letter> letters);

    [[nodiscard]] const std::vector<Letter>& letters() const { return letters_; }
    [[nodiscard]] bool empty() const { return letters_.empty(); }
    [[nodiscard]] std::size_t size() const { return letters_.size(); }
    /// Sum of |exponent| over letters.
    [[nodiscard]] long length() const;
    [[nodiscard]] Word inverse() const;
    [[nodiscard]] Word power(long n) const;
    /// Letters of one chart, order kept.
    [[nodiscard]] Word restricted_to_chart(int chart) const;
    /// Canonical text, "id" for the empty word.
    [[nodiscard]] std::string str() const;

    friend Word operator*(const Word& x, const Word& y);
    friend bool operator==(const Word& x, const Word& y);

private:
    void reduce();
    std::vector<Letter> letters_;
};

Word compose(const Word& x, const Word& y);
Word invert(const Word& w);
/// [f,g] = f g f^-1 g^-1.
Word commutator(const Word& f, const Word& g);

/// Parses the canonical text form; see README for the grammar.
Word parse_word(std::string_view text, const Epsilon& eps);

Word sigma(int chart, const Quadruple& q, const Epsilon& eps, long exponent = 1);
Word sigma_prime(int chart, const Quadruple& q, const Epsilon& eps, long exponent = 1);
Word tau(int chart, const Quadruple& q, const Epsilon& eps, long exponent = 1);
Word tau_prime(int chart, const Quadruple& q, const Epsilon& eps, long exponent = 1);
Word ham(int chart, const Quadruple& q, const Epsilon& eps, long exponent = 1);
Word ham_prime(int chart, const Quadruple& q, const Epsilon& eps, long exponent = 1);

struct SurfacePoint {
    int chart = 0;
    Vec2 p;
};

struct FlowConfig {
    /// Implicit midpoint step for the numeric part of tau/tau'.
    double step = 1e-3;
    double newton_tol = 1e-15;
    int newton_max_iter = 30;
};

/// Point evaluation of words, with Jacobians by tangent propagation.
class MapEvaluator {
public:
    explicit MapEvaluator(FlowConfig cfg = {}) : cfg_(cfg) {}
    [[nodiscard]] const FlowConfig& config() const { return cfg_; }

    /// Generator flowed for total time t, acting on a lift.
    [[nodiscard]] Vec2 apply(const Generator& g, double t, Vec2 p) const;
    [[nodiscard]] Vec2 apply(const Generator& g, double t, Vec2 p, Mat2& jac) const;

    [[nodiscard]] SurfacePoint eval(const Word& w, SurfacePoint pt) const;
    [[nodiscard]] std::pair<SurfacePoint, Mat2> eval_with_jacobian(const Word& w, SurfacePoint pt) const;

    /// Numeric flow of Y_c (or Y'_d) by the implicit midpoint rule, no shortcuts.
    [[nodiscard]] Vec2 midpoint_flow(const BandField& f, double t, Vec2 p, Mat2* jac) const;

private:
    [[nodiscard]] Vec2 apply_impl(const Generator& g, double t, Vec2 p, Mat2* jac) const;
    FlowConfig cfg_;
};

/// The autonomous vector field generating the one-parameter group of g (times g.time()).
VectorField generator_field(const Generator& g);

struct MapsEqualResult {
    bool equal = true;
    double max_distance = 0.0;
    SurfacePoint worst;
};

/// Sup of torus distance between images over an n x n grid of cell centres in every chart.
MapsEqualResult maps_equal(const Word& w1, const Word& w2, const SurfaceModel& model, const MapEvaluator& ev,
                           int samples_per_axis = 64, double tol = 1e-6);

/// Area enclosed by the image of the boundary of the square with lower-left corner `corner`
/// and side `side`. The boundary polyline is pushed through the letters one at a time and
/// refined after each so that consecutive images stay within max_chord; the shoelace integral
/// is then evaluated by adaptive Simpson quadrature to rel_tol * side^2. NaN when
/// max_evaluations is exceeded. Uses that words map lifts continuously.
double image_area(const Word& w, SurfacePoint corner, double side, const MapEvaluator& ev, double rel_tol = 1e-7,
                  double max_chord = 0.001, long max_evaluations = 2'000'000);

struct GammaWords {
    Word f_m;
    Word g_alpha;
    Word g_beta;
    Word gamma_m;
};

/// f_m = prod_j sigma_j^m sigma'_j^m, g_alpha = prod_j tau_j, g_beta = prod_j tau'_j,
/// gamma_m = [f_m, g_alpha][f_m, g_beta^-1]^-1.
GammaWords build_gamma_words(const SurfaceModel& model, const std::vector<Quadruple>& quads, long m);

}  // namespace symplab
