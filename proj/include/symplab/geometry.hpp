#pragma once
/// @file geometry.hpp
/// Punctured torus charts, the curves alpha/beta, cohomology classes of a
/// genus-l surface and the intersection pairing.

#include "symplab/number.hpp"

#include <array>
#include <string>
#include <vector>

namespace symplab {

/// Plain point or vector of R^2; used for lifts of torus points.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

/// Row-major 2x2 matrix.
struct Mat2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
    static Mat2 identity() { return {}; }
    static Mat2 zero() { return {0.0, 0.0, 0.0, 0.0}; }
    [[nodiscard]] double det() const { return a * d - b * c; }
    [[nodiscard]] double trace() const { return a + d; }
    friend Mat2 operator*(const Mat2& m, const Mat2& n) {
        return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
                m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
    }
    friend Vec2 operator*(const Mat2& m, Vec2 v) { return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y}; }
    friend Mat2 operator*(double s, const Mat2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }
    friend Mat2 operator+(const Mat2& m, const Mat2& n) { return {m.a + n.a, m.b + n.b, m.c + n.c, m.d + n.d}; }
    friend Mat2 operator-(const Mat2& m, const Mat2& n) { return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d}; }
    [[nodiscard]] Mat2 inverse() const;
};

/// Width parameter of the punctured torus, 0 < eps < 1/4.
class Epsilon {
public:
    explicit Epsilon(Number value);
    [[nodiscard]] const Number& number() const { return value_; }
    [[nodiscard]] double value() const { return value_.value(); }

private:
    Number value_;
};

/// Point of R^2/Z^2 with coordinates reduced to [0,1).
class TorusPoint {
public:
    TorusPoint() = default;
    TorusPoint(double x, double y);
    static TorusPoint from_lift(Vec2 p) { return {p.x, p.y}; }
    [[nodiscard]] double x() const { return x_; }
    [[nodiscard]] double y() const { return y_; }
    [[nodiscard]] Vec2 lift() const { return {x_, y_}; }

private:
    double x_ = 0.0;
    double y_ = 0.0;
};

/// Reduces t to [0,1).
double reduce_unit(double t);
/// Representative of t modulo 1 in [-1/2, 1/2).
double centered(double t);
/// Flat-torus distance between the projections of two points of R^2.
double torus_distance(Vec2 a, Vec2 b);
double torus_distance(const TorusPoint& a, const TorusPoint& b);

/// True iff the reduced point lies in D_eps, the unit square minus the open
/// inner square (2eps, 1-2eps)^2; boundary points count as inside.
bool in_punctured_torus(const TorusPoint& pt, const Epsilon& eps, double tol = 1e-12);

/// Area of P_eps, 8 eps - 16 eps^2.
Number punctured_torus_area(const Epsilon& eps);

/// Closed genus-l surface seen through l disjoint copies of P_eps.
class SurfaceModel {
public:
    /// Uses epsilon_for(genus, area).
    SurfaceModel(int genus, Number total_area);
    /// Explicit width; requires genus * area(P_eps) < total_area.
    SurfaceModel(int genus, Epsilon eps, Number total_area);

    [[nodiscard]] int genus() const { return genus_; }
    [[nodiscard]] int chart_count() const { return genus_; }
    [[nodiscard]] const Epsilon& epsilon() const { return eps_; }
    [[nodiscard]] Number area_per_chart() const { return punctured_torus_area(eps_); }
    [[nodiscard]] const Number& total_area() const { return total_area_; }

private:
    int genus_;
    Epsilon eps_;
    Number total_area_;
};

/// Class in H^1 of a genus-l surface, coordinates (a_1,b_1,...,a_l,b_l)
/// over the dual basis ([alpha_1]*, [beta_1]*, ...). Charts are 0-based.
class CohomologyClass {
public:
    explicit CohomologyClass(int genus);
    CohomologyClass(int genus, std::vector<Number> coeffs);
    static CohomologyClass alpha_dual(int genus, int chart, Number scale = 1);
    static CohomologyClass beta_dual(int genus, int chart, Number scale = 1);

    [[nodiscard]] int genus() const { return static_cast<int>(coeffs_.size() / 2); }
    [[nodiscard]] const std::vector<Number>& coeffs() const { return coeffs_; }
    [[nodiscard]] const Number& alpha(int chart) const { return coeffs_.at(2 * chart); }
    [[nodiscard]] const Number& beta(int chart) const { return coeffs_.at(2 * chart + 1); }
    Number& alpha(int chart) { return coeffs_.at(2 * chart); }
    Number& beta(int chart) { return coeffs_.at(2 * chart + 1); }
    [[nodiscard]] std::vector<double> values() const;
    [[nodiscard]] bool is_exact() const;
    [[nodiscard]] std::string str() const;

    CohomologyClass& operator+=(const CohomologyClass& o);
    CohomologyClass& operator-=(const CohomologyClass& o);
    CohomologyClass& operator*=(const Number& s);
    friend CohomologyClass operator+(CohomologyClass a, const CohomologyClass& b) { return a += b; }
    friend CohomologyClass operator-(CohomologyClass a, const CohomologyClass& b) { return a -= b; }
    friend CohomologyClass operator*(const Number& s, CohomologyClass a) { return a *= s; }
    friend bool operator==(const CohomologyClass& a, const CohomologyClass& b) { return a.coeffs_ == b.coeffs_; }

private:
    std::vector<Number> coeffs_;
};

/// Sum over charts of a_j d_j - b_j c_j where v = (a_j, b_j) and w = (c_j, d_j).
Number intersection_form(const CohomologyClass& v, const CohomologyClass& w);
/// Largest absolute coefficient.
Number max_norm(const CohomologyClass& w);
/// Largest absolute difference between coefficient values.
double max_abs_difference(const CohomologyClass& v, const CohomologyClass& w);

/// eps = min(1, area) / (8 l).
Epsilon epsilon_for(int genus, const Number& area);
/// k0 = 8 l max(1, ceil(w_max / area)).
long k0_bound(int genus, const Number& w_max, const Number& area);

enum class CurveKind { alpha, beta };

/// The loops alpha(t) = p(0,t) and beta(t) = p(t,0) inside one chart.
struct Curve {
    int chart = 0;
    CurveKind kind = CurveKind::alpha;
    [[nodiscard]] Vec2 point(double t) const;
    [[nodiscard]] Vec2 velocity() const;
};

}  // namespace symplab
