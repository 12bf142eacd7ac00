#pragma once
/// @file fields.hpp
/// Bump profiles rho_{q,r}, the Hamiltonians H_{q,r}, H'_{q,r}, the
/// generating functions G^c, G'^d and Hamiltonian vector fields.
/// All fields act on lifts in R^2 and are Z^2-periodic (G^c, G'^d are
/// equivariant: their gradients are periodic).

#include "symplab/geometry.hpp"
#include "symplab/quadrature.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace symplab {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    Interval() = default;
    Interval(double l, double h);
    [[nodiscard]] bool contains_open(double x) const { return x > lo && x < hi; }
    [[nodiscard]] bool contains_closed(double x) const { return x >= lo && x <= hi; }
    [[nodiscard]] double length() const { return hi - lo; }
};

/// The open interval I_{q,r} = ((q-r)/2, (q+r)/2).
Interval interval_I(double q, double r);
/// The closed interval J_{q,r} = [-(|q|-r)/2, (|q|-r)/2].
Interval interval_J(double q, double r);

/// Quintic smoothstep 6t^5 - 15t^4 + 10t^3 clamped to [0,1], with derivatives.
double smoothstep(double t);
double smoothstep_d1(double t);
double smoothstep_d2(double t);

/// rho_{q,r}: plateau q/|q| on J_{q,r}, quintic ramps on I_{+-q,r}, zero outside.
class BumpProfile {
public:
    BumpProfile(double q, double r);
    [[nodiscard]] double q() const { return q_; }
    [[nodiscard]] double r() const { return r_; }
    [[nodiscard]] double value(double x) const;
    [[nodiscard]] double derivative(double x) const;
    [[nodiscard]] double second_derivative(double x) const;
    /// -(|q|+r)/2, -(|q|-r)/2, (|q|-r)/2, (|q|+r)/2.
    [[nodiscard]] std::array<double, 4> breakpoints() const;
    [[nodiscard]] double support_radius() const { return 0.5 * (std::abs(q_) + r_); }

private:
    // Profile for |q|, mirrored for negative q.
    [[nodiscard]] double pos_value(double x) const;
    [[nodiscard]] double pos_d1(double x) const;
    [[nodiscard]] double pos_d2(double x) const;
    double q_;
    double r_;
};

/// Requires 0 < r <= |q| <= eps.
BumpProfile make_bump(double q, double r, const Epsilon& eps);

struct ScalarField {
    std::string name;
    std::function<double(Vec2)> value;
    /// Closed-form gradient (H_x, H_y); empty means finite differences.
    std::function<Vec2(Vec2)> gradient;
    /// Closed-form Hessian [[H_xx, H_xy], [H_yx, H_yy]]; optional.
    std::function<Mat2(Vec2)> hessian;
    /// Non-smooth points of the field in [0,1) along each axis, for quadrature.
    std::vector<double> x_breaks;
    std::vector<double> y_breaks;
};

struct VectorField {
    std::string name;
    std::function<Vec2(Vec2)> value;
    /// Closed-form derivative; optional.
    std::function<Mat2(Vec2)> jacobian;
    std::vector<double> x_breaks;
    std::vector<double> y_breaks;
};

/// H_{q,r}(x,y) = -rho_{q,r}(x) for |x| <= eps (y in the primed case); q = 0 yields
/// the field induced by rho_{eps,eps}.
ScalarField make_H(double q, double r, bool primed, const Epsilon& eps);

/// Interpolating factor of G^c: 0 on [0,1.5eps] u [1-1.5eps,1], 1 on [1.9eps, 1-1.9eps].
class BandStep {
public:
    explicit BandStep(const Epsilon& eps);
    [[nodiscard]] double value(double u) const;
    [[nodiscard]] double d1(double u) const;
    [[nodiscard]] double d2(double u) const;
    /// 1.5eps, 1.9eps, 1-1.9eps, 1-1.5eps.
    [[nodiscard]] std::array<double, 4> breakpoints() const;
    [[nodiscard]] double inner() const { return 1.5 * e_; }
    [[nodiscard]] double outer() const { return 1.9 * e_; }

private:
    double e_;
};

/// Y_c (primed = false) or Y'_d (primed = true) evaluated without type erasure,
/// for use inside integrators.
struct BandField {
    double c;
    BandStep step;
    bool primed;
    [[nodiscard]] Vec2 value(Vec2 p) const;
    [[nodiscard]] Mat2 jacobian(Vec2 p) const;
};

/// G^c(x,y) = -c n - c((1-beta) Y + beta/2) with n = floor(y), Y = y - n and
/// beta = b(frac x) b(Y); equals -c y on the strips and -c/2 near the inner square.
ScalarField make_G(double c, const Epsilon& eps);
/// G'^d(x,y) = G^d(y,x); equals -d x on the strips.
ScalarField make_G_prime(double d, const Epsilon& eps);

/// X_H = (-H_y, H_x), from the closed-form gradient when present, else centered
/// differences with step fd_step.
VectorField hamiltonian_field(const ScalarField& H, double fd_step = 1e-6);

/// Y_c and Y'_d: the Hamiltonian fields of G^c and G'^d.
VectorField field_Y(double c, const Epsilon& eps);
VectorField field_Y_prime(double d, const Epsilon& eps);

/// s * X.
VectorField scaled(const VectorField& X, double s);
/// X on the strip {centered(x) in I} (axis 0) or {centered(y) in I} (axis 1), zero elsewhere.
VectorField restricted_to_strip(const VectorField& X, const Interval& I, int axis);

/// Divergence by centered differences.
double divergence_fd(const VectorField& X, Vec2 p, double h = 1e-6);

/// Integral of H over P_eps by tensor Gauss-Legendre panels on D_eps.
QuadratureResult integrate_over_punctured_torus(const ScalarField& H, const Epsilon& eps,
                                                const QuadratureConfig& cfg = {});

}  // namespace symplab
