#include "symplab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace symplab {

Interval::Interval(double l, double h) : lo(l), hi(h) {
    if (!(lo <= hi)) throw std::invalid_argument("interval requires lo <= hi");
}

Interval interval_I(double q, double r) { return {0.5 * (q - r), 0.5 * (q + r)}; }

Interval interval_J(double q, double r) {
    double h = 0.5 * (std::abs(q) - r);
    return {-h, h};
}

double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

double smoothstep_d1(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    double u = t * (1.0 - t);
    return 30.0 * u * u;
}

double smoothstep_d2(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
}

BumpProfile::BumpProfile(double q, double r) : q_(q), r_(r) {
    if (!(r > 0.0) || !(r <= std::abs(q)))
        throw std::invalid_argument("bump profile requires 0 < r <= |q|");
}

double BumpProfile::pos_value(double x) const {
    double qa = std::abs(q_);
    double s0 = 0.5 * (qa + r_);
    double s1 = 0.5 * (qa - r_);
    if (x <= -s0 || x >= s0) return 0.0;
    if (x < -s1) return smoothstep((x + s0) / r_);
    if (x <= s1) return 1.0;
    return 1.0 - smoothstep((x - s1) / r_);
}

double BumpProfile::pos_d1(double x) const {
    double qa = std::abs(q_);
    double s0 = 0.5 * (qa + r_);
    double s1 = 0.5 * (qa - r_);
    if (x <= -s0 || x >= s0) return 0.0;
    if (x < -s1) return smoothstep_d1((x + s0) / r_) / r_;
    if (x <= s1) return 0.0;
    return -smoothstep_d1((x - s1) / r_) / r_;
}

double BumpProfile::pos_d2(double x) const {
    double qa = std::abs(q_);
    double s0 = 0.5 * (qa + r_);
    double s1 = 0.5 * (qa - r_);
    if (x <= -s0 || x >= s0) return 0.0;
    if (x < -s1) return smoothstep_d2((x + s0) / r_) / (r_ * r_);
    if (x <= s1) return 0.0;
    return -smoothstep_d2((x - s1) / r_) / (r_ * r_);
}

double BumpProfile::value(double x) const { return q_ > 0 ? pos_value(x) : -pos_value(-x); }
double BumpProfile::derivative(double x) const { return q_ > 0 ? pos_d1(x) : pos_d1(-x); }
double BumpProfile::second_derivative(double x) const { return q_ > 0 ? pos_d2(x) : -pos_d2(-x); }

std::array<double, 4> BumpProfile::breakpoints() const {
    double qa = std::abs(q_);
    double s0 = 0.5 * (qa + r_);
    double s1 = 0.5 * (qa - r_);
    return {-s0, -s1, s1, s0};
}

BumpProfile make_bump(double q, double r, const Epsilon& eps) {
    if (!(std::abs(q) <= eps.value())) throw std::invalid_argument("bump profile requires |q| <= eps");
    return {q, r};
}

namespace {

std::vector<double> reduced(const std::array<double, 4>& pts) {
    std::vector<double> out;
    for (double p : pts) out.push_back(reduce_unit(p));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

ScalarField make_H(double q, double r, bool primed, const Epsilon& eps) {
    double e = eps.value();
    if (!(std::abs(q) <= e)) throw std::invalid_argument("H_{q,r} requires |q| <= eps");
    if (q == 0.0) {
        q = e;
        r = e;
    } else if (!(r > 0.0) || !(r <= std::abs(q))) {
        throw std::invalid_argument("H_{q,r} requires 0 < r <= |q|");
    }
    BumpProfile rho(q, r);
    ScalarField H;
    H.name = std::string(primed ? "H'" : "H") + "_{" + std::to_string(q) + "," + std::to_string(r) + "}";
    auto coord = [primed](Vec2 p) { return centered(primed ? p.y : p.x); };
    H.value = [rho, coord, e](Vec2 p) {
        double t = coord(p);
        return std::abs(t) <= e ? -rho.value(t) : 0.0;
    };
    H.gradient = [rho, coord, e, primed](Vec2 p) {
        double t = coord(p);
        double g = std::abs(t) <= e ? -rho.derivative(t) : 0.0;
        return primed ? Vec2{0.0, g} : Vec2{g, 0.0};
    };
    H.hessian = [rho, coord, e, primed](Vec2 p) {
        double t = coord(p);
        double h = std::abs(t) <= e ? -rho.second_derivative(t) : 0.0;
        return primed ? Mat2{0.0, 0.0, 0.0, h} : Mat2{h, 0.0, 0.0, 0.0};
    };
    (primed ? H.y_breaks : H.x_breaks) = reduced(rho.breakpoints());
    return H;
}

BandStep::BandStep(const Epsilon& eps) : e_(eps.value()) {}

double BandStep::value(double u) const {
    u = reduce_unit(u);
    double w = 0.4 * e_;
    if (u <= inner() || u >= 1.0 - inner()) return 0.0;
    if (u < outer()) return smoothstep((u - inner()) / w);
    if (u <= 1.0 - outer()) return 1.0;
    return smoothstep((1.0 - inner() - u) / w);
}

double BandStep::d1(double u) const {
    u = reduce_unit(u);
    double w = 0.4 * e_;
    if (u <= inner() || u >= 1.0 - inner()) return 0.0;
    if (u < outer()) return smoothstep_d1((u - inner()) / w) / w;
    if (u <= 1.0 - outer()) return 0.0;
    return -smoothstep_d1((1.0 - inner() - u) / w) / w;
}

double BandStep::d2(double u) const {
    u = reduce_unit(u);
    double w = 0.4 * e_;
    if (u <= inner() || u >= 1.0 - inner()) return 0.0;
    if (u < outer()) return smoothstep_d2((u - inner()) / w) / (w * w);
    if (u <= 1.0 - outer()) return 0.0;
    return smoothstep_d2((1.0 - inner() - u) / w) / (w * w);
}

std::array<double, 4> BandStep::breakpoints() const {
    return {inner(), outer(), 1.0 - outer(), 1.0 - inner()};
}

namespace {

struct GParts {
    double n, Y, bx, by, dbx, dby, ddbx, ddby;
};

GParts g_parts(const BandStep& b, Vec2 p) {
    GParts g{};
    g.n = std::floor(p.y);
    g.Y = p.y - g.n;
    g.bx = b.value(p.x);
    g.by = b.value(g.Y);
    g.dbx = b.d1(p.x);
    g.dby = b.d1(g.Y);
    g.ddbx = b.d2(p.x);
    g.ddby = b.d2(g.Y);
    return g;
}

double g_value(double c, const BandStep& b, Vec2 p) {
    GParts g = g_parts(b, p);
    double beta = g.bx * g.by;
    return -c * g.n - c * ((1.0 - beta) * g.Y + 0.5 * beta);
}

Vec2 g_gradient(double c, const BandStep& b, Vec2 p) {
    GParts g = g_parts(b, p);
    double beta = g.bx * g.by;
    double h = 0.5 - g.Y;
    double bx = g.dbx * g.by;
    double by = g.bx * g.dby;
    return {-c * bx * h, -c * ((1.0 - beta) + by * h)};
}

Mat2 g_hessian(double c, const BandStep& b, Vec2 p) {
    GParts g = g_parts(b, p);
    double h = 0.5 - g.Y;
    double bx = g.dbx * g.by;
    double by = g.bx * g.dby;
    double bxx = g.ddbx * g.by;
    double bxy = g.dbx * g.dby;
    double byy = g.bx * g.ddby;
    double gxx = -c * bxx * h;
    double gxy = -c * (bxy * h - bx);
    double gyy = -c * (byy * h - 2.0 * by);
    return {gxx, gxy, gxy, gyy};
}

std::vector<double> band_breaks(const BandStep& b) {
    auto bp = b.breakpoints();
    return {bp.begin(), bp.end()};
}

}  // namespace

ScalarField make_G(double c, const Epsilon& eps) {
    if (!(std::abs(c) <= eps.value())) throw std::invalid_argument("G^c requires |c| <= eps");
    BandStep b(eps);
    ScalarField G;
    G.name = "G^" + std::to_string(c);
    G.value = [c, b](Vec2 p) { return g_value(c, b, p); };
    G.gradient = [c, b](Vec2 p) { return g_gradient(c, b, p); };
    G.hessian = [c, b](Vec2 p) { return g_hessian(c, b, p); };
    G.x_breaks = band_breaks(b);
    G.y_breaks = band_breaks(b);
    return G;
}

ScalarField make_G_prime(double d, const Epsilon& eps) {
    if (!(std::abs(d) <= eps.value())) throw std::invalid_argument("G'^d requires |d| <= eps");
    BandStep b(eps);
    ScalarField G;
    G.name = "G'^" + std::to_string(d);
    G.value = [d, b](Vec2 p) { return g_value(d, b, {p.y, p.x}); };
    G.gradient = [d, b](Vec2 p) {
        Vec2 g = g_gradient(d, b, {p.y, p.x});
        return Vec2{g.y, g.x};
    };
    G.hessian = [d, b](Vec2 p) {
        Mat2 h = g_hessian(d, b, {p.y, p.x});
        return Mat2{h.d, h.b, h.c, h.a};
    };
    G.x_breaks = band_breaks(b);
    G.y_breaks = band_breaks(b);
    return G;
}

VectorField hamiltonian_field(const ScalarField& H, double fd_step) {
    VectorField X;
    X.name = "X_" + H.name;
    X.x_breaks = H.x_breaks;
    X.y_breaks = H.y_breaks;
    if (H.gradient) {
        auto grad = H.gradient;
        X.value = [grad](Vec2 p) {
            Vec2 g = grad(p);
            return Vec2{-g.y, g.x};
        };
    } else {
        auto f = H.value;
        X.value = [f, fd_step](Vec2 p) {
            double hx = (f({p.x + fd_step, p.y}) - f({p.x - fd_step, p.y})) / (2.0 * fd_step);
            double hy = (f({p.x, p.y + fd_step}) - f({p.x, p.y - fd_step})) / (2.0 * fd_step);
            return Vec2{-hy, hx};
        };
    }
    if (H.hessian) {
        auto hess = H.hessian;
        X.jacobian = [hess](Vec2 p) {
            Mat2 h = hess(p);
            return Mat2{-h.c, -h.d, h.a, h.b};
        };
    } else {
        auto v = X.value;
        X.jacobian = [v, fd_step](Vec2 p) {
            Vec2 dx = (1.0 / (2.0 * fd_step)) * (v({p.x + fd_step, p.y}) - v({p.x - fd_step, p.y}));
            Vec2 dy = (1.0 / (2.0 * fd_step)) * (v({p.x, p.y + fd_step}) - v({p.x, p.y - fd_step}));
            return Mat2{dx.x, dy.x, dx.y, dy.y};
        };
    }
    return X;
}

Vec2 BandField::value(Vec2 p) const {
    if (!primed) {
        Vec2 g = g_gradient(c, step, p);
        return {-g.y, g.x};
    }
    // G' = G(y,x): grad G'(p) = swap(grad G(swap p)); X = (-G'_y, G'_x).
    Vec2 g = g_gradient(c, step, {p.y, p.x});
    return {-g.x, g.y};
}

Mat2 BandField::jacobian(Vec2 p) const {
    if (!primed) {
        Mat2 h = g_hessian(c, step, p);
        return {-h.c, -h.d, h.a, h.b};
    }
    Mat2 h = g_hessian(c, step, {p.y, p.x});
    // Hessian of G' is [[h.d, h.b], [h.c, h.a]].
    return {-h.b, -h.a, h.d, h.c};
}

VectorField field_Y(double c, const Epsilon& eps) {
    VectorField Y = hamiltonian_field(make_G(c, eps));
    Y.name = "Y_" + std::to_string(c);
    return Y;
}

VectorField field_Y_prime(double d, const Epsilon& eps) {
    VectorField Y = hamiltonian_field(make_G_prime(d, eps));
    Y.name = "Y'_" + std::to_string(d);
    return Y;
}

VectorField scaled(const VectorField& X, double s) {
    VectorField out = X;
    auto v = X.value;
    out.value = [v, s](Vec2 p) { return s * v(p); };
    if (X.jacobian) {
        auto j = X.jacobian;
        out.jacobian = [j, s](Vec2 p) { return s * j(p); };
    }
    return out;
}

VectorField restricted_to_strip(const VectorField& X, const Interval& I, int axis) {
    VectorField out = X;
    auto inside = [I, axis](Vec2 p) { return I.contains_open(centered(axis == 0 ? p.x : p.y)); };
    auto v = X.value;
    out.value = [v, inside](Vec2 p) { return inside(p) ? v(p) : Vec2{}; };
    if (X.jacobian) {
        auto j = X.jacobian;
        out.jacobian = [j, inside](Vec2 p) { return inside(p) ? j(p) : Mat2::zero(); };
    }
    auto& breaks = axis == 0 ? out.x_breaks : out.y_breaks;
    breaks.push_back(reduce_unit(I.lo));
    breaks.push_back(reduce_unit(I.hi));
    std::sort(breaks.begin(), breaks.end());
    return out;
}

double divergence_fd(const VectorField& X, Vec2 p, double h) {
    double ux = (X.value({p.x + h, p.y}).x - X.value({p.x - h, p.y}).x) / (2.0 * h);
    double vy = (X.value({p.x, p.y + h}).y - X.value({p.x, p.y - h}).y) / (2.0 * h);
    return ux + vy;
}

QuadratureResult integrate_over_punctured_torus(const ScalarField& H, const Epsilon& eps,
                                                const QuadratureConfig& cfg) {
    QuadratureResult total;
    auto f = [&H](double x, double y) { return H.value({x, y}); };
    for (const Rect& r : punctured_torus_rects(eps)) {
        QuadratureResult part = integrate_rect(f, r, H.x_breaks, H.y_breaks, cfg);
        total.value += part.value;
        total.error_estimate += part.error_estimate;
    }
    return total;
}

}  // namespace symplab
