#include "symplab/geometry.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace symplab {

Mat2 Mat2::inverse() const {
    double dt = det();
    if (dt == 0.0) throw std::domain_error("singular 2x2 matrix");
    return {d / dt, -b / dt, -c / dt, a / dt};
}

Epsilon::Epsilon(Number value) : value_(std::move(value)) {
    if (!(value_ > Number(0)) || !(value_ < Number::rational(1, 4)))
        throw std::invalid_argument("epsilon must satisfy 0 < eps < 1/4, got " + value_.str());
}

double reduce_unit(double t) {
    double r = t - std::floor(t);
    return r >= 1.0 ? 0.0 : r;
}

double centered(double t) { return t - std::floor(t + 0.5); }

TorusPoint::TorusPoint(double x, double y) : x_(reduce_unit(x)), y_(reduce_unit(y)) {}

double torus_distance(Vec2 a, Vec2 b) {
    double dx = centered(a.x - b.x);
    double dy = centered(a.y - b.y);
    return std::hypot(dx, dy);
}

double torus_distance(const TorusPoint& a, const TorusPoint& b) { return torus_distance(a.lift(), b.lift()); }

bool in_punctured_torus(const TorusPoint& pt, const Epsilon& eps, double tol) {
    double lo = 2.0 * eps.value() + tol;
    double hi = 1.0 - 2.0 * eps.value() - tol;
    bool inner = pt.x() > lo && pt.x() < hi && pt.y() > lo && pt.y() < hi;
    return !inner;
}

Number punctured_torus_area(const Epsilon& eps) {
    const Number& e = eps.number();
    return Number(8) * e - Number(16) * e * e;
}

SurfaceModel::SurfaceModel(int genus, Number total_area)
    : genus_(genus), eps_(epsilon_for(genus, total_area)), total_area_(std::move(total_area)) {}

SurfaceModel::SurfaceModel(int genus, Epsilon eps, Number total_area)
    : genus_(genus), eps_(std::move(eps)), total_area_(std::move(total_area)) {
    if (genus_ < 2) throw std::invalid_argument("genus must be at least 2");
    if (!(total_area_ > Number(0))) throw std::invalid_argument("surface area must be positive");
    if (!(Number(genus_) * punctured_torus_area(eps_) < total_area_))
        throw std::invalid_argument("charts do not fit: genus * area(P_eps) >= area(S)");
}

CohomologyClass::CohomologyClass(int genus) : coeffs_(2 * static_cast<std::size_t>(genus), Number(0)) {
    if (genus < 1) throw std::invalid_argument("genus must be positive");
}

CohomologyClass::CohomologyClass(int genus, std::vector<Number> coeffs) : coeffs_(std::move(coeffs)) {
    if (genus < 1 || coeffs_.size() != 2 * static_cast<std::size_t>(genus))
        throw std::invalid_argument("cohomology class needs 2*genus coefficients");
}

CohomologyClass CohomologyClass::alpha_dual(int genus, int chart, Number scale) {
    CohomologyClass c(genus);
    c.alpha(chart) = std::move(scale);
    return c;
}

CohomologyClass CohomologyClass::beta_dual(int genus, int chart, Number scale) {
    CohomologyClass c(genus);
    c.beta(chart) = std::move(scale);
    return c;
}

std::vector<double> CohomologyClass::values() const {
    std::vector<double> out;
    out.reserve(coeffs_.size());
    for (const auto& c : coeffs_) out.push_back(c.value());
    return out;
}

bool CohomologyClass::is_exact() const {
    for (const auto& c : coeffs_)
        if (!c.is_exact()) return false;
    return true;
}

std::string CohomologyClass::str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < coeffs_.size(); ++i) os << (i ? ", " : "") << coeffs_[i].str();
    os << ')';
    return os.str();
}

CohomologyClass& CohomologyClass::operator+=(const CohomologyClass& o) {
    if (o.coeffs_.size() != coeffs_.size()) throw std::invalid_argument("cohomology dimension mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

CohomologyClass& CohomologyClass::operator-=(const CohomologyClass& o) {
    if (o.coeffs_.size() != coeffs_.size()) throw std::invalid_argument("cohomology dimension mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

CohomologyClass& CohomologyClass::operator*=(const Number& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

Number intersection_form(const CohomologyClass& v, const CohomologyClass& w) {
    if (v.genus() != w.genus()) throw std::invalid_argument("cohomology dimension mismatch");
    Number total(0);
    for (int j = 0; j < v.genus(); ++j) total += v.alpha(j) * w.beta(j) - v.beta(j) * w.alpha(j);
    return total;
}

Number max_norm(const CohomologyClass& w) {
    Number m(0);
    for (const auto& c : w.coeffs()) m = max(m, abs(c));
    return m;
}

double max_abs_difference(const CohomologyClass& v, const CohomologyClass& w) {
    if (v.genus() != w.genus()) throw std::invalid_argument("cohomology dimension mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < v.coeffs().size(); ++i)
        m = std::max(m, std::fabs(v.coeffs()[i].value() - w.coeffs()[i].value()));
    return m;
}

Epsilon epsilon_for(int genus, const Number& area) {
    if (genus < 2) throw std::invalid_argument("genus must be at least 2");
    if (!(area > Number(0))) throw std::invalid_argument("surface area must be positive");
    return Epsilon(min(Number(1), area) / Number(8 * genus));
}

long k0_bound(int genus, const Number& w_max, const Number& area) {
    if (genus < 2) throw std::invalid_argument("genus must be at least 2");
    if (!(area > Number(0))) throw std::invalid_argument("surface area must be positive");
    if (w_max < Number(0)) throw std::invalid_argument("w_max must be non-negative");
    long c = ceil_to_long(w_max / area);
    return 8L * genus * std::max(1L, c);
}

Vec2 Curve::point(double t) const {
    return kind == CurveKind::alpha ? Vec2{0.0, reduce_unit(t)} : Vec2{reduce_unit(t), 0.0};
}

Vec2 Curve::velocity() const { return kind == CurveKind::alpha ? Vec2{0.0, 1.0} : Vec2{1.0, 0.0}; }

}  // namespace symplab
