#include "symplab/maps.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace symplab {

Number Quadruple::delta() const {
    Number ac = abs(c), ad = abs(d);
    if (!c.is_zero() && !d.is_zero()) return min(ac, ad);
    return max(ac, ad);
}

std::string Quadruple::str() const { return a.str() + "," + b.str() + "," + c.str() + "," + d.str(); }

std::string_view symbol(GenKind kind) {
    switch (kind) {
        case GenKind::sigma: return "s";
        case GenKind::sigma_prime: return "s'";
        case GenKind::tau: return "t";
        case GenKind::tau_prime: return "t'";
        case GenKind::ham: return "h";
        case GenKind::ham_prime: return "h'";
    }
    return "?";
}

Generator::Generator(int chart, GenKind kind, Quadruple quad, const Epsilon& eps, Number time)
    : chart_(chart), kind_(kind), quad_(std::move(quad)), eps_(eps), time_(std::move(time)) {
    if (chart_ < 0) throw std::invalid_argument("chart index must be non-negative");
    if (abs(quad_.c) > eps_.number() || abs(quad_.d) > eps_.number())
        throw std::invalid_argument("quadruple violates |c|,|d| <= eps: (" + quad_.str() + "), eps = " +
                                    eps_.number().str());
    double e = eps_.value();
    double delta = quad_.delta().value();
    switch (kind_) {
        case GenKind::sigma:
        case GenKind::ham:
            bump_ = quad_.c.is_zero() ? BumpProfile(e, e) : BumpProfile(quad_.c.value(), delta);
            amp_ = quad_.b.value();
            break;
        case GenKind::sigma_prime:
        case GenKind::ham_prime:
            bump_ = quad_.d.is_zero() ? BumpProfile(e, e) : BumpProfile(quad_.d.value(), delta);
            amp_ = quad_.a.value();
            break;
        case GenKind::tau:
            bump_ = BumpProfile(e, e);
            amp_ = quad_.c.value();
            break;
        case GenKind::tau_prime:
            bump_ = BumpProfile(e, e);
            amp_ = quad_.d.value();
            break;
    }
}

bool Generator::is_shear() const { return kind_ != GenKind::tau && kind_ != GenKind::tau_prime; }

bool Generator::acts_horizontally() const {
    return kind_ == GenKind::sigma_prime || kind_ == GenKind::ham_prime || kind_ == GenKind::tau;
}

std::string Generator::str() const {
    std::string s = std::string(symbol(kind_)) + "[" + std::to_string(chart_ + 1) + ";" + quad_.str();
    if (!(time_ == Number(1)) || !time_.is_exact()) s += ";t=" + time_.str();
    return s + "]";
}

bool operator==(const Generator& x, const Generator& y) {
    return x.chart_ == y.chart_ && x.kind_ == y.kind_ && x.quad_ == y.quad_ && x.time_ == y.time_ &&
           x.eps_.number() == y.eps_.number();
}

Word::Word(Generator g, long exponent) {
    letters_.push_back({std::move(g), exponent});
    reduce();
}

Word::Word(std::vector<Letter> letters) : letters_(std::move(letters)) { reduce(); }

void Word::reduce() {
    std::vector<Letter> out;
    for (auto& l : letters_) {
        if (l.exponent == 0) continue;
        if (!out.empty() && out.back().gen == l.gen) {
            out.back().exponent += l.exponent;
            if (out.back().exponent == 0) out.pop_back();
        } else {
            out.push_back(std::move(l));
        }
    }
    letters_ = std::move(out);
}

long Word::length() const {
    long n = 0;
    for (const auto& l : letters_) n += std::labs(l.exponent);
    return n;
}

Word Word::inverse() const {
    std::vector<Letter> out(letters_.rbegin(), letters_.rend());
    for (auto& l : out) l.exponent = -l.exponent;
    return Word(std::move(out));
}

Word Word::power(long n) const {
    Word base = n >= 0 ? *this : inverse();
    Word out;
    for (long i = 0; i < std::labs(n); ++i) out = out * base;
    return out;
}

Word Word::restricted_to_chart(int chart) const {
    std::vector<Letter> out;
    for (const auto& l : letters_)
        if (l.gen.chart() == chart) out.push_back(l);
    return Word(std::move(out));
}

std::string Word::str() const {
    if (letters_.empty()) return "id";
    std::string s;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (i) s += " * ";
        s += letters_[i].gen.str();
        if (letters_[i].exponent != 1) s += "^" + std::to_string(letters_[i].exponent);
    }
    return s;
}

Word operator*(const Word& x, const Word& y) {
    std::vector<Letter> all = x.letters_;
    all.insert(all.end(), y.letters_.begin(), y.letters_.end());
    return Word(std::move(all));
}

bool operator==(const Word& x, const Word& y) {
    if (x.letters_.size() != y.letters_.size()) return false;
    for (std::size_t i = 0; i < x.letters_.size(); ++i)
        if (!(x.letters_[i].gen == y.letters_[i].gen) || x.letters_[i].exponent != y.letters_[i].exponent)
            return false;
    return true;
}

Word compose(const Word& x, const Word& y) { return x * y; }
Word invert(const Word& w) { return w.inverse(); }
Word commutator(const Word& f, const Word& g) { return f * g * f.inverse() * g.inverse(); }

namespace {

[[noreturn]] void parse_error(std::string_view text, std::size_t pos, const std::string& what) {
    throw std::invalid_argument("word parse error at position " + std::to_string(pos) + ": " + what + " in '" +
                                std::string(text) + "'");
}

class WordParser {
public:
    WordParser(std::string_view text, const Epsilon& eps) : text_(text), eps_(eps) {}

    Word parse() {
        std::vector<Letter> letters;
        skip_ws();
        if (peek_word("id")) {
            pos_ += 2;
            skip_ws();
            if (pos_ != text_.size()) parse_error(text_, pos_, "trailing input after 'id'");
            return {};
        }
        while (true) {
            skip_ws();
            letters.push_back(letter());
            skip_ws();
            if (pos_ == text_.size()) break;
            expect('*');
        }
        return Word(std::move(letters));
    }

private:
    Letter letter() {
        std::size_t start = pos_;
        if (pos_ >= text_.size()) parse_error(text_, pos_, "expected generator symbol");
        char s = text_[pos_++];
        bool primed = pos_ < text_.size() && text_[pos_] == '\'';
        if (primed) ++pos_;
        GenKind kind;
        if (s == 's') kind = primed ? GenKind::sigma_prime : GenKind::sigma;
        else if (s == 't') kind = primed ? GenKind::tau_prime : GenKind::tau;
        else if (s == 'h') kind = primed ? GenKind::ham_prime : GenKind::ham;
        else parse_error(text_, start, "unknown generator symbol");
        expect('[');
        long chart = integer();
        if (chart < 1) parse_error(text_, pos_, "chart labels start at 1");
        expect(';');
        Quadruple q;
        q.a = number(",");
        expect(',');
        q.b = number(",");
        expect(',');
        q.c = number(",");
        expect(',');
        q.d = number(";]");
        Number time(1);
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ';') {
            ++pos_;
            skip_ws();
            if (!peek_word("t=")) parse_error(text_, pos_, "expected 't='");
            pos_ += 2;
            time = number("]");
        }
        expect(']');
        long exponent = 1;
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '^') {
            ++pos_;
            exponent = integer();
        }
        try {
            return {Generator(static_cast<int>(chart - 1), kind, q, eps_, time), exponent};
        } catch (const std::invalid_argument& e) {
            parse_error(text_, start, e.what());
        }
    }

    Number number(std::string_view terminators) {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && terminators.find(text_[pos_]) == std::string_view::npos) ++pos_;
        try {
            return Number::parse(text_.substr(start, pos_ - start));
        } catch (const std::invalid_argument& e) {
            parse_error(text_, start, e.what());
        }
    }

    long integer() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::string digits(text_.substr(start, pos_ - start));
        if (digits.empty() || digits == "-" || digits == "+") parse_error(text_, start, "expected integer");
        return std::stol(digits);
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c) parse_error(text_, pos_, std::string("expected '") + c + "'");
        ++pos_;
    }

    bool peek_word(std::string_view w) const { return text_.substr(pos_, w.size()) == w; }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::string_view text_;
    const Epsilon& eps_;
    std::size_t pos_ = 0;
};

}  // namespace

Word parse_word(std::string_view text, const Epsilon& eps) { return WordParser(text, eps).parse(); }

Word sigma(int chart, const Quadruple& q, const Epsilon& eps, long exponent) {
    return Word(Generator(chart, GenKind::sigma, q, eps), exponent);
}
Word sigma_prime(int chart, const Quadruple& q, const Epsilon& eps, long exponent) {
    return Word(Generator(chart, GenKind::sigma_prime, q, eps), exponent);
}
Word tau(int chart, const Quadruple& q, const Epsilon& eps, long exponent) {
    return Word(Generator(chart, GenKind::tau, q, eps), exponent);
}
Word tau_prime(int chart, const Quadruple& q, const Epsilon& eps, long exponent) {
    return Word(Generator(chart, GenKind::tau_prime, q, eps), exponent);
}
Word ham(int chart, const Quadruple& q, const Epsilon& eps, long exponent) {
    return Word(Generator(chart, GenKind::ham, q, eps), exponent);
}
Word ham_prime(int chart, const Quadruple& q, const Epsilon& eps, long exponent) {
    return Word(Generator(chart, GenKind::ham_prime, q, eps), exponent);
}

Vec2 MapEvaluator::midpoint_flow(const BandField& f, double t, Vec2 p, Mat2* jac) const {
    long n = std::max(1L, static_cast<long>(std::ceil(std::abs(t) / cfg_.step - 1e-9)));
    double h = t / static_cast<double>(n);
    double hh = 0.5 * h;
    for (long i = 0; i < n; ++i) {
        Vec2 m = p + hh * f.value(p);
        for (int it = 0; it < cfg_.newton_max_iter; ++it) {
            Vec2 res = m - p - hh * f.value(m);
            Mat2 J = Mat2::identity() - hh * f.jacobian(m);
            Vec2 delta = J.inverse() * res;
            m = m - delta;
            if (std::max(std::abs(delta.x), std::abs(delta.y)) <= cfg_.newton_tol) break;
        }
        if (jac) {
            Mat2 A = hh * f.jacobian(m);
            *jac = ((Mat2::identity() - A).inverse() * (Mat2::identity() + A)) * *jac;
        }
        p = 2.0 * m - p;
    }
    return p;
}

Vec2 MapEvaluator::apply(const Generator& g, double t, Vec2 p) const { return apply_impl(g, t, p, nullptr); }

Vec2 MapEvaluator::apply(const Generator& g, double t, Vec2 p, Mat2& jac) const { return apply_impl(g, t, p, &jac); }

Vec2 MapEvaluator::apply_impl(const Generator& g, double t, Vec2 p, Mat2* jac) const {
    const double amp = g.amplitude();
    if (t == 0.0 || amp == 0.0) return p;
    const double e = g.eps().value();
    switch (g.kind()) {
        case GenKind::sigma:
        case GenKind::ham: {
            double xc = centered(p.x);
            if (g.kind() == GenKind::sigma && !g.strip().contains_open(xc)) return p;
            double s = t * amp;
            p.y -= s * g.bump().derivative(xc);
            if (jac) *jac = Mat2{1.0, 0.0, -s * g.bump().second_derivative(xc), 1.0} * *jac;
            return p;
        }
        case GenKind::sigma_prime:
        case GenKind::ham_prime: {
            double yc = centered(p.y);
            if (g.kind() == GenKind::sigma_prime && !g.strip().contains_open(yc)) return p;
            double s = t * amp;
            p.x += s * g.bump().derivative(yc);
            if (jac) *jac = Mat2{1.0, s * g.bump().second_derivative(yc), 0.0, 1.0} * *jac;
            return p;
        }
        case GenKind::tau:
        case GenKind::tau_prime: {
            bool primed = g.kind() == GenKind::tau_prime;
            // Along the flow direction u and across it v; Y is u-translation at speed s there.
            double u = primed ? p.y : p.x;
            double v = primed ? p.x : p.y;
            double s = primed ? -amp : amp;
            double uc = centered(u), vc = centered(v);
            double lim = 1.5 * e;
            bool exact = std::abs(vc) <= lim || (std::abs(uc) <= lim && std::abs(uc + s * t) <= lim);
            if (exact) {
                (primed ? p.y : p.x) += s * t;
                return p;
            }
            BandField f{amp, BandStep(g.eps()), primed};
            Vec2 x0 = f.value(p);
            if (x0.x == 0.0 && x0.y == 0.0) return p;  // zeros of the field are fixed points
            return midpoint_flow(f, t, p, jac);
        }
    }
    return p;
}

SurfacePoint MapEvaluator::eval(const Word& w, SurfacePoint pt) const {
    const auto& ls = w.letters();
    for (auto it = ls.rbegin(); it != ls.rend(); ++it)
        if (it->gen.chart() == pt.chart) pt.p = apply(it->gen, it->total_time(), pt.p);
    return pt;
}

std::pair<SurfacePoint, Mat2> MapEvaluator::eval_with_jacobian(const Word& w, SurfacePoint pt) const {
    Mat2 jac = Mat2::identity();
    const auto& ls = w.letters();
    for (auto it = ls.rbegin(); it != ls.rend(); ++it)
        if (it->gen.chart() == pt.chart) pt.p = apply(it->gen, it->total_time(), pt.p, jac);
    return {pt, jac};
}

VectorField generator_field(const Generator& g) {
    double t = g.time().value();
    const Epsilon& eps = g.eps();
    switch (g.kind()) {
        case GenKind::sigma:
        case GenKind::ham: {
            VectorField X = scaled(hamiltonian_field(make_H(g.bump_q(), g.bump_r(), false, eps)), t * g.amplitude());
            X.name = std::string(symbol(g.kind()));
            return g.kind() == GenKind::sigma ? restricted_to_strip(X, g.strip(), 0) : X;
        }
        case GenKind::sigma_prime:
        case GenKind::ham_prime: {
            VectorField X = scaled(hamiltonian_field(make_H(g.bump_q(), g.bump_r(), true, eps)), t * g.amplitude());
            X.name = std::string(symbol(g.kind()));
            return g.kind() == GenKind::sigma_prime ? restricted_to_strip(X, g.strip(), 1) : X;
        }
        case GenKind::tau: {
            VectorField X = field_Y(g.amplitude(), eps);
            return scaled(X, t);
        }
        case GenKind::tau_prime: {
            VectorField X = field_Y_prime(g.amplitude(), eps);
            return scaled(X, t);
        }
    }
    throw std::logic_error("unknown generator kind");
}

MapsEqualResult maps_equal(const Word& w1, const Word& w2, const SurfaceModel& model, const MapEvaluator& ev,
                           int samples_per_axis, double tol) {
    MapsEqualResult res;
    for (int chart = 0; chart < model.chart_count(); ++chart) {
        for (int i = 0; i < samples_per_axis; ++i) {
            for (int k = 0; k < samples_per_axis; ++k) {
                SurfacePoint pt{chart, {(i + 0.5) / samples_per_axis, (k + 0.5) / samples_per_axis}};
                double dist = torus_distance(ev.eval(w1, pt).p, ev.eval(w2, pt).p);
                if (dist > res.max_distance || (dist != dist)) {
                    res.max_distance = dist;
                    res.worst = pt;
                }
            }
        }
    }
    res.equal = res.max_distance <= tol;
    return res;
}

namespace {

double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

// Signed area between the origin o and the parabolic arc through a, m, b (m at the middle
// parameter): the chord term plus 4/3 of the triangle (a, m, b).
double arc_area(Vec2 o, Vec2 a, Vec2 m, Vec2 b) {
    return 0.5 * cross(a - o, b - o) + (2.0 / 3.0) * cross(m - a, b - m);
}

struct BoundaryIntegrator {
    const Word& w;
    const MapEvaluator& ev;
    SurfacePoint corner;
    double side;
    Vec2 origin;
    long evaluations = 0;
    long budget = 0;
    bool exhausted = false;

    // Parameter t in [0, 4) runs counter-clockwise along the four edges.
    [[nodiscard]] Vec2 boundary(double t) const {
        int edge = std::min(3, static_cast<int>(t));
        double s = side * (t - edge);
        Vec2 off = edge == 0 ? Vec2{s, 0} : edge == 1 ? Vec2{side, s} : edge == 2 ? Vec2{side - s, side}
                                                                                  : Vec2{0, side - s};
        return corner.p + off;
    }
    // Image of boundary(t) under the letters acting first, up to and including position `upto`.
    Vec2 partial(double t, std::size_t upto) {
        ++evaluations;
        const auto& ls = w.letters();
        Vec2 p = boundary(t);
        for (std::size_t i = 0; i <= upto && i < ls.size(); ++i) {
            const Letter& l = ls[ls.size() - 1 - i];
            if (l.gen.chart() == corner.chart) p = ev.apply(l.gen, l.total_time(), p);
        }
        return p;
    }
    Vec2 image(double t) { return partial(t, w.letters().size()); }

    // Adaptive Simpson on the shoelace integral over [t0, t1]: one parabolic arc against two,
    // with the Richardson correction.
    double segment(double t0, double t1, Vec2 a, Vec2 m, Vec2 b, double whole, double tol, int min_depth) {
        double tm = 0.5 * (t0 + t1);
        Vec2 ml = image(0.5 * (t0 + tm)), mr = image(0.5 * (tm + t1));
        double left = arc_area(origin, a, ml, m), right = arc_area(origin, m, mr, b);
        double diff = left + right - whole;
        if (evaluations > budget) exhausted = true;
        // Band flows carry relative rounding noise above an ulp; floor the attainable agreement.
        double noise = 1e-12 * (std::hypot(a.x - origin.x, a.y - origin.y) + std::hypot(b.x - origin.x, b.y - origin.y)) *
                       (std::hypot(m.x - a.x, m.y - a.y) + std::hypot(b.x - m.x, b.y - m.y));
        if (exhausted || (min_depth <= 0 && std::abs(diff) <= std::max(15.0 * tol, noise)))
            return left + right + diff / 15.0;
        return segment(t0, tm, a, ml, m, left, 0.5 * tol, min_depth - 1) +
               segment(tm, t1, m, mr, b, right, 0.5 * tol, min_depth - 1);
    }
};

struct Node {
    double t;
    Vec2 p;
};

}  // namespace

double image_area(const Word& w, SurfacePoint corner, double side, const MapEvaluator& ev, double rel_tol,
                  double max_chord, long max_evaluations) {
    BoundaryIntegrator bi{w, ev, corner, side, {}, 0, max_evaluations};
    // Push a closed boundary polyline through the letters one at a time, inserting parameters
    // wherever consecutive images drift more than max_chord apart. Strong shears stretch short
    // arcs into long needles; refining after every letter guarantees the later letters see
    // them densely sampled.
    std::vector<Node> nodes;
    const int initial = 16;
    for (int k = 0; k < 4 * initial; ++k) {
        double t = static_cast<double>(k) / initial;
        nodes.push_back({t, bi.boundary(t)});
    }
    const auto& ls = w.letters();
    for (std::size_t i = 0; i < ls.size() && !bi.exhausted; ++i) {
        const Letter& l = ls[ls.size() - 1 - i];
        if (l.gen.chart() != corner.chart) continue;
        for (Node& n : nodes) n.p = ev.apply(l.gen, l.total_time(), n.p);
        std::vector<Node> refined;
        refined.reserve(nodes.size());
        std::vector<Node> stack;
        for (std::size_t k = 0; k < nodes.size() && !bi.exhausted; ++k) {
            Node a = nodes[k];
            Node b = nodes[(k + 1) % nodes.size()];
            if (k + 1 == nodes.size()) b.t = 4.0;
            stack.assign({b});
            // Depth-first bisection of [a, b] until every chord is short.
            while (!stack.empty()) {
                Node top = stack.back();
                if (std::hypot(top.p.x - a.p.x, top.p.y - a.p.y) <= max_chord || top.t - a.t < 1e-12 ||
                    bi.evaluations > bi.budget) {
                    refined.push_back(a);
                    a = top;
                    stack.pop_back();
                    continue;
                }
                double tm = 0.5 * (a.t + top.t);
                stack.push_back({tm, bi.partial(tm, i)});
            }
            if (bi.evaluations > bi.budget) bi.exhausted = true;
        }
        nodes = std::move(refined);
    }
    if (bi.exhausted) return std::numeric_limits<double>::quiet_NaN();
    // Coordinates relative to the first image corner keep the cross products small.
    bi.origin = nodes.front().p;
    double area = 0.0;
    const double tol = 0.25 * rel_tol * side * side / static_cast<double>(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const Node& a = nodes[k];
        Node b = nodes[(k + 1) % nodes.size()];
        if (k + 1 == nodes.size()) b.t = 4.0;
        Vec2 m = bi.image(0.5 * (a.t + b.t));
        // Two forced bisections guard against one arc and two arcs agreeing by accident.
        area += bi.segment(a.t, b.t, a.p, m, b.p, arc_area(bi.origin, a.p, m, b.p), tol, 2);
    }
    return bi.exhausted ? std::numeric_limits<double>::quiet_NaN() : area;
}

GammaWords build_gamma_words(const SurfaceModel& model, const std::vector<Quadruple>& quads, long m) {
    if (static_cast<int>(quads.size()) != model.genus())
        throw std::invalid_argument("need one quadruple per chart");
    const Epsilon& eps = model.epsilon();
    GammaWords out;
    for (int j = 0; j < model.genus(); ++j) {
        out.f_m = out.f_m * sigma(j, quads[j], eps, m) * sigma_prime(j, quads[j], eps, m);
        out.g_alpha = out.g_alpha * tau(j, quads[j], eps);
        out.g_beta = out.g_beta * tau_prime(j, quads[j], eps);
    }
    out.gamma_m = commutator(out.f_m, out.g_alpha) * commutator(out.f_m, out.g_beta.inverse()).inverse();
    return out;
}

}  // namespace symplab
