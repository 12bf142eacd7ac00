#include "symplab/number.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace symplab {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char ch : s)
        if (ch < '0' || ch > '9') return false;
    return true;
}

mpq_class parse_integer(std::string_view s) {
    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        neg = s[0] == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) throw std::invalid_argument("bad integer literal");
    mpz_class z(std::string(s), 10);
    return mpq_class(neg ? mpz_class(-z) : z);
}

mpq_class parse_decimal(std::string_view s) {
    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        neg = s[0] == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    auto epos = s.find_first_of("eE");
    if (epos != std::string_view::npos) {
        std::string_view es = s.substr(epos + 1);
        if (!es.empty() && es[0] == '+') es.remove_prefix(1);
        auto [ptr, ec] = std::from_chars(es.data(), es.data() + es.size(), exponent);
        if (ec != std::errc() || ptr != es.data() + es.size())
            throw std::invalid_argument("bad exponent");
        s = s.substr(0, epos);
    }
    std::string digits;
    auto dot = s.find('.');
    if (dot == std::string_view::npos) {
        digits = std::string(s);
    } else {
        digits = std::string(s.substr(0, dot)) + std::string(s.substr(dot + 1));
        exponent -= static_cast<long>(s.size() - dot - 1);
    }
    if (!all_digits(digits)) throw std::invalid_argument("bad decimal literal");
    if (exponent > 4096 || exponent < -4096) throw std::invalid_argument("exponent out of range");
    mpz_class num(digits, 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    mpq_class q = exponent >= 0 ? mpq_class(num * scale) : mpq_class(num, scale);
    q.canonicalize();
    return neg ? mpq_class(-q) : q;
}

}  // namespace

double to_double(const mpq_class& q) {
    // mpq get_d truncates; go through a decimal string so strtod rounds to nearest.
    if (q == 0) return 0.0;
    mpz_class num = abs(q.get_num());
    const mpz_class& den = q.get_den();
    long k = 40 - static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 10)) +
             static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 10));
    mpz_class p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(k)));
    mpz_class top = k >= 0 ? mpz_class(num * p10) : num;
    mpz_class bottom = k >= 0 ? den : mpz_class(den * p10);
    mpz_class quot, rem;
    mpz_tdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), top.get_mpz_t(), bottom.get_mpz_t());
    std::string digits = quot.get_str();
    long exp10 = -k;
    if (rem != 0) {
        digits += '1';  // sticky digit keeps exact ties from rounding the wrong way
        exp10 -= 1;
    }
    std::string text = (sgn(q) < 0 ? "-" : "") + digits + "e" + std::to_string(exp10);
    return std::strtod(text.c_str(), nullptr);
}

Number::Number(const mpq_class& q) : exact_(q) {
    exact_->canonicalize();
    sync();
}

Number Number::parse(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
    if (text.empty()) throw std::invalid_argument("empty number literal");
    auto slash = text.find('/');
    try {
        if (slash != std::string_view::npos) {
            mpq_class n = parse_integer(text.substr(0, slash));
            mpq_class d = parse_integer(text.substr(slash + 1));
            if (d == 0) throw std::invalid_argument("zero denominator");
            return Number(mpq_class(n / d));
        }
        return Number(parse_decimal(text));
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("invalid number literal '" + std::string(text) + "'");
    }
}

Number Number::rational(long num, long den) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Number(mpq_class(num, den));
}

double Number::value() const { return approx_; }

const mpq_class& Number::exact() const {
    if (!exact_) throw std::logic_error("number is not exact");
    return *exact_;
}

bool Number::is_zero() const { return exact_ ? *exact_ == 0 : approx_ == 0.0; }

int Number::sign() const {
    if (exact_) return sgn(*exact_);
    return (approx_ > 0) - (approx_ < 0);
}

std::string Number::str() const {
    if (exact_) return exact_->get_str();
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, approx_);
    (void)ec;
    std::string out(buf, ptr);
    // Keep floating values distinguishable from exact integers on re-parse.
    if (out.find_first_of(".eEn") == std::string::npos) out += ".0";
    return out;
}

Number Number::operator-() const {
    if (exact_) return Number(mpq_class(-*exact_));
    return Number(-approx_);
}

Number& Number::operator+=(const Number& o) {
    if (exact_ && o.exact_) {
        *exact_ += *o.exact_;
        sync();
    } else {
        approx_ = value() + o.value();
        exact_.reset();
    }
    return *this;
}

Number& Number::operator-=(const Number& o) {
    if (exact_ && o.exact_) {
        *exact_ -= *o.exact_;
        sync();
    } else {
        approx_ = value() - o.value();
        exact_.reset();
    }
    return *this;
}

Number& Number::operator*=(const Number& o) {
    if (exact_ && o.exact_) {
        *exact_ *= *o.exact_;
        sync();
    } else {
        approx_ = value() * o.value();
        exact_.reset();
    }
    return *this;
}

Number& Number::operator/=(const Number& o) {
    if (exact_ && o.exact_) {
        if (*o.exact_ == 0) throw std::domain_error("division by exact zero");
        *exact_ /= *o.exact_;
        sync();
    } else {
        approx_ = value() / o.value();
        exact_.reset();
    }
    return *this;
}

bool operator==(const Number& a, const Number& b) {
    if (a.exact_ && b.exact_) return *a.exact_ == *b.exact_;
    return a.value() == b.value();
}

bool operator<(const Number& a, const Number& b) {
    if (a.exact_ && b.exact_) return *a.exact_ < *b.exact_;
    return a.value() < b.value();
}

Number abs(const Number& x) { return x.sign() < 0 ? -x : x; }
Number min(const Number& a, const Number& b) { return b < a ? b : a; }
Number max(const Number& a, const Number& b) { return a < b ? b : a; }

long ceil_to_long(const Number& x) {
    if (x.is_exact()) {
        mpz_class z;
        mpz_cdiv_q(z.get_mpz_t(), x.exact().get_num_mpz_t(), x.exact().get_den_mpz_t());
        return z.get_si();
    }
    return static_cast<long>(std::ceil(x.value()));
}

}  // namespace symplab
