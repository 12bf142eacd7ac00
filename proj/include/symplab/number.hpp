#pragma once
/// @file number.hpp
/// Scalar that is an exact rational when built from rational data and a
/// double otherwise. Arithmetic stays exact while both operands are exact.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace symplab {

/// Nearest double to an exact rational.
double to_double(const mpq_class& q);

class Number {
public:
    Number() : exact_(mpq_class(0)) {}
    Number(int v) : exact_(mpq_class(v)), approx_(v) {}  // NOLINT(google-explicit-constructor)
    Number(long v) : exact_(mpq_class(v)), approx_(static_cast<double>(v)) {}  // NOLINT(google-explicit-constructor)
    Number(double v) : approx_(v) {}  // NOLINT(google-explicit-constructor)
    explicit Number(const mpq_class& q);

    /// Parses "p", "p/q", decimal literals ("0.05", "-1.5e-3") exactly;
    /// "inf"/"nan" and anything else are rejected.
    static Number parse(std::string_view text);
    static Number rational(long num, long den);

    [[nodiscard]] bool is_exact() const { return exact_.has_value(); }
    [[nodiscard]] double value() const;
    /// Exact value; throws std::logic_error if the number is floating.
    [[nodiscard]] const mpq_class& exact() const;
    [[nodiscard]] bool is_zero() const;
    [[nodiscard]] int sign() const;
    /// Canonical text: "p", "p/q" for exact numbers, shortest round-trip decimal otherwise.
    [[nodiscard]] std::string str() const;

    Number operator-() const;
    Number& operator+=(const Number& o);
    Number& operator-=(const Number& o);
    Number& operator*=(const Number& o);
    Number& operator/=(const Number& o);

    friend Number operator+(Number a, const Number& b) { return a += b; }
    friend Number operator-(Number a, const Number& b) { return a -= b; }
    friend Number operator*(Number a, const Number& b) { return a *= b; }
    friend Number operator/(Number a, const Number& b) { return a /= b; }

    /// Exact comparison when both sides are exact, value comparison otherwise.
    friend bool operator==(const Number& a, const Number& b);
    friend bool operator<(const Number& a, const Number& b);
    friend bool operator>(const Number& a, const Number& b) { return b < a; }
    friend bool operator<=(const Number& a, const Number& b) { return !(b < a); }
    friend bool operator>=(const Number& a, const Number& b) { return !(a < b); }

private:
    void sync() { approx_ = to_double(*exact_); }
    std::optional<mpq_class> exact_;
    double approx_ = 0.0;
};

Number abs(const Number& x);
Number min(const Number& a, const Number& b);
Number max(const Number& a, const Number& b);
/// Smallest integer >= x (exact for exact x).
long ceil_to_long(const Number& x);

}  // namespace symplab
