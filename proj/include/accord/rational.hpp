#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace accord {

// Arbitrary-precision exact rational. Always kept in lowest terms with a
// positive denominator; every comparison and arithmetic operation is exact.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(int n) : v_(n) {}
    Rational(long n) : v_(n) {}
    Rational(long num, long den);
    explicit Rational(mpq_class q) : v_(std::move(q)) { v_.canonicalize(); }

    // Accepts "p/q" or "p" with an optional leading minus on the numerator
    // only; rejects empty strings, stray characters, signs after the slash,
    // and zero denominators.
    static Rational from_string(std::string_view s);

    std::string str() const;
    double to_double() const { return v_.get_d(); }

    const mpz_class& num() const { return v_.get_num(); }
    const mpz_class& den() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    int sign() const { return sgn(v_); }
    Rational abs() const { return Rational(mpq_class(::abs(v_))); }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational::raw(a.v_ + b.v_); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational::raw(a.v_ - b.v_); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational::raw(a.v_ * b.v_); }
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational operator-() const { return Rational::raw(-v_); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

private:
    // Arithmetic on canonical operands yields canonical results, so no
    // re-canonicalization is needed on this path.
    static Rational raw(mpq_class q) {
        Rational r;
        r.v_ = std::move(q);
        return r;
    }

    mpq_class v_;
};

// Exact power with integer exponent >= 0.
Rational pow(const Rational& base, unsigned exp);

}  // namespace accord
