#include "accord/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace accord {

Rational::Rational(long num, long den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::invalid_argument("rational division by zero");
    return Rational::raw(a.v_ / b.v_);
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::invalid_argument("rational division by zero");
    v_ /= o.v_;
    return *this;
}

Rational Rational::from_string(std::string_view s) {
    auto fail = [&]() -> Rational {
        throw std::invalid_argument("malformed rational literal: '" + std::string(s) + "'");
    };
    size_t pos = 0;
    bool neg = false;
    if (pos < s.size() && s[pos] == '-') {
        neg = true;
        ++pos;
    }
    size_t num_begin = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == num_begin) return fail();
    mpz_class num(std::string(s.substr(num_begin, pos - num_begin)), 10);
    mpz_class den(1);
    if (pos < s.size()) {
        if (s[pos] != '/') return fail();
        ++pos;
        size_t den_begin = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == den_begin || pos != s.size()) return fail();
        den = mpz_class(std::string(s.substr(den_begin, pos - den_begin)), 10);
        if (den == 0) return fail();
    }
    if (neg) num = -num;
    mpq_class q(num, den);
    q.canonicalize();
    return Rational(std::move(q));
}

std::string Rational::str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational pow(const Rational& base, unsigned exp) {
    Rational out(1);
    Rational b = base;
    while (exp > 0) {
        if (exp & 1u) out *= b;
        b *= b;
        exp >>= 1u;
    }
    return out;
}

}  // namespace accord
