#ifndef QDM_RATIONAL_HPP
#define QDM_RATIONAL_HPP

#include <compare>
#include <string>

#include <gmpxx.h>

#include "qdm/errors.hpp"

namespace qdm {

// Exact rational number, always kept in canonical form:
// gcd(|num|, den) = 1 and den >= 1.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}
    Rational(long n, long d) : v_(n, d) {
        if (d == 0) throw Error("DivisionByZero", "rational with zero denominator");
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    // Decimal-string constructor; accepts "num" or "num/den".
    static Rational parse(const std::string& s) {
        mpq_class q(s, 10);
        if (q.get_den() == 0) throw Error("DivisionByZero", "rational with zero denominator");
        q.canonicalize();
        return Rational(q);
    }
    static Rational from_strings(const std::string& num, const std::string& den) {
        mpq_class q(mpz_class(num, 10), mpz_class(den, 10));
        if (q.get_den() == 0) throw Error("DivisionByZero", "rational with zero denominator");
        q.canonicalize();
        return Rational(q);
    }

    bool is_zero() const { return v_ == 0; }
    bool is_integer() const { return v_.get_den() == 1; }

    std::string num_string() const { return v_.get_num().get_str(); }
    std::string den_string() const { return v_.get_den().get_str(); }
    std::string str() const {
        return is_integer() ? num_string() : num_string() + "/" + den_string();
    }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw Error("DivisionByZero", "rational division by zero");
        v_ /= o.v_;
        return *this;
    }
    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }

    Rational inverse() const {
        if (is_zero()) throw Error("DivisionByZero", "inverse of zero");
        return Rational(mpq_class(1) / v_);
    }

    const mpq_class& raw() const { return v_; }

private:
    mpq_class v_;
};

} // namespace qdm

#endif
