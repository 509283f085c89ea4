#ifndef QDM_COEFF_SCALAR_HPP
#define QDM_COEFF_SCALAR_HPP

#include <compare>
#include <map>
#include <sstream>
#include <string>

#include "qdm/errors.hpp"
#include "qdm/rational.hpp"

namespace qdm {

// Exponent pair of a scalar term: hbar^h * lambda^lam (h may be negative,
// lam is nonnegative).
struct HLKey {
    int h = 0;
    int lam = 0;
    auto operator<=>(const HLKey&) const = default;
};

// Element of Q[lambda][hbar, hbar^-1]: a finite Laurent polynomial in hbar
// whose coefficients are polynomials in lambda.  Zero terms are never stored.
class CoeffScalar {
public:
    CoeffScalar() = default;
    CoeffScalar(const Rational& c) { set({0, 0}, c); }
    CoeffScalar(long c) { set({0, 0}, Rational(c)); }

    static CoeffScalar term(const Rational& c, int h, int lam = 0) {
        CoeffScalar x;
        x.set({h, lam}, c);
        return x;
    }
    static CoeffScalar hbar(int power = 1) { return term(Rational(1), power); }
    static CoeffScalar lambda(int power = 1) { return term(Rational(1), 0, power); }

    bool is_zero() const { return terms_.empty(); }
    // True when the scalar is a plain hbar- and lambda-free constant (or zero).
    bool is_constant() const {
        return terms_.empty() ||
               (terms_.size() == 1 && terms_.begin()->first == HLKey{0, 0});
    }
    bool hbar_free() const {
        for (const auto& [k, v] : terms_) {
            if (k.h != 0) return false;
        }
        return true;
    }
    bool lambda_free() const {
        for (const auto& [k, v] : terms_) {
            if (k.lam != 0) return false;
        }
        return true;
    }

    // Coefficient of hbar^h * lambda^lam (zero if absent).
    Rational coeff(int h, int lam = 0) const {
        auto it = terms_.find({h, lam});
        return it == terms_.end() ? Rational() : it->second;
    }
    // The constant-part rational; throws unless is_constant().
    Rational as_rational() const {
        if (!is_constant())
            throw Error("NotAConstant", "scalar has hbar or lambda terms: " + str());
        return coeff(0, 0);
    }

    CoeffScalar& operator+=(const CoeffScalar& o) {
        for (const auto& [k, v] : o.terms_) add_term(k, v);
        return *this;
    }
    CoeffScalar& operator-=(const CoeffScalar& o) {
        for (const auto& [k, v] : o.terms_) add_term(k, -v);
        return *this;
    }
    CoeffScalar operator-() const {
        CoeffScalar r;
        for (const auto& [k, v] : terms_) r.terms_.emplace(k, -v);
        return r;
    }
    friend CoeffScalar operator+(CoeffScalar a, const CoeffScalar& b) { return a += b; }
    friend CoeffScalar operator-(CoeffScalar a, const CoeffScalar& b) { return a -= b; }
    friend CoeffScalar operator*(const CoeffScalar& a, const CoeffScalar& b) {
        CoeffScalar r;
        for (const auto& [ka, va] : a.terms_)
            for (const auto& [kb, vb] : b.terms_)
                r.add_term({ka.h + kb.h, ka.lam + kb.lam}, va * vb);
        return r;
    }
    CoeffScalar& operator*=(const CoeffScalar& o) { return *this = *this * o; }
    CoeffScalar& operator*=(const Rational& c) {
        if (c.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, v] : terms_) v *= c;
        return *this;
    }
    friend CoeffScalar operator*(CoeffScalar a, const Rational& c) { return a *= c; }
    friend CoeffScalar operator*(const Rational& c, CoeffScalar a) { return a *= c; }

    friend bool operator==(const CoeffScalar& a, const CoeffScalar& b) {
        return a.terms_ == b.terms_;
    }

    // Projection onto nonnegative hbar powers.
    CoeffScalar pi_plus() const {
        CoeffScalar r;
        for (const auto& [k, v] : terms_)
            if (k.h >= 0) r.terms_.emplace(k, v);
        return r;
    }
    CoeffScalar pi_minus() const {
        CoeffScalar r;
        for (const auto& [k, v] : terms_)
            if (k.h < 0) r.terms_.emplace(k, v);
        return r;
    }

    // Substitute hbar := value.  A pole at hbar = 0 is an error.
    CoeffScalar hbar_specialize(const Rational& value) const {
        CoeffScalar r;
        for (const auto& [k, v] : terms_) {
            if (k.h < 0) {
                if (value.is_zero())
                    throw NegativeHbarPole("hbar^" + std::to_string(k.h) +
                                           " term at hbar=0 in " + str());
                Rational p(1);
                for (int i = 0; i < -k.h; ++i) p *= value.inverse();
                r.add_term({0, k.lam}, v * p);
            } else {
                Rational p(1);
                for (int i = 0; i < k.h; ++i) p *= value;
                r.add_term({0, k.lam}, v * p);
            }
        }
        return r;
    }

    // Inverse of a single-term scalar c*hbar^h (the units of the coefficient
    // ring at lambda-degree zero).
    CoeffScalar unit_inverse() const {
        if (terms_.size() != 1 || terms_.begin()->first.lam != 0)
            throw NonInvertibleConstantTerm("not a unit in Q[lambda][h,h^-1]: " + str());
        const auto& [k, v] = *terms_.begin();
        return term(v.inverse(), -k.h);
    }

    int min_h() const {
        int m = 0;
        bool first = true;
        for (const auto& [k, v] : terms_) {
            if (first || k.h < m) m = k.h;
            first = false;
        }
        return m;
    }

    const std::map<HLKey, Rational>& terms() const { return terms_; }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [k, v] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << v.str();
            if (k.h != 0) os << "*h^" << k.h;
            if (k.lam != 0) os << "*lam^" << k.lam;
        }
        return os.str();
    }

private:
    void set(HLKey k, const Rational& v) {
        if (!v.is_zero()) terms_[k] = v;
    }
    void add_term(HLKey k, const Rational& v) {
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            if (!v.is_zero()) terms_.emplace(k, v);
        } else {
            it->second += v;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    std::map<HLKey, Rational> terms_;
};

} // namespace qdm

#endif
