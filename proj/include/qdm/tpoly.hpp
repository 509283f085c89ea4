#ifndef QDM_TPOLY_HPP
#define QDM_TPOLY_HPP

#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "qdm/matrix.hpp"
#include "qdm/novikov.hpp"

namespace qdm {

// Exponent vector of a t-monomial.
struct TMonomial {
    std::vector<int> m;

    TMonomial() = default;
    explicit TMonomial(std::vector<int> v) : m(std::move(v)) {}
    static TMonomial zero(int nvars) { return TMonomial(std::vector<int>(nvars, 0)); }
    static TMonomial unit(int nvars, int var) {
        TMonomial t = zero(nvars);
        t.m[var] = 1;
        return t;
    }

    int total() const { return std::accumulate(m.begin(), m.end(), 0); }
    bool is_zero() const { return total() == 0; }
    friend TMonomial operator+(const TMonomial& a, const TMonomial& b) {
        TMonomial r = a;
        for (size_t i = 0; i < r.m.size(); ++i) r.m[i] += b.m[i];
        return r;
    }
    auto operator<=>(const TMonomial&) const = default;

    std::string str() const {
        std::ostringstream os;
        os << "(";
        for (size_t i = 0; i < m.size(); ++i) os << (i ? "," : "") << m[i];
        os << ")";
        return os.str();
    }
};

// Polynomial in t-variables, truncated at total degree t_order, with
// Novikov-series coefficients.
template <class T>
class TPoly {
public:
    TPoly() = default;
    TPoly(int nvars, int t_order, SeriesContext qctx)
        : nvars_(nvars), t_order_(t_order), qctx_(std::move(qctx)) {}

    int nvars() const { return nvars_; }
    int t_order() const { return t_order_; }
    const SeriesContext& qcontext() const { return qctx_; }
    const std::map<TMonomial, NovikovSeries<T>>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    NovikovSeries<T> coeff(const TMonomial& mono) const {
        auto it = terms_.find(mono);
        return it == terms_.end() ? NovikovSeries<T>(qctx_) : it->second;
    }

    void set(const TMonomial& mono, NovikovSeries<T> s) {
        check_key(mono);
        if (s.is_zero())
            terms_.erase(mono);
        else
            terms_[mono] = std::move(s);
    }
    void add(const TMonomial& mono, const NovikovSeries<T>& s) {
        if (s.is_zero()) return;
        check_key(mono);
        auto it = terms_.find(mono);
        if (it == terms_.end()) {
            terms_.emplace(mono, s);
        } else {
            it->second += s;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    void add_term(const TMonomial& mono, const NovikovExponent& d, const T& v) {
        if (mono.total() > t_order_) return;
        NovikovSeries<T> s(qctx_);
        s.add(d, v);
        add(mono, s);
    }

    TPoly& operator+=(const TPoly& o) {
        require_compatible(o);
        for (const auto& [mono, s] : o.terms_) add(mono, s);
        return *this;
    }
    TPoly& operator-=(const TPoly& o) {
        require_compatible(o);
        for (const auto& [mono, s] : o.terms_) add(mono, -s);
        return *this;
    }
    TPoly operator-() const {
        TPoly r(nvars_, t_order_, qctx_);
        for (const auto& [mono, s] : terms_) r.terms_.emplace(mono, -s);
        return r;
    }
    friend TPoly operator+(TPoly a, const TPoly& b) { return a += b; }
    friend TPoly operator-(TPoly a, const TPoly& b) { return a -= b; }

    // d/dt^var
    TPoly dt(int var) const {
        TPoly r(nvars_, t_order_, qctx_);
        for (const auto& [mono, s] : terms_) {
            if (mono.m[var] == 0) continue;
            TMonomial lower = mono;
            lower.m[var] -= 1;
            NovikovSeries<T> scaled = s.map([&](const NovikovExponent&, const T& v) {
                T w = v;
                w *= Rational(mono.m[var]);
                return w;
            });
            r.add(lower, scaled);
        }
        return r;
    }

    // t^var * (this), truncating.
    TPoly mul_t(int var) const {
        TPoly r(nvars_, t_order_, qctx_);
        for (const auto& [mono, s] : terms_) {
            if (mono.total() + 1 > t_order_) continue;
            TMonomial higher = mono;
            higher.m[var] += 1;
            r.add(higher, s);
        }
        return r;
    }

    // Q^a d/dQ^a, termwise on the Novikov series.
    TPoly log_q(int a) const {
        TPoly r(nvars_, t_order_, qctx_);
        for (const auto& [mono, s] : terms_) r.add(mono, s.log_derivative(a));
        return r;
    }

    TPoly degree_part(int deg) const {
        TPoly r(nvars_, t_order_, qctx_);
        for (const auto& [mono, s] : terms_)
            if (mono.total() == deg) r.terms_.emplace(mono, s);
        return r;
    }
    TPoly truncate_t(int order) const {
        TPoly r(nvars_, order, qctx_);
        for (const auto& [mono, s] : terms_)
            if (mono.total() <= order) r.terms_.emplace(mono, s);
        return r;
    }
    TPoly with_t_order(int order) const {
        if (order < t_order_) return truncate_t(order);
        TPoly r(nvars_, order, qctx_);
        r.terms_ = terms_;
        return r;
    }
    NovikovSeries<T> at_t_zero() const { return coeff(TMonomial::zero(nvars_)); }
    int max_t_degree() const {
        int d = 0;
        for (const auto& [mono, s] : terms_) d = std::max(d, mono.total());
        return d;
    }

    friend bool operator==(const TPoly& a, const TPoly& b) {
        return a.terms_ == b.terms_;
    }

private:
    void check_key(const TMonomial& mono) const {
        if (static_cast<int>(mono.m.size()) != nvars_)
            throw ConfigError("t-monomial arity mismatch");
        for (int x : mono.m)
            if (x < 0) throw ConfigError("negative t-monomial exponent");
        if (mono.total() > t_order_)
            throw ConfigError("t-monomial beyond truncation order " + mono.str());
    }
    void require_compatible(const TPoly& o) const {
        if (nvars_ != o.nvars_ || t_order_ != o.t_order_ || !(qctx_ == o.qctx_))
            throw ConfigError("t-polynomial context mismatch");
    }

    int nvars_ = 0;
    int t_order_ = 0;
    SeriesContext qctx_;
    std::map<TMonomial, NovikovSeries<T>> terms_;
};

// Truncating product with possibly different coefficient types.
template <class A, class B>
auto tpoly_mul(const TPoly<A>& a, const TPoly<B>& b) {
    using R = std::remove_cvref_t<decltype(std::declval<const A&>() * std::declval<const B&>())>;
    if (a.nvars() != b.nvars() || a.t_order() != b.t_order() ||
        !(a.qcontext() == b.qcontext()))
        throw ConfigError("t-polynomial context mismatch");
    TPoly<R> r(a.nvars(), a.t_order(), a.qcontext());
    for (const auto& [ma, sa] : a.terms()) {
        for (const auto& [mb, sb] : b.terms()) {
            if (ma.total() + mb.total() > a.t_order()) continue;
            r.add(ma + mb, series_mul(sa, sb));
        }
    }
    return r;
}

inline TPoly<CoeffMatrix> operator*(const TPoly<CoeffMatrix>& a, const TPoly<CoeffMatrix>& b) {
    return tpoly_mul(a, b);
}

} // namespace qdm

#endif
