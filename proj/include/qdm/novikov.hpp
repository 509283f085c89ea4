#ifndef QDM_NOVIKOV_HPP
#define QDM_NOVIKOV_HPP

#include <algorithm>
#include <compare>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "qdm/errors.hpp"
#include "qdm/rational.hpp"

namespace qdm {

// Effective curve degree d = (d_1,...,d_r), componentwise nonnegative.
struct NovikovExponent {
    std::vector<int> d;

    NovikovExponent() = default;
    explicit NovikovExponent(std::vector<int> v) : d(std::move(v)) {}
    static NovikovExponent zero(int r) { return NovikovExponent(std::vector<int>(r, 0)); }

    int rank() const { return static_cast<int>(d.size()); }
    bool is_zero() const {
        for (int x : d)
            if (x != 0) return false;
        return true;
    }
    int weighted_degree(const std::vector<int>& weights) const {
        int s = 0;
        for (size_t i = 0; i < d.size(); ++i) s += weights[i] * d[i];
        return s;
    }
    friend NovikovExponent operator+(const NovikovExponent& a, const NovikovExponent& b) {
        NovikovExponent r = a;
        for (size_t i = 0; i < r.d.size(); ++i) r.d[i] += b.d[i];
        return r;
    }
    friend NovikovExponent operator-(const NovikovExponent& a, const NovikovExponent& b) {
        NovikovExponent r = a;
        for (size_t i = 0; i < r.d.size(); ++i) r.d[i] -= b.d[i];
        return r;
    }
    bool componentwise_leq(const NovikovExponent& o) const {
        for (size_t i = 0; i < d.size(); ++i)
            if (d[i] > o.d[i]) return false;
        return true;
    }
    auto operator<=>(const NovikovExponent&) const = default;

    std::string str() const {
        std::ostringstream os;
        os << "(";
        for (size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
        os << ")";
        return os.str();
    }
};

// Truncation context shared by all series in one computation.
struct SeriesContext {
    int rank = 1;                  // number of Novikov variables
    int truncation = 0;            // weighted-degree bound D
    std::vector<int> weights;      // positive weights w_a

    SeriesContext() = default;
    SeriesContext(int r, int D) : rank(r), truncation(D), weights(r, 1) {}
    SeriesContext(int r, int D, std::vector<int> w)
        : rank(r), truncation(D), weights(std::move(w)) {
        if (static_cast<int>(weights.size()) != r)
            throw ConfigError("weights length does not match rank");
        for (int w_ : weights)
            if (w_ <= 0) throw ConfigError("weights must be positive");
    }
    bool operator==(const SeriesContext&) const = default;

    bool admits(const NovikovExponent& e) const {
        return e.weighted_degree(weights) <= truncation;
    }
    // All exponents with weighted degree <= truncation, in sorted order.
    std::vector<NovikovExponent> exponents() const {
        std::vector<NovikovExponent> out;
        NovikovExponent cur = NovikovExponent::zero(rank);
        std::function<void(int, int)> rec = [&](int pos, int used) {
            if (pos == rank) {
                out.push_back(cur);
                return;
            }
            for (int v = 0; used + v * weights[pos] <= truncation; ++v) {
                cur.d[pos] = v;
                rec(pos + 1, used + v * weights[pos]);
            }
            cur.d[pos] = 0;
        };
        rec(0, 0);
        std::sort(out.begin(), out.end());
        return out;
    }
    // Same set, ordered by increasing weighted degree (recursion order).
    std::vector<NovikovExponent> exponents_by_degree() const {
        std::vector<NovikovExponent> out = exponents();
        std::stable_sort(out.begin(), out.end(),
                         [this](const NovikovExponent& a, const NovikovExponent& b) {
                             return a.weighted_degree(weights) < b.weighted_degree(weights);
                         });
        return out;
    }
};

// Truncated formal series over the Mori-cone lattice with coefficients T.
// T must provide is_zero(), +=, unary -, and *.
template <class T>
class NovikovSeries {
public:
    NovikovSeries() = default;
    explicit NovikovSeries(SeriesContext ctx) : ctx_(std::move(ctx)) {}

    const SeriesContext& context() const { return ctx_; }
    const std::map<NovikovExponent, T>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    T coeff(const NovikovExponent& e) const {
        auto it = coeffs_.find(e);
        return it == coeffs_.end() ? T{} : it->second;
    }
    const T* find(const NovikovExponent& e) const {
        auto it = coeffs_.find(e);
        return it == coeffs_.end() ? nullptr : &it->second;
    }

    void set(const NovikovExponent& e, T value) {
        check_key(e);
        if (value.is_zero())
            coeffs_.erase(e);
        else
            coeffs_[e] = std::move(value);
    }
    void add(const NovikovExponent& e, const T& value) {
        if (value.is_zero()) return;
        check_key(e);
        auto it = coeffs_.find(e);
        if (it == coeffs_.end()) {
            coeffs_.emplace(e, value);
        } else {
            it->second += value;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }

    NovikovSeries& operator+=(const NovikovSeries& o) {
        require_same_context(o);
        for (const auto& [e, v] : o.coeffs_) add(e, v);
        return *this;
    }
    NovikovSeries& operator-=(const NovikovSeries& o) {
        require_same_context(o);
        for (const auto& [e, v] : o.coeffs_) add(e, -v);
        return *this;
    }
    NovikovSeries operator-() const {
        NovikovSeries r(ctx_);
        for (const auto& [e, v] : coeffs_) r.coeffs_.emplace(e, -v);
        return r;
    }
    friend NovikovSeries operator+(NovikovSeries a, const NovikovSeries& b) { return a += b; }
    friend NovikovSeries operator-(NovikovSeries a, const NovikovSeries& b) { return a -= b; }

    // Truncating product; terms beyond the weighted-degree bound are dropped.
    friend NovikovSeries operator*(const NovikovSeries& a, const NovikovSeries& b) {
        a.require_same_context(b);
        NovikovSeries r(a.ctx_);
        for (const auto& [ea, va] : a.coeffs_) {
            int da = ea.weighted_degree(a.ctx_.weights);
            for (const auto& [eb, vb] : b.coeffs_) {
                if (da + eb.weighted_degree(a.ctx_.weights) > a.ctx_.truncation) continue;
                r.add(ea + eb, va * vb);
            }
        }
        return r;
    }
    NovikovSeries& operator*=(const NovikovSeries& o) { return *this = *this * o; }

    // Apply f to every coefficient, dropping zeros.
    template <class F>
    NovikovSeries map(F&& f) const {
        NovikovSeries r(ctx_);
        for (const auto& [e, v] : coeffs_) r.set(e, f(e, v));
        return r;
    }

    // Q^a d/dQ^a: multiplies the Q^d coefficient by d_a.
    NovikovSeries log_derivative(int a) const;

    // Restrict to a smaller truncation order (for truncation-stability checks).
    NovikovSeries truncated(int order) const {
        SeriesContext c = ctx_;
        c.truncation = order;
        NovikovSeries r(c);
        for (const auto& [e, v] : coeffs_)
            if (c.admits(e)) r.coeffs_.emplace(e, v);
        return r;
    }

    friend bool operator==(const NovikovSeries& a, const NovikovSeries& b) {
        return a.ctx_ == b.ctx_ && a.coeffs_ == b.coeffs_;
    }

private:
    void check_key(const NovikovExponent& e) const {
        if (e.rank() != ctx_.rank)
            throw ConfigError("Novikov exponent rank mismatch");
        for (int x : e.d)
            if (x < 0) throw ConfigError("negative Novikov exponent " + e.str());
        if (!ctx_.admits(e))
            throw ConfigError("exponent " + e.str() + " beyond truncation order");
    }
    void require_same_context(const NovikovSeries& o) const {
        if (!(ctx_ == o.ctx_))
            throw ConfigError("series context mismatch (truncation/weights)");
    }

    SeriesContext ctx_;
    std::map<NovikovExponent, T> coeffs_;
};

// Truncating product of series with possibly different coefficient types
// (e.g. scalar series times matrix series).
template <class A, class B>
auto series_mul(const NovikovSeries<A>& a, const NovikovSeries<B>& b) {
    using R = std::remove_cvref_t<decltype(std::declval<const A&>() * std::declval<const B&>())>;
    if (!(a.context() == b.context()))
        throw ConfigError("series context mismatch (truncation/weights)");
    const SeriesContext& ctx = a.context();
    NovikovSeries<R> r(ctx);
    for (const auto& [ea, va] : a.coeffs()) {
        int da = ea.weighted_degree(ctx.weights);
        for (const auto& [eb, vb] : b.coeffs()) {
            if (da + eb.weighted_degree(ctx.weights) > ctx.truncation) continue;
            r.add(ea + eb, va * vb);
        }
    }
    return r;
}

template <class T>
NovikovSeries<T> NovikovSeries<T>::log_derivative(int a) const {
    NovikovSeries r(ctx_);
    for (const auto& [e, v] : coeffs_) {
        if (e.d[a] == 0) continue;
        T w = v;
        w *= Rational(e.d[a]);
        r.coeffs_.emplace(e, std::move(w));
    }
    return r;
}

} // namespace qdm

#endif
