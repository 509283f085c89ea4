#ifndef QDM_MATRIX_HPP
#define QDM_MATRIX_HPP

#include <string>
#include <vector>

#include "qdm/coeff_scalar.hpp"
#include "qdm/novikov.hpp"

namespace qdm {

// Cohomology-valued vector: n components, each a CoeffScalar.
class CoeffVector {
public:
    CoeffVector() = default;
    explicit CoeffVector(int n) : v_(n) {}
    static CoeffVector basis(int n, int i) {
        CoeffVector e(n);
        e.v_[i] = CoeffScalar(1);
        return e;
    }

    int size() const { return static_cast<int>(v_.size()); }
    CoeffScalar& operator[](int i) { return v_[i]; }
    const CoeffScalar& operator[](int i) const { return v_[i]; }

    bool is_zero() const {
        for (const auto& x : v_)
            if (!x.is_zero()) return false;
        return true;
    }

    CoeffVector& operator+=(const CoeffVector& o) {
        resize_to(o);
        if (o.size() == 0) return *this;
        for (int i = 0; i < size(); ++i) v_[i] += o.v_[i];
        return *this;
    }
    CoeffVector& operator-=(const CoeffVector& o) {
        resize_to(o);
        if (o.size() == 0) return *this;
        for (int i = 0; i < size(); ++i) v_[i] -= o.v_[i];
        return *this;
    }
    CoeffVector operator-() const {
        CoeffVector r(size());
        for (int i = 0; i < size(); ++i) r.v_[i] = -v_[i];
        return r;
    }
    friend CoeffVector operator+(CoeffVector a, const CoeffVector& b) { return a += b; }
    friend CoeffVector operator-(CoeffVector a, const CoeffVector& b) { return a -= b; }
    CoeffVector& operator*=(const CoeffScalar& c) {
        for (auto& x : v_) x *= c;
        return *this;
    }
    CoeffVector& operator*=(const Rational& c) {
        for (auto& x : v_) x *= c;
        return *this;
    }
    friend CoeffVector operator*(const CoeffScalar& c, CoeffVector a) { return a *= c; }
    friend bool operator==(const CoeffVector& a, const CoeffVector& b) {
        if (a.size() == b.size()) return a.v_ == b.v_;
        return (a - b).is_zero();
    }

    CoeffVector pi_plus() const {
        CoeffVector r(size());
        for (int i = 0; i < size(); ++i) r.v_[i] = v_[i].pi_plus();
        return r;
    }

private:
    // A default-constructed vector acts as zero of any dimension.
    void resize_to(const CoeffVector& o) {
        if (size() == 0 && o.size() != 0) v_.resize(o.size());
        if (size() != o.size() && o.size() != 0)
            throw ConfigError("vector dimension mismatch");
    }
    std::vector<CoeffScalar> v_;
};

// Square matrix with CoeffScalar entries (row-major).
class CoeffMatrix {
public:
    CoeffMatrix() = default;
    explicit CoeffMatrix(int n) : n_(n), e_(static_cast<size_t>(n) * n) {}
    static CoeffMatrix identity(int n) {
        CoeffMatrix m(n);
        for (int i = 0; i < n; ++i) m.at(i, i) = CoeffScalar(1);
        return m;
    }

    int dim() const { return n_; }
    CoeffScalar& at(int i, int j) { return e_[static_cast<size_t>(i) * n_ + j]; }
    const CoeffScalar& at(int i, int j) const { return e_[static_cast<size_t>(i) * n_ + j]; }

    bool is_zero() const {
        for (const auto& x : e_)
            if (!x.is_zero()) return false;
        return true;
    }
    bool is_identity() const {
        if (n_ == 0) return true;
        return *this == identity(n_);
    }
    bool hbar_free() const {
        for (const auto& x : e_)
            if (!x.hbar_free()) return false;
        return true;
    }

    CoeffMatrix& operator+=(const CoeffMatrix& o) {
        resize_to(o);
        if (o.n_ == 0) return *this;
        for (size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
        return *this;
    }
    CoeffMatrix& operator-=(const CoeffMatrix& o) {
        resize_to(o);
        if (o.n_ == 0) return *this;
        for (size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
        return *this;
    }
    CoeffMatrix operator-() const {
        CoeffMatrix r(n_);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = -e_[i];
        return r;
    }
    friend CoeffMatrix operator+(CoeffMatrix a, const CoeffMatrix& b) { return a += b; }
    friend CoeffMatrix operator-(CoeffMatrix a, const CoeffMatrix& b) { return a -= b; }

    CoeffMatrix& operator*=(const CoeffScalar& c) {
        for (auto& x : e_) x *= c;
        return *this;
    }
    CoeffMatrix& operator*=(const Rational& c) {
        for (auto& x : e_) x *= c;
        return *this;
    }
    friend CoeffMatrix operator*(const CoeffScalar& c, CoeffMatrix a) { return a *= c; }

    friend CoeffMatrix operator*(const CoeffMatrix& a, const CoeffMatrix& b) {
        if (a.n_ == 0) return b;
        if (b.n_ == 0) return a.zero_like();
        if (a.n_ != b.n_) throw ConfigError("matrix dimension mismatch");
        CoeffMatrix r(a.n_);
        for (int i = 0; i < a.n_; ++i)
            for (int k = 0; k < a.n_; ++k) {
                const CoeffScalar& aik = a.at(i, k);
                if (aik.is_zero()) continue;
                for (int j = 0; j < a.n_; ++j) {
                    const CoeffScalar& bkj = b.at(k, j);
                    if (bkj.is_zero()) continue;
                    r.at(i, j) += aik * bkj;
                }
            }
        return r;
    }
    CoeffMatrix& operator*=(const CoeffMatrix& o) { return *this = *this * o; }

    friend CoeffVector operator*(const CoeffMatrix& m, const CoeffVector& v) {
        if (m.n_ == 0) return v.is_zero() ? v : throw ConfigError("zero-dim matrix times vector");
        CoeffVector r(m.n_);
        if (v.size() == 0) return r;
        if (v.size() != m.n_) throw ConfigError("matrix/vector dimension mismatch");
        for (int i = 0; i < m.n_; ++i)
            for (int j = 0; j < m.n_; ++j) {
                const CoeffScalar& mij = m.at(i, j);
                if (mij.is_zero() || v[j].is_zero()) continue;
                r[i] += mij * v[j];
            }
        return r;
    }

    friend bool operator==(const CoeffMatrix& a, const CoeffMatrix& b) {
        if (a.n_ == b.n_) return a.e_ == b.e_;
        if (a.n_ == 0) return b.is_zero();
        if (b.n_ == 0) return a.is_zero();
        return false;
    }

    CoeffMatrix pi_plus() const {
        CoeffMatrix r(n_);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i].pi_plus();
        return r;
    }
    CoeffMatrix hbar_specialize(const Rational& value) const {
        CoeffMatrix r(n_);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i].hbar_specialize(value);
        return r;
    }
    CoeffVector column(int j) const {
        CoeffVector c(n_);
        for (int i = 0; i < n_; ++i) c[i] = at(i, j);
        return c;
    }
    void set_column(int j, const CoeffVector& c) {
        for (int i = 0; i < n_; ++i) at(i, j) = c[i];
    }

private:
    CoeffMatrix zero_like() const { return CoeffMatrix(n_); }
    // A default-constructed matrix acts as zero of any dimension.
    void resize_to(const CoeffMatrix& o) {
        if (n_ == 0 && o.n_ != 0) {
            n_ = o.n_;
            e_.resize(static_cast<size_t>(n_) * n_);
        }
        if (n_ != o.n_ && o.n_ != 0) throw ConfigError("matrix dimension mismatch");
    }

    int n_ = 0;
    std::vector<CoeffScalar> e_;
};

using MatrixSeries = NovikovSeries<CoeffMatrix>;
using VectorSeries = NovikovSeries<CoeffVector>;
using ScalarSeries = NovikovSeries<CoeffScalar>;

inline MatrixSeries identity_series(const SeriesContext& ctx, int n) {
    MatrixSeries s(ctx);
    s.set(NovikovExponent::zero(ctx.rank), CoeffMatrix::identity(n));
    return s;
}

template <class T>
NovikovSeries<T> pi_plus(const NovikovSeries<T>& s) {
    return s.map([](const NovikovExponent&, const T& v) { return v.pi_plus(); });
}

// Entrywise constant-term inversion over the Laurent ring; supports any
// matrix whose Gaussian elimination needs only unit pivots (c * hbar^k).
CoeffMatrix invert_constant_term(const CoeffMatrix& m);

// Series inverse; the d = 0 coefficient must be invertible (identity in
// practice).  Satisfies S * T = T * S = id through the truncation order.
MatrixSeries series_invert(const MatrixSeries& s);

} // namespace qdm

#endif
