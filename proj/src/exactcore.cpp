#include "qdm/matrix.hpp"

namespace qdm {

CoeffMatrix invert_constant_term(const CoeffMatrix& m) {
    const int n = m.dim();
    if (n == 0) throw NonInvertibleConstantTerm("empty matrix");
    if (m.is_identity()) return m;

    // Gauss-Jordan over the Laurent ring; pivots must be units c * hbar^k.
    CoeffMatrix a = m;
    CoeffMatrix inv = CoeffMatrix::identity(n);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int row = col; row < n; ++row) {
            const CoeffScalar& x = a.at(row, col);
            if (x.is_zero()) continue;
            if (x.terms().size() == 1 && x.terms().begin()->first.lam == 0) {
                pivot = row;
                break;
            }
        }
        if (pivot < 0)
            throw NonInvertibleConstantTerm("no unit pivot in column " +
                                            std::to_string(col));
        if (pivot != col) {
            for (int j = 0; j < n; ++j) {
                std::swap(a.at(pivot, j), a.at(col, j));
                std::swap(inv.at(pivot, j), inv.at(col, j));
            }
        }
        CoeffScalar piv_inv = a.at(col, col).unit_inverse();
        for (int j = 0; j < n; ++j) {
            a.at(col, j) *= piv_inv;
            inv.at(col, j) *= piv_inv;
        }
        for (int row = 0; row < n; ++row) {
            if (row == col) continue;
            CoeffScalar f = a.at(row, col);
            if (f.is_zero()) continue;
            for (int j = 0; j < n; ++j) {
                a.at(row, j) -= f * a.at(col, j);
                inv.at(row, j) -= f * inv.at(col, j);
            }
        }
    }
    return inv;
}

MatrixSeries series_invert(const MatrixSeries& s) {
    const SeriesContext& ctx = s.context();
    const NovikovExponent zero = NovikovExponent::zero(ctx.rank);
    const CoeffMatrix* head = s.find(zero);
    if (head == nullptr)
        throw NonInvertibleConstantTerm("series has zero constant term");
    CoeffMatrix head_inv = invert_constant_term(*head);

    // T_d = -S_0^{-1} * sum_{0 < f <= d} S_f T_{d-f}, degree by degree.
    MatrixSeries inv(ctx);
    inv.set(zero, head_inv);
    for (const NovikovExponent& d : ctx.exponents_by_degree()) {
        if (d.is_zero()) continue;
        CoeffMatrix acc;
        for (const auto& [f, sf] : s.coeffs()) {
            if (f.is_zero() || !f.componentwise_leq(d)) continue;
            const CoeffMatrix* t = inv.find(d - f);
            if (t != nullptr) acc += sf * *t;
        }
        if (!acc.is_zero()) inv.set(d, -(head_inv * acc));
    }
    return inv;
}

} // namespace qdm
