#include "qdm/ifunction.hpp"

namespace qdm {

namespace {

int pair_with(const std::vector<int>& row, const NovikovExponent& d) {
    int s = 0;
    for (size_t a = 0; a < row.size(); ++a) s += row[a] * d.d[a];
    return s;
}

// (U + nu*hbar)^{-1} v with U nilpotent, nu != 0: the finite expansion
// sum_m (-1)^m nu^{-(m+1)} hbar^{-(m+1)} U^m v.
CoeffVector apply_inverse_linear(const CoeffMatrix& u, int nu, const CoeffVector& v) {
    CoeffVector out(v.size());
    CoeffVector cur = v;
    int m = 0;
    while (!cur.is_zero()) {
        Rational c(1, nu);
        for (int i = 0; i < m; ++i) c *= Rational(-1, nu);
        out += CoeffScalar::term(c, -(m + 1)) * cur;
        cur = u * cur;
        ++m;
        if (m > v.size() + 1)
            throw ValidationError("non-nilpotent class in inverse toric factor");
    }
    return out;
}

// (U + nu*hbar + [lambda]) v
CoeffVector apply_linear(const CoeffMatrix& u, int nu, bool with_lambda,
                         const CoeffVector& v) {
    CoeffVector out = u * v;
    if (nu != 0) out += CoeffScalar::term(Rational(nu), 1) * v;
    if (with_lambda) out += CoeffScalar::lambda() * v;
    return out;
}

CoeffVector apply_bundle_factors(const GeometryInput& geom,
                                 const std::vector<std::vector<int>>& bundle_rows,
                                 const NovikovExponent& d, LambdaMode mode,
                                 CoeffVector v) {
    const bool with_lambda = (mode == LambdaMode::Poly);
    for (const auto& row : bundle_rows) {
        const int c = pair_with(row, d);
        if (c < 0)
            throw NonConvexAtLambdaZero(
                "bundle factor with negative pairing " + std::to_string(c) +
                " at degree " + d.str() +
                " requires the lambda^{-1}-series regime");
        CoeffMatrix vm = geom.presentation.class_matrix(row);
        for (int nu = 1; nu <= c; ++nu) v = apply_linear(vm, nu, with_lambda, v);
    }
    return v;
}

} // namespace

VectorSeries ladder_operator(const GeometryInput& geom, int a, const VectorSeries& v) {
    CoeffMatrix ma = geom.presentation.cup_matrix(a);
    VectorSeries out(v.context());
    for (const auto& [d, coeff] : v.coeffs()) {
        CoeffVector w = ma * coeff;
        if (d.d[a] != 0) w += CoeffScalar::term(Rational(d.d[a]), 1) * coeff;
        out.add(d, w);
    }
    return out;
}

MatrixSeries ladder_operator(const GeometryInput& geom, int a, const MatrixSeries& m) {
    CoeffMatrix ma = geom.presentation.cup_matrix(a);
    MatrixSeries out(m.context());
    for (const auto& [d, coeff] : m.coeffs()) {
        CoeffMatrix w = ma * coeff;
        if (d.d[a] != 0) {
            CoeffMatrix scaled = coeff;
            scaled *= CoeffScalar::term(Rational(d.d[a]), 1);
            w += scaled;
        }
        out.add(d, w);
    }
    return out;
}

CohVectorSeries i_function(const GeometryInput& geom, const SeriesContext& ctx,
                           LambdaMode lambda_mode) {
    geom.validate();
    if (ctx.rank != geom.r) throw ConfigError("series rank does not match geometry");
    if (lambda_mode == LambdaMode::Zero && !geom.convex)
        throw NonConvexAtLambdaZero("lambda=0 mode requires a convex bundle");

    const int n = geom.dim();
    VectorSeries series(ctx);
    for (const NovikovExponent& d : ctx.exponents()) {
        CoeffVector v = CoeffVector::basis(n, 0);
        for (const auto& row : geom.weight_rows) {
            const int c = pair_with(row, d);
            CoeffMatrix u = geom.presentation.class_matrix(row);
            if (c >= 0) {
                for (int nu = 1; nu <= c; ++nu) v = apply_inverse_linear(u, nu, v);
            } else {
                // Includes the nu = 0 factor u_i, which may kill the term.
                for (int nu = c + 1; nu <= 0; ++nu) v = apply_linear(u, nu, false, v);
            }
            if (v.is_zero()) break;
        }
        if (!v.is_zero())
            v = apply_bundle_factors(geom, geom.bundle_rows, d, lambda_mode, v);
        series.add(d, v);
    }
    return CohVectorSeries{std::move(series), &geom};
}

CohVectorSeries hypergeometric_modification(const CohVectorSeries& series,
                                            const std::vector<std::vector<int>>& bundle_rows,
                                            LambdaMode lambda_mode) {
    const GeometryInput& geom = *series.geometry;
    VectorSeries out(series.series.context());
    for (const auto& [d, coeff] : series.series.coeffs())
        out.add(d, apply_bundle_factors(geom, bundle_rows, d, lambda_mode, coeff));
    return CohVectorSeries{std::move(out), series.geometry};
}

MatrixSeries frame_columns(const GeometryInput& geom, const CohVectorSeries& I) {
    const int n = geom.dim();
    const SeriesContext& ctx = I.series.context();

    MatrixSeries s(ctx);
    for (int k = 0; k < n; ++k) {
        VectorSeries col = I.series;
        for (int a = 0; a < geom.r; ++a)
            for (int rep = 0; rep < geom.presentation.basis_monomials[k][a]; ++rep)
                col = ladder_operator(geom, a, col);
        for (const auto& [d, coeff] : col.coeffs()) {
            CoeffMatrix m = s.coeff(d);
            if (m.dim() == 0) m = CoeffMatrix(n);
            m.set_column(k, coeff);
            s.set(d, std::move(m));
        }
    }
    return s;
}

} // namespace qdm
