#include "qdm/birkhoff.hpp"

namespace qdm {

BirkhoffFactors birkhoff_factorize(const MatrixSeries& linv) {
    const SeriesContext& ctx = linv.context();
    const NovikovExponent zero = NovikovExponent::zero(ctx.rank);
    const CoeffMatrix* head = linv.find(zero);
    if (head == nullptr || !head->is_identity())
        throw FrameNotUnital("L^{-1} constant term is not the identity");
    const int n = head->dim();

    MatrixSeries l_plus(ctx);
    l_plus.set(zero, CoeffMatrix::identity(n));
    for (const NovikovExponent& d : ctx.exponents_by_degree()) {
        if (d.is_zero()) continue;
        CoeffMatrix acc;
        for (const auto& [f, tf] : linv.coeffs()) {
            if (f.is_zero() || !f.componentwise_leq(d)) continue;
            const CoeffMatrix* lp = l_plus.find(d - f);
            if (lp != nullptr) acc += tf * *lp;
        }
        CoeffMatrix term = (-acc).pi_plus();
        if (!term.is_zero()) l_plus.set(d, std::move(term));
    }

    BirkhoffFactors out;
    out.l_minus_inv = linv * l_plus;
    out.l_plus = std::move(l_plus);

    // pi_plus(L_-^{-1}) = id is forced by the recursion; verify anyway.
    if (!(pi_plus(out.l_minus_inv) == identity_series(ctx, n)))
        throw InternalFlatnessViolation(
            "Birkhoff factorization failed: pi_plus(L_-^{-1}) != id");
    return out;
}

MatrixSeries birkhoff_l_plus_neumann(const MatrixSeries& linv) {
    const SeriesContext& ctx = linv.context();
    const NovikovExponent zero = NovikovExponent::zero(ctx.rank);
    const CoeffMatrix* head = linv.find(zero);
    if (head == nullptr || !head->is_identity())
        throw FrameNotUnital("L^{-1} constant term is not the identity");
    const int n = head->dim();

    MatrixSeries result(ctx);
    for (int j = 0; j < n; ++j) {
        // v and its iterates as vector-valued series.
        VectorSeries v(ctx);
        v.set(zero, CoeffVector::basis(n, j));
        VectorSeries sum = v;
        while (!v.is_zero()) {
            // v <- v - pi_plus(L^{-1} v)
            VectorSeries lv(ctx);
            for (const auto& [f, tf] : linv.coeffs()) {
                int df = f.weighted_degree(ctx.weights);
                for (const auto& [e, ve] : v.coeffs()) {
                    if (df + e.weighted_degree(ctx.weights) > ctx.truncation) continue;
                    lv.add(f + e, tf * ve);
                }
            }
            VectorSeries next = v;
            for (const auto& [e, ve] : lv.coeffs()) next.add(e, -ve.pi_plus());
            v = std::move(next);
            sum += v;
        }
        for (const auto& [e, ve] : sum.coeffs()) {
            CoeffMatrix m = result.coeff(e);
            if (m.dim() == 0) m = CoeffMatrix(n);
            CoeffVector col = m.column(j);
            col += ve;
            m.set_column(j, col);
            result.set(e, std::move(m));
        }
    }
    return result;
}

std::vector<MatrixSeries> canonical_connection(const SmallConnection& conn,
                                               const BirkhoffFactors& factors) {
    const SeriesContext& ctx = factors.l_plus.context();
    MatrixSeries l_plus_inv = series_invert(factors.l_plus);

    std::vector<MatrixSeries> out;
    for (size_t a = 0; a < conn.matrices.size(); ++a) {
        const MatrixSeries& aa = conn.matrices[a];
        if (!(aa.context() == ctx))
            throw ConfigError("connection and factors have mismatched truncation");
        MatrixSeries deriv =
            factors.l_plus.log_derivative(static_cast<int>(a))
                .map([](const NovikovExponent&, const CoeffMatrix& m) {
                    CoeffMatrix w = m;
                    w *= CoeffScalar::hbar();
                    return w;
                });
        MatrixSeries ca = l_plus_inv * (aa * factors.l_plus + deriv);

        for (const auto& [d, m] : ca.coeffs())
            if (!m.hbar_free())
                throw ResidualHbar("canonical connection entry retains hbar at degree " +
                                   d.str() + " (a=" + std::to_string(a) + ")");

        // Shortcut cross-check when A_a is polynomial in hbar:
        // (L_+|_{h=0})^{-1} A_a|_{h=0} L_+|_{h=0} must agree.
        bool polynomial = true;
        for (const auto& [d, m] : aa.coeffs()) {
            for (int i = 0; i < m.dim() && polynomial; ++i)
                for (int j = 0; j < m.dim(); ++j)
                    if (m.at(i, j).min_h() < 0) {
                        polynomial = false;
                        break;
                    }
            if (!polynomial) break;
        }
        if (polynomial) {
            auto at_zero = [](const MatrixSeries& s) {
                return s.map([](const NovikovExponent&, const CoeffMatrix& m) {
                    return m.hbar_specialize(Rational(0));
                });
            };
            MatrixSeries shortcut =
                series_invert(at_zero(factors.l_plus)) * at_zero(aa) * at_zero(factors.l_plus);
            if (!(shortcut == ca))
                throw InternalFlatnessViolation(
                    "hbar=0 shortcut disagrees with the full gauge transform");
        }
        out.push_back(std::move(ca));
    }
    return out;
}

CohVectorSeries canonical_j(const BirkhoffFactors& factors, const GeometryInput& geom) {
    VectorSeries j(factors.l_minus_inv.context());
    for (const auto& [d, m] : factors.l_minus_inv.coeffs()) j.add(d, m.column(0));
    return CohVectorSeries{std::move(j), &geom};
}

} // namespace qdm
