#include "qdm/connection.hpp"

namespace qdm {

namespace {

MatrixSeries scaled_by_hbar(const MatrixSeries& m) {
    return m.map([](const NovikovExponent&, const CoeffMatrix& v) {
        CoeffMatrix w = v;
        w *= CoeffScalar::hbar();
        return w;
    });
}

} // namespace

void SmallConnection::check_flatness() const {
    const int r = static_cast<int>(matrices.size());
    for (int a = 0; a < r; ++a)
        for (int b = a + 1; b < r; ++b) {
            MatrixSeries lhs = scaled_by_hbar(matrices[a].log_derivative(b) -
                                              matrices[b].log_derivative(a)) +
                               matrices[b] * matrices[a] - matrices[a] * matrices[b];
            if (!lhs.is_zero()) {
                const auto& [d, m] = *lhs.coeffs().begin();
                throw InternalFlatnessViolation(
                    "small connection not flat for pair (" + std::to_string(a) +
                    "," + std::to_string(b) + ") at degree " + d.str());
            }
        }
}

SmallConnection connection_from_frame(const GeometryInput& geom, const MatrixSeries& s) {
    const SeriesContext& ctx = s.context();
    const int n = geom.dim();
    const NovikovExponent zero = NovikovExponent::zero(ctx.rank);
    const CoeffMatrix* head = s.find(zero);
    if (head == nullptr || !head->is_identity())
        throw FrameNotUnital("frame constant term is not the identity");

    SmallConnection conn;
    conn.geometry = &geom;
    for (int a = 0; a < geom.r; ++a) {
        CoeffMatrix ma = geom.presentation.cup_matrix(a);
        MatrixSeries aa(ctx);
        for (const NovikovExponent& d : ctx.exponents_by_degree()) {
            const CoeffMatrix* sd = s.find(d);
            CoeffMatrix rhs;
            if (sd != nullptr) {
                rhs = ma * *sd;
                if (d.d[a] != 0) {
                    CoeffMatrix scaled = *sd;
                    scaled *= CoeffScalar::term(Rational(d.d[a]), 1);
                    rhs += scaled;
                }
            }
            // Subtract sum_{0<=f<d} S_{d-f} A_f (A_d itself is not yet stored).
            for (const auto& [f, af] : aa.coeffs()) {
                if (!f.componentwise_leq(d)) continue;
                const CoeffMatrix* sdf = s.find(d - f);
                if (sdf != nullptr) rhs -= *sdf * af;
            }
            if (rhs.is_zero()) continue;
            // Pole order of the extracted entries is bounded by the
            // nilpotency index of the presentation.
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (rhs.at(i, j).min_h() < -n)
                        throw ValidationError("connection entry pole order exceeds "
                                              "nilpotency bound at degree " + d.str());
            aa.set(d, std::move(rhs));
        }

        // Re-verify the ladder identity S * A_a = (hbar Q^a d/dQ^a + p_a) S.
        if (!(s * aa == ladder_operator(geom, a, s)))
            throw InternalFlatnessViolation(
                "extracted connection fails the ladder identity for a=" +
                std::to_string(a));
        conn.matrices.push_back(std::move(aa));
    }
    return conn;
}

std::vector<ScalarSeries> pf_reduce(int big_n, int k, const SeriesContext& ctx) {
    if (ctx.rank != 1) throw NotRankOne("pf_reduce requires a rank-1 context");
    if (big_n < 1 || k < 0) throw ConfigError("pf_reduce requires N >= 1, k >= 0");

    using PPoly = std::vector<CoeffScalar>; // coefficient of P^j at index j

    auto mul_linear = [](const PPoly& p, const Rational& c1, const CoeffScalar& c0) {
        // p * (c1 * P + c0)
        PPoly out(p.size() + 1);
        for (size_t j = 0; j < p.size(); ++j) {
            out[j + 1] += p[j] * c1;
            out[j] += p[j] * c0;
        }
        return out;
    };

    // Right-hand side polynomial R(P) with P^N = Q * R(P).
    PPoly rhs{CoeffScalar(1)};
    for (int m = 1; m <= k; ++m)
        rhs = mul_linear(rhs, Rational(k), CoeffScalar::term(Rational(m), 1));

    const int depth = ctx.truncation / ctx.weights[0];
    std::vector<PPoly> by_q(depth + 2);
    by_q[0] = PPoly(big_n + 1);
    by_q[0][big_n] = CoeffScalar(1);

    // One ascending pass in Q-degree; every substitution strictly raises it.
    for (int q = 0; q <= depth; ++q) {
        PPoly& cur = by_q[q];
        for (int j = static_cast<int>(cur.size()) - 1; j >= big_n; --j) {
            if (cur[j].is_zero()) continue;
            CoeffScalar coeff = cur[j];
            cur[j] = CoeffScalar();
            if (q + 1 > depth) continue; // beyond truncation
            // P^j = Q (P + hbar)^{j-N} R(P)
            PPoly repl = rhs;
            for (int t = 0; t < j - big_n; ++t)
                repl = mul_linear(repl, Rational(1), CoeffScalar::hbar());
            PPoly& dst = by_q[q + 1];
            if (dst.size() < repl.size()) dst.resize(repl.size());
            for (size_t i = 0; i < repl.size(); ++i) dst[i] += repl[i] * coeff;
        }
        cur.resize(big_n);
    }

    std::vector<ScalarSeries> cols(big_n, ScalarSeries(ctx));
    for (int q = 0; q <= depth; ++q)
        for (int j = 0; j < big_n && j < static_cast<int>(by_q[q].size()); ++j)
            cols[j].add(NovikovExponent({q}), by_q[q][j]);
    return cols;
}

} // namespace qdm
