#include "qdm/mirrormap.hpp"

#include <algorithm>

namespace qdm {

namespace {

Rational binomial(int n, int k) {
    Rational r(1);
    for (int i = 0; i < k; ++i) {
        r *= Rational(n - i);
        r /= Rational(i + 1);
    }
    return r;
}

ScalarSeries one_series(const SeriesContext& ctx) {
    ScalarSeries s(ctx);
    s.set(NovikovExponent::zero(ctx.rank), CoeffScalar(1));
    return s;
}

// exp of a series with vanishing constant term.
ScalarSeries exp_series(const ScalarSeries& x) {
    const SeriesContext& ctx = x.context();
    if (x.find(NovikovExponent::zero(ctx.rank)) != nullptr)
        throw ConfigError("exp_series requires vanishing constant term");
    ScalarSeries e = one_series(ctx);
    ScalarSeries term = x;
    long fact = 1;
    for (int m = 1; !term.is_zero() && m <= ctx.truncation + 1; ++m) {
        ScalarSeries scaled = term.map(
            [&](const NovikovExponent&, const CoeffScalar& c) {
                return c * Rational(1, fact);
            });
        e += scaled;
        term = term * x;
        fact *= m + 1;
    }
    return e;
}

} // namespace

MirrorMap mirror_map(const std::vector<MatrixSeries>& canonical,
                     const CohPresentation& pres) {
    pres.validate();
    const int n = pres.n;
    const int r = pres.r;
    if (static_cast<int>(canonical.size()) != r)
        throw ConfigError("canonical connection count != r");
    const SeriesContext ctx = canonical[0].context();
    const NovikovExponent qzero = NovikovExponent::zero(ctx.rank);

    // rhs_a = (A_a - M_a) e_0 per Novikov exponent.
    std::vector<VectorSeries> rhs;
    for (int a = 0; a < r; ++a) {
        VectorSeries v(ctx);
        CoeffMatrix m0 = pres.cup_matrix(a);
        for (const auto& [d, m] : canonical[a].coeffs()) {
            CoeffVector col = m.column(0);
            if (d.is_zero()) col -= m0.column(0);
            v.add(d, col);
        }
        rhs.push_back(std::move(v));
    }
    for (int a = 0; a < r; ++a)
        if (rhs[a].find(qzero) != nullptr)
            throw ConfigError("canonical A_a(0) != M_a; cannot integrate mirror map");

    MirrorMap map;
    map.g.assign(n, ScalarSeries(ctx));
    for (const NovikovExponent& d : ctx.exponents()) {
        if (d.is_zero()) continue;
        for (int k = 0; k < n; ++k) {
            bool have = false;
            CoeffScalar value;
            for (int a = 0; a < r; ++a) {
                CoeffScalar c = rhs[a].coeff(d).size() ? rhs[a].coeff(d)[k]
                                                       : CoeffScalar();
                if (d.d[a] == 0) {
                    if (!c.is_zero())
                        throw InconsistentMixedPartials(
                            "rhs_" + std::to_string(a) + " has a Q" + d.str() +
                            " term but d_a = 0");
                    continue;
                }
                CoeffScalar cand = c * Rational(1, d.d[a]);
                if (!have) {
                    value = cand;
                    have = true;
                } else if (!(value == cand)) {
                    throw InconsistentMixedPartials(
                        "mirror-map integrals disagree at Q" + d.str() +
                        ", component " + std::to_string(k));
                }
            }
            if (have && !value.is_zero()) {
                if (!value.hbar_free())
                    throw ResidualHbar("mirror-map coefficient retains hbar at Q" +
                                       d.str());
                map.g[k].add(d, value);
            }
        }
    }
    return map;
}

QuantumProductTable flat_products(const BigConnection& big, const MirrorMap& map) {
    if (big.mode != ReconMode::Reduced)
        throw ConfigError("flat_products requires a reduced-mode reconstruction");
    const CohPresentation& pres = *big.presentation;
    const int n = pres.n;
    const int r = pres.r;
    const SeriesContext qctx = big.big_a[0].qcontext();
    const int nvars = big.big_a[0].nvars();
    const NovikovExponent qzero = NovikovExponent::zero(qctx.rank);

    // All mirror-map series are read as functions of x^a = Q^a e^{t^a}; the
    // reduced-mode storage already carries its Novikov powers in x, so the
    // substitutions stay inside the same lattice.
    const int max_pow = std::max(big.t_order, 1);
    std::vector<std::vector<ScalarSeries>> g_pow(nvars);
    for (int j = 0; j < nvars; ++j) {
        const ScalarSeries& base = map.g[big.loop_vars[j]];
        g_pow[j].push_back(one_series(qctx));
        for (int p = 1; p <= max_pow; ++p) g_pow[j].push_back(g_pow[j][p - 1] * base);
    }

    // Substitute t^j := t-hat^j - g^j(x).
    auto substitute = [&](const TPoly<CoeffMatrix>& p) {
        TPoly<CoeffMatrix> out(nvars, big.t_order, qctx);
        for (const auto& [mono, s] : p.terms()) {
            std::vector<std::pair<TMonomial, ScalarSeries>> expansion;
            expansion.emplace_back(TMonomial::zero(nvars), one_series(qctx));
            for (int j = 0; j < nvars; ++j) {
                const int p_j = mono.m[j];
                if (p_j == 0) continue;
                std::vector<std::pair<TMonomial, ScalarSeries>> next;
                for (const auto& [tm, coeff] : expansion) {
                    for (int pt = 0; pt <= p_j; ++pt) {
                        const int pg = p_j - pt;
                        if (pg > 0 && g_pow[j][1].is_zero()) continue;
                        Rational c = binomial(p_j, pt);
                        if (pg % 2 == 1) c = -c;
                        ScalarSeries piece = g_pow[j][pg].map(
                            [&](const NovikovExponent&, const CoeffScalar& x) {
                                return x * c;
                            });
                        TMonomial tm2 = tm;
                        tm2.m[j] += pt;
                        next.emplace_back(std::move(tm2), coeff * piece);
                    }
                }
                expansion = std::move(next);
            }
            for (const auto& [tm, coeff] : expansion)
                out.add(tm, series_mul(coeff, s));
        }
        return out;
    };

    // Divisor-direction repackaging x^a = q^a e^{-g^{i_a}(x)}: solve for the
    // unit factors u_a(q) with x^a = q^a u_a by fixed-point iteration.
    std::vector<ScalarSeries> g_div;
    bool need_inversion = false;
    for (int a = 0; a < r; ++a) {
        g_div.push_back(map.g[big.divisor_index[a]]);
        if (!g_div.back().is_zero()) need_inversion = true;
    }
    std::vector<ScalarSeries> u(r, one_series(qctx));
    if (need_inversion) {
        for (int it = 0; it <= qctx.truncation; ++it) {
            // Evaluate g^{i_a} at x(q): monomial q^d prod_a u_a^{d_a}.
            std::vector<ScalarSeries> next;
            bool changed = false;
            for (int a = 0; a < r; ++a) {
                ScalarSeries gx(qctx);
                for (const auto& [d, c] : g_div[a].coeffs()) {
                    ScalarSeries term(qctx);
                    term.set(d, c);
                    for (int b = 0; b < r; ++b)
                        for (int p = 0; p < d.d[b]; ++p) term = term * u[b];
                    gx += term;
                }
                ScalarSeries ua = exp_series(-gx);
                if (!(ua == u[a])) changed = true;
                next.push_back(std::move(ua));
            }
            u = std::move(next);
            if (!changed) break;
        }
    }
    auto repackage = [&](const TPoly<CoeffMatrix>& p) {
        if (!need_inversion) return p;
        TPoly<CoeffMatrix> out(nvars, big.t_order, qctx);
        for (const auto& [mono, s] : p.terms())
            for (const auto& [d, m] : s.coeffs()) {
                NovikovSeries<CoeffMatrix> term(qctx);
                term.set(d, m);
                ScalarSeries factor = one_series(qctx);
                for (int b = 0; b < r; ++b)
                    for (int p = 0; p < d.d[b]; ++p) factor = factor * u[b];
                out.add(mono, series_mul(factor, term));
            }
        return out;
    };

    std::vector<TPoly<CoeffMatrix>> sub_omega(n);
    std::vector<bool> need(n, false);
    for (int k : big.loop_vars) need[k] = true;
    for (int j = 0; j < n; ++j)
        if (!map.g[j].is_zero()) need[j] = true;
    for (int j = 0; j < n; ++j)
        if (need[j]) sub_omega[j] = substitute(big.big_omega[j]);

    QuantumProductTable table;
    table.t_vars = big.loop_vars;
    table.divisor_index = big.divisor_index;
    table.presentation = &pres;
    table.structure.resize(n);

    for (int k = 0; k < n; ++k) {
        auto div_it = std::find(big.divisor_index.begin(), big.divisor_index.end(), k);
        if (k == 0) {
            TPoly<CoeffMatrix> id(nvars, big.t_order, qctx);
            id.add_term(TMonomial::zero(nvars), qzero, CoeffMatrix::identity(n));
            table.structure[k] = std::move(id);
        } else if (div_it != big.divisor_index.end()) {
            // Divisor-direction Jacobian: with t^m = t-hat^m - g^m(x) and
            // x_c = q_c e^{-g^{i_c}(x)},
            //   Omega-hat_{i_b} = Omega_{i_b} - sum_{m,c} gdot^m_c D_cb Omega_m
            // where gdot^m_c = x_c d/dx_c g^m and D = (I + G)^{-1} with
            // G_cb = gdot^{i_c}_b.
            const int b = static_cast<int>(div_it - big.divisor_index.begin());
            std::vector<ScalarSeries> d_col(r, ScalarSeries(qctx));
            d_col[b] = one_series(qctx);
            {
                // Neumann inversion of (I + G) applied to the b-th unit vector.
                std::vector<ScalarSeries> term = d_col;
                for (int it = 0; it <= qctx.truncation; ++it) {
                    std::vector<ScalarSeries> nxt(r, ScalarSeries(qctx));
                    bool nonzero = false;
                    for (int c = 0; c < r; ++c) {
                        for (int e = 0; e < r; ++e) {
                            ScalarSeries gce =
                                map.g[big.divisor_index[c]].log_derivative(e);
                            if (gce.is_zero() || term[e].is_zero()) continue;
                            nxt[c] -= gce * term[e];
                        }
                        if (!nxt[c].is_zero()) nonzero = true;
                    }
                    term = std::move(nxt);
                    if (!nonzero) break;
                    for (int c = 0; c < r; ++c) d_col[c] += term[c];
                }
            }
            TPoly<CoeffMatrix> hat = substitute(big.big_a[b]);
            for (int m = 0; m < n; ++m) {
                ScalarSeries coeff(qctx);
                for (int c = 0; c < r; ++c) {
                    ScalarSeries gm = map.g[m].log_derivative(c);
                    if (gm.is_zero() || d_col[c].is_zero()) continue;
                    coeff += gm * d_col[c];
                }
                if (coeff.is_zero()) continue;
                TPoly<CoeffScalar> factor(nvars, big.t_order, qctx);
                factor.set(TMonomial::zero(nvars), coeff);
                hat -= tpoly_mul(factor, sub_omega[m]);
            }
            table.structure[k] = repackage(hat);
        } else {
            table.structure[k] = repackage(sub_omega[k]);
        }
    }

    // Flat-frame unitality: every structure matrix fixes the unit column.
    for (int k = 0; k < n; ++k)
        for (const auto& [mono, s] : table.structure[k].terms())
            for (const auto& [d, m] : s.coeffs()) {
                CoeffVector expected = (mono.is_zero() && d.is_zero())
                                           ? CoeffVector::basis(n, k)
                                           : CoeffVector(n);
                if (!(m.column(0) == expected))
                    throw InternalFlatnessViolation(
                        "flat structure matrix " + std::to_string(k) +
                        " does not fix the unit column at t" + mono.str() +
                        " q" + d.str());
            }
    return table;
}

GwReport gw_extract(const QuantumProductTable& table, const CohPresentation& pres,
                    int hypersurface_degree) {
    if (pres.r != 1)
        throw NotRankOne("GW extraction implemented for rank-one ambient spaces");
    if (!pres.pairing.has_value())
        throw PairingMissing("presentation carries no Poincare pairing");
    if (hypersurface_degree < 1)
        throw ConfigError("hypersurface degree must be >= 1");
    const int n = pres.n;
    const RationalMatrix& g = *pres.pairing;
    const RationalMatrix& m0 = pres.cup_matrices[0];

    // Twisted pairing <e_l, e_j>_V = k * int e_l e_j p.
    RationalMatrix pv(n, std::vector<Rational>(n));
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j) {
            Rational s(0);
            for (int t = 0; t < n; ++t) s += g[l][t] * m0[t][j];
            pv[l][j] = s * Rational(hypersurface_degree);
        }

    GwReport report;
    report.degree_k = hypersurface_degree;
    const int nvars = table.structure[0].nvars();
    const int t_order = table.structure[0].t_order();
    const SeriesContext qctx = table.structure[0].qcontext();
    report.three_point.assign(
        n, std::vector<std::vector<TPoly<CoeffScalar>>>(
               n, std::vector<TPoly<CoeffScalar>>(
                      n, TPoly<CoeffScalar>(nvars, t_order, qctx))));

    for (int k = 0; k < n; ++k) {
        for (const auto& [mono, s] : table.structure[k].terms())
            for (const auto& [d, m] : s.coeffs())
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        CoeffScalar acc;
                        for (int l = 0; l < n; ++l) {
                            const CoeffScalar& e = m.at(l, i);
                            if (e.is_zero() || pv[l][j].is_zero()) continue;
                            if (!e.lambda_free())
                                throw ConfigError(
                                    "GW extraction requires lambda = 0 mode");
                            acc += e * pv[l][j];
                        }
                        if (!acc.is_zero())
                            report.three_point[k][i][j].add_term(mono, d, acc);
                    }
    }
    const int i1 = table.divisor_index[0];
    report.potential_third = report.three_point[i1][i1][i1];
    return report;
}

} // namespace qdm
