#include "qdm/bigrecon.hpp"

#include <algorithm>

namespace qdm {

namespace {

TPoly<CoeffMatrix> identity_tpoly(int nvars, int t_order, const SeriesContext& qctx, int n) {
    TPoly<CoeffMatrix> p(nvars, t_order, qctx);
    p.add_term(TMonomial::zero(nvars), NovikovExponent::zero(qctx.rank),
               CoeffMatrix::identity(n));
    return p;
}

// Neumann inverse of V = I + E where E has positive combined (t, Q) order.
TPoly<CoeffMatrix> tpoly_invert(const TPoly<CoeffMatrix>& v, int n) {
    const int nvars = v.nvars();
    const SeriesContext& qctx = v.qcontext();
    const NovikovExponent qzero = NovikovExponent::zero(qctx.rank);
    const TMonomial tzero = TMonomial::zero(nvars);

    if (!(v.coeff(tzero).coeff(qzero) == CoeffMatrix::identity(n)))
        throw GenerationFailure("V-matrix constant term is not the identity "
                                "(corrupted presentation?)");

    TPoly<CoeffMatrix> e = v;
    e -= identity_tpoly(nvars, v.t_order(), qctx, n);

    TPoly<CoeffMatrix> inv = identity_tpoly(nvars, v.t_order(), qctx, n);
    TPoly<CoeffMatrix> power = inv;
    const int max_order = v.t_order() + qctx.truncation + 1;
    for (int k = 0; k < max_order && !power.is_zero(); ++k) {
        power = -(e * power);
        inv += power;
    }
    if (!power.is_zero())
        throw GenerationFailure("V-matrix inverse did not terminate; "
                                "constant term has a nonzero (Q,t)-order-0 part");
    return inv;
}

TPoly<CoeffScalar> entry_of(const TPoly<CoeffMatrix>& p, int i, int j) {
    TPoly<CoeffScalar> out(p.nvars(), p.t_order(), p.qcontext());
    for (const auto& [mono, s] : p.terms())
        for (const auto& [d, m] : s.coeffs()) out.add_term(mono, d, m.at(i, j));
    return out;
}

CoeffVector unit_column(const TPoly<CoeffMatrix>& p, const TMonomial& mono,
                        const NovikovExponent& d) {
    return p.coeff(mono).coeff(d).column(0);
}

} // namespace

TPoly<CoeffMatrix> BigConnection::t_derivative(int basis_index,
                                               const TPoly<CoeffMatrix>& x) const {
    if (mode == ReconMode::Full) {
        auto it = std::find(loop_vars.begin(), loop_vars.end(), basis_index);
        return x.dt(static_cast<int>(it - loop_vars.begin()));
    }
    if (basis_index == 0)
        return TPoly<CoeffMatrix>(x.nvars(), x.t_order(), x.qcontext());
    for (size_t a = 0; a < divisor_index.size(); ++a)
        if (divisor_index[a] == basis_index) return x.log_q(static_cast<int>(a));
    auto it = std::find(loop_vars.begin(), loop_vars.end(), basis_index);
    if (it == loop_vars.end()) throw ConfigError("unknown t-direction");
    return x.dt(static_cast<int>(it - loop_vars.begin()));
}

BigConnection reconstruct_big(const std::vector<MatrixSeries>& canonical,
                              const CohPresentation& pres, int n_t, ReconMode mode) {
    pres.validate();
    const int n = pres.n;
    const int r = pres.r;
    if (static_cast<int>(canonical.size()) != r)
        throw ConfigError("canonical connection count != r");
    const SeriesContext qctx = canonical[0].context();
    const NovikovExponent qzero = NovikovExponent::zero(qctx.rank);

    for (int a = 0; a < r; ++a) {
        for (const auto& [d, m] : canonical[a].coeffs())
            if (!m.hbar_free())
                throw ResidualHbar("canonical input retains hbar at degree " + d.str());
        if (!(canonical[a].coeff(qzero) == pres.cup_matrix(a)))
            throw ConfigError("canonical A_a(0) != cup matrix M_a");
    }

    BigConnection big;
    big.mode = mode;
    big.t_order = n_t;
    big.presentation = &pres;

    // Basis index realizing p_a e_0, needed for the divisor shortcut.
    if (mode == ReconMode::Reduced) {
        for (int a = 0; a < r; ++a) {
            int found = -1;
            for (int i = 0; i < n; ++i) {
                bool unit = pres.basis_monomials[i][a] == 1 &&
                            pres.degrees[i] == 2;
                if (unit) {
                    bool pure = true;
                    for (int b = 0; b < r; ++b)
                        if (b != a && pres.basis_monomials[i][b] != 0) pure = false;
                    if (pure) {
                        found = i;
                        break;
                    }
                }
            }
            if (found < 0)
                throw ConfigError("reduced mode requires p_a e_0 to be a basis "
                                  "element; use full mode");
            big.divisor_index.push_back(found);
        }
        for (int k = 0; k < n; ++k) {
            if (k == 0) continue;
            if (std::find(big.divisor_index.begin(), big.divisor_index.end(), k) !=
                big.divisor_index.end())
                continue;
            big.loop_vars.push_back(k);
        }
    } else {
        for (int k = 0; k < n; ++k) big.loop_vars.push_back(k);
    }
    const int nvars = static_cast<int>(big.loop_vars.size());

    // A_a as t-polynomials; degree-0 part is the canonical connection.
    std::vector<TPoly<CoeffMatrix>> a_cur(r);
    for (int a = 0; a < r; ++a) {
        TPoly<CoeffMatrix> p(nvars, 0, qctx);
        p.set(TMonomial::zero(nvars), canonical[a]);
        a_cur[a] = std::move(p);
    }

    std::vector<TPoly<CoeffMatrix>> omega;
    for (int step = 0;; ++step) {
        // Columns V_j = T_j(A^{<=step}) e_0 with factors ascending in a.
        std::vector<TPoly<CoeffMatrix>> t_ops(n);
        for (int j = 0; j < n; ++j) {
            TPoly<CoeffMatrix> t = identity_tpoly(nvars, step, qctx, n);
            for (int a = 0; a < r; ++a)
                for (int rep = 0; rep < pres.basis_monomials[j][a]; ++rep)
                    t = t * a_cur[a];
            t_ops[j] = std::move(t);
        }
        TPoly<CoeffMatrix> v(nvars, step, qctx);
        for (int j = 0; j < n; ++j)
            for (const auto& [mono, s] : t_ops[j].terms())
                for (const auto& [d, m] : s.coeffs()) {
                    CoeffMatrix cur = v.coeff(mono).coeff(d);
                    if (cur.dim() == 0) cur = CoeffMatrix(n);
                    cur.set_column(j, m.column(0));
                    v.add_term(mono, d, cur - v.coeff(mono).coeff(d));
                }

        TPoly<CoeffMatrix> v_inv = tpoly_invert(v, n);

        // Omega_k = sum_j B_kj T_j with B_kj = (V^{-1})_{jk}.
        omega.assign(n, TPoly<CoeffMatrix>(nvars, step, qctx));
        for (int k = 0; k < n; ++k) {
            TPoly<CoeffMatrix> om(nvars, step, qctx);
            for (int j = 0; j < n; ++j) {
                TPoly<CoeffScalar> b = entry_of(v_inv, j, k);
                if (b.is_zero()) continue;
                om += tpoly_mul(b, t_ops[j]);
            }
            // Unit-column condition Omega_k e_0 = e_k.
            for (const auto& [mono, s] : om.terms())
                for (const auto& [d, m] : s.coeffs()) {
                    CoeffVector expected =
                        (mono.is_zero() && d.is_zero()) ? CoeffVector::basis(n, k)
                                                        : CoeffVector(n);
                    if (!(m.column(0) == expected))
                        throw GenerationFailure(
                            "Omega_" + std::to_string(k) +
                            " e_0 != e_k at t-monomial " + mono.str() +
                            ", degree " + d.str());
                }
            omega[k] = std::move(om);
        }

        if (step >= n_t) break;

        // Closedness precheck at the top degree before Euler integration.
        for (int ki = 0; ki < nvars; ++ki)
            for (int kj = ki + 1; kj < nvars; ++kj) {
                TPoly<CoeffMatrix> lhs =
                    omega[big.loop_vars[kj]].degree_part(step).dt(ki);
                TPoly<CoeffMatrix> rhs =
                    omega[big.loop_vars[ki]].degree_part(step).dt(kj);
                if (!(lhs == rhs))
                    throw ClosednessFailure(
                        "d_j Omega_k != d_k Omega_j at t-degree " +
                        std::to_string(step));
            }

        // Euler step: A^{(step+1)} = 1/(step+1) sum_k t^k Q^a d/dQ^a Omega_k^{(step)}.
        bool grew = false;
        std::vector<TPoly<CoeffMatrix>> a_next(r);
        for (int a = 0; a < r; ++a) {
            TPoly<CoeffMatrix> next = a_cur[a].with_t_order(step + 1);
            for (int ki = 0; ki < nvars; ++ki) {
                TPoly<CoeffMatrix> part = omega[big.loop_vars[ki]]
                                              .degree_part(step)
                                              .log_q(a)
                                              .with_t_order(step + 1)
                                              .mul_t(ki);
                if (part.is_zero()) continue;
                for (const auto& [mono, s] : part.terms()) {
                    NovikovSeries<CoeffMatrix> scaled =
                        s.map([&](const NovikovExponent&, const CoeffMatrix& m) {
                            CoeffMatrix w = m;
                            w *= Rational(1, step + 1);
                            return w;
                        });
                    next.add(mono, scaled);
                    grew = true;
                }
            }
            a_next[a] = std::move(next);
        }
        if (!grew && step + 1 < n_t) {
            // Fixed point: no new t-degree appears; Omega computed at this
            // step is already final.  Pad the t-order for uniform output.
            for (int a = 0; a < r; ++a) a_cur[a] = a_next[a].with_t_order(n_t);
            for (int k = 0; k < n; ++k) omega[k] = omega[k].with_t_order(n_t);
            break;
        }
        a_cur = std::move(a_next);
    }

    for (int a = 0; a < r; ++a) big.big_a.push_back(a_cur[a].with_t_order(n_t));
    big.big_omega.clear();
    for (int k = 0; k < n; ++k) big.big_omega.push_back(omega[k].with_t_order(n_t));

    if (mode == ReconMode::Reduced) {
        // String/divisor structure: Omega_0 = id, Omega_{i_a} = A_a.
        big.big_omega[0] = identity_tpoly(nvars, n_t, qctx, n);
        for (int a = 0; a < r; ++a) big.big_omega[big.divisor_index[a]] = big.big_a[a];
    }
    return big;
}

FlatnessReport flatness_check(const BigConnection& big) {
    FlatnessReport report;
    const CohPresentation& pres = *big.presentation;
    const int n = pres.n;
    const int r = pres.r;

    auto first_witness = [](const TPoly<CoeffMatrix>& diff) {
        const auto& [mono, s] = *diff.terms().begin();
        const auto& [d, m] = *s.coeffs().begin();
        for (int i = 0; i < m.dim(); ++i)
            for (int j = 0; j < m.dim(); ++j)
                if (!m.at(i, j).is_zero())
                    return "t" + mono.str() + " Q" + d.str() + " entry (" +
                           std::to_string(i) + "," + std::to_string(j) + ")";
        return std::string("unknown");
    };
    auto check = [&](const std::string& name, const TPoly<CoeffMatrix>& lhs,
                     const TPoly<CoeffMatrix>& rhs, bool derivative_bound) {
        TPoly<CoeffMatrix> l = lhs;
        TPoly<CoeffMatrix> r2 = rhs;
        if (derivative_bound && big.t_order > 0) {
            l = l.truncate_t(big.t_order - 1);
            r2 = r2.truncate_t(big.t_order - 1);
        }
        TPoly<CoeffMatrix> diff = l - r2;
        FlatnessReport::Item item;
        item.name = name;
        item.pass = diff.is_zero();
        if (!item.pass) item.witness = first_witness(diff);
        report.items.push_back(std::move(item));
    };
    auto is_literal = [&](int basis_index) {
        return big.mode == ReconMode::Full ||
               std::find(big.loop_vars.begin(), big.loop_vars.end(), basis_index) !=
                   big.loop_vars.end();
    };

    const TPoly<CoeffMatrix> zero(big.big_a[0].nvars(), big.t_order,
                                  big.big_a[0].qcontext());

    for (int a = 0; a < r; ++a)
        for (int b = a + 1; b < r; ++b) {
            check("[A_" + std::to_string(a) + ",A_" + std::to_string(b) + "]",
                  big.big_a[a] * big.big_a[b], big.big_a[b] * big.big_a[a], false);
            check("QdQ integrability A_" + std::to_string(a) + "/A_" + std::to_string(b),
                  big.big_a[a].log_q(b), big.big_a[b].log_q(a), false);
        }

    for (int a = 0; a < r; ++a)
        for (int i = 0; i < n; ++i) {
            check("[A_" + std::to_string(a) + ",Omega_" + std::to_string(i) + "]",
                  big.big_a[a] * big.big_omega[i], big.big_omega[i] * big.big_a[a],
                  false);
            check("dt_" + std::to_string(i) + " A_" + std::to_string(a) +
                      " = QdQ_" + std::to_string(a) + " Omega_" + std::to_string(i),
                  big.t_derivative(i, big.big_a[a]), big.big_omega[i].log_q(a),
                  is_literal(i));
        }

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            check("[Omega_" + std::to_string(i) + ",Omega_" + std::to_string(j) + "]",
                  big.big_omega[i] * big.big_omega[j],
                  big.big_omega[j] * big.big_omega[i], false);
            check("dt_" + std::to_string(j) + " Omega_" + std::to_string(i) +
                      " = dt_" + std::to_string(i) + " Omega_" + std::to_string(j),
                  big.t_derivative(j, big.big_omega[i]),
                  big.t_derivative(i, big.big_omega[j]),
                  is_literal(i) || is_literal(j));
        }

    // Unit-column condition.  For reconstruction variables Omega_i e_0 = e_i
    // exactly; divisor directions carry the (not yet mirror-mapped) connection,
    // whose unit column must at least be t-independent with M_a e_0 at Q = 0.
    for (int i = 0; i < n; ++i) {
        const bool divisor =
            big.mode == ReconMode::Reduced &&
            std::find(big.divisor_index.begin(), big.divisor_index.end(), i) !=
                big.divisor_index.end();
        bool pass = true;
        std::string witness;
        for (const auto& [mono, s] : big.big_omega[i].terms()) {
            for (const auto& [d, m] : s.coeffs()) {
                bool ok;
                if (divisor) {
                    ok = mono.is_zero()
                             ? (!d.is_zero() ||
                                m.column(0) == CoeffVector::basis(n, i))
                             : m.column(0) == CoeffVector(n);
                } else {
                    CoeffVector expected = (mono.is_zero() && d.is_zero())
                                               ? CoeffVector::basis(n, i)
                                               : CoeffVector(n);
                    ok = m.column(0) == expected;
                }
                if (!ok) {
                    pass = false;
                    witness = "t" + mono.str() + " Q" + d.str();
                    break;
                }
            }
            if (!pass) break;
        }
        FlatnessReport::Item item;
        item.name = divisor ? "Omega_" + std::to_string(i) + " e_0 t-independent"
                            : "Omega_" + std::to_string(i) + " e_0 = e_" +
                                  std::to_string(i);
        item.pass = pass;
        item.witness = witness;
        report.items.push_back(std::move(item));
    }
    (void)zero;
    return report;
}

} // namespace qdm
