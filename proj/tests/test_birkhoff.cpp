#include <doctest.h>

#include "qdm/birkhoff.hpp"
#include "test_helpers.hpp"

using namespace qdm;
using qdm_test::q1;

TEST_CASE("identity input factors trivially") {
    SeriesContext ctx(1, 3);
    BirkhoffFactors f = birkhoff_factorize(identity_series(ctx, 4));
    CHECK(f.l_plus == identity_series(ctx, 4));
    CHECK(f.l_minus_inv == identity_series(ctx, 4));
}

TEST_CASE("untwisted projective spaces need no positive part") {
    for (int n : {1, 2, 3}) {
        qdm_test::PipelineRun run(projective_space(n, {}), 3);
        CHECK(run.factors.l_plus == identity_series(SeriesContext(1, 3), n + 1));
        // Gauge by the identity: the canonical connection is A itself.
        for (int a = 0; a < run.geom.r; ++a)
            CHECK(run.canonical[a] == run.conn.matrices[a]);
    }
    qdm_test::PipelineRun q(qdm_test::p1xp1(), 2);
    CHECK(q.factors.l_plus == identity_series(SeriesContext(2, 2), 4));
}

TEST_CASE("factorization identities on the twisted example") {
    qdm_test::PipelineRun run(projective_space(7, {9}), 4);
    const BirkhoffFactors& f = run.factors;
    CHECK(!(f.l_plus == identity_series(SeriesContext(1, 4), 8)));

    // L^{-1} L_+ = L_-^{-1} exactly, with pi_+(L_-^{-1}) = id.
    CHECK(run.frame * f.l_plus == f.l_minus_inv);
    CHECK(pi_plus(f.l_minus_inv) == identity_series(SeriesContext(1, 4), 8));

    // Every entry of L_+ lives in nonnegative hbar powers.
    for (const auto& [d, m] : f.l_plus.coeffs()) CHECK(m.pi_plus() == m);

    // The recursion agrees with the independent Neumann-sum formula.
    CHECK(birkhoff_l_plus_neumann(run.frame) == f.l_plus);
}

TEST_CASE("canonical connection is hbar-free with published constants") {
    qdm_test::PipelineRun run(projective_space(7, {9}), 3);
    const MatrixSeries& a = run.canonical[0];
    for (const auto& [d, m] : a.coeffs()) CHECK(m.hbar_free());
    CHECK(a.coeff(q1(0)) == run.geom.presentation.cup_matrix(0));
    CHECK(a.coeff(q1(1)).at(2, 0) == CoeffScalar(Rational(34138908)));  // alpha
    CHECK(a.coeff(q1(1)).at(3, 1) == CoeffScalar(Rational(90857052)));  // gamma
    CHECK(a.coeff(q1(1)).at(7, 5) == CoeffScalar(Rational(5973264)));   // sigma
    CHECK(a.coeff(q1(1)).at(4, 2) == CoeffScalar(Rational(124756281))); // phi
    CHECK(a.coeff(q1(2)).at(4, 1) ==
          CoeffScalar(Rational::parse("81506931029963973/2"))); // epsilon
}

TEST_CASE("canonical J matches the published display") {
    qdm_test::PipelineRun run(projective_space(7, {9}), 3);
    CohVectorSeries j = canonical_j(run.factors, run.geom);
    CHECK(j.series.coeff(q1(0)) == CoeffVector::basis(8, 0));
    CHECK(j.series.coeff(q1(1))[2] == CoeffScalar::term(Rational(34138908), -1));
    CHECK(j.series.coeff(q1(1))[3] == CoeffScalar::term(Rational(56718144), -2));
    CHECK(j.series.coeff(q1(2))[3] ==
          CoeffScalar::term(Rational::parse("8404934443598718"), -1));
    CHECK(j.series.coeff(q1(2))[4].coeff(-2) ==
          Rational::parse("64923366053493693/8"));
    // The hbar^0 part of J is exactly the unit class.
    for (const auto& [d, v] : j.series.coeffs())
        for (int i = 0; i < 8; ++i)
            CHECK(v[i].pi_plus() ==
                  ((d.is_zero() && i == 0) ? CoeffScalar(1) : CoeffScalar()));
}

TEST_CASE("factorization requires a unital frame") {
    SeriesContext ctx(1, 2);
    MatrixSeries s(ctx);
    s.set(q1(1), CoeffMatrix::identity(2));
    CHECK_THROWS_AS(birkhoff_factorize(s), FrameNotUnital);
}
