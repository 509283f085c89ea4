#include <doctest.h>

#include "qdm/mirrormap.hpp"
#include "test_helpers.hpp"

using namespace qdm;
using qdm_test::q1;

namespace {

// Reduced-mode pipeline through the flat product table.
struct ProductRun {
    qdm_test::PipelineRun small;
    BigConnection big;
    MirrorMap map;
    QuantumProductTable table;

    ProductRun(GeometryInput g, int q_order, int t_order)
        : small(std::move(g), q_order),
          big(reconstruct_big(small.canonical, small.geom.presentation, t_order,
                              ReconMode::Reduced)),
          map(mirror_map(small.canonical, small.geom.presentation)),
          table(flat_products(big, map)) {}
};

} // namespace

TEST_CASE("Fano mirror maps vanish") {
    for (int n : {1, 2, 3}) {
        qdm_test::PipelineRun run(projective_space(n, {}), 3);
        MirrorMap map = mirror_map(run.canonical, run.geom.presentation);
        for (const ScalarSeries& g : map.g) CHECK(g.is_zero());
    }
}

TEST_CASE("published mirror map of the twisted example") {
    qdm_test::PipelineRun run(projective_space(7, {9}), 3);
    MirrorMap map = mirror_map(run.canonical, run.geom.presentation);
    CHECK(map.g[0].is_zero());
    CHECK(map.g[1].is_zero());
    CHECK(map.g[2].coeff(q1(1)) == CoeffScalar(Rational(34138908)));     // alpha
    CHECK(map.g[3].coeff(q1(2)) ==
          CoeffScalar(Rational::parse("8404934443598718")));             // beta/2
    CHECK(map.g[4].coeff(q1(3)) ==
          CoeffScalar(Rational::parse("3815933053700462506215462")));    // delta/3
}

TEST_CASE("quintic divisor shift starts at 770 Q") {
    qdm_test::PipelineRun run(projective_space(4, {5}), 3);
    MirrorMap map = mirror_map(run.canonical, run.geom.presentation);
    CHECK(map.g[1].coeff(q1(1)) == CoeffScalar(Rational(770)));
    CHECK(!map.g[1].coeff(q1(2)).is_zero());
}

TEST_CASE("mixed-partial consistency is enforced for r > 1") {
    qdm_test::PipelineRun run(qdm_test::p1xp1(), 2);
    MirrorMap map = mirror_map(run.canonical, run.geom.presentation);
    for (const ScalarSeries& g : map.g) CHECK(g.is_zero());

    // A Q_2-term in the unit column of A_1 cannot integrate along Q_1.
    std::vector<MatrixSeries> broken = run.canonical;
    MatrixSeries a0 = broken[0];
    CoeffMatrix bump(4);
    bump.at(3, 0) = CoeffScalar(1);
    a0.add(NovikovExponent({0, 1}), bump);
    broken[0] = a0;
    CHECK_THROWS_AS(mirror_map(broken, run.geom.presentation),
                    InconsistentMixedPartials);
}

TEST_CASE("P^1 flat product is multiplication by q") {
    ProductRun run(projective_space(1, {}), 3, 2);
    const TPoly<CoeffMatrix>& unit = run.table.structure[0];
    TMonomial none(std::vector<int>{});
    CHECK(unit.coeff(none).coeff(q1(0)).is_identity());

    const TPoly<CoeffMatrix>& p = run.table.structure[1];
    CHECK(p.coeff(none).coeff(q1(0)).at(1, 0) == CoeffScalar(1));
    CHECK(p.coeff(none).coeff(q1(1)).at(0, 1) == CoeffScalar(1)); // p * p = q
}

TEST_CASE("structure matrices commute and fix the unit column") {
    ProductRun run(projective_space(4, {5}), 3, 2);
    const auto& s = run.table.structure;
    for (size_t i = 0; i < s.size(); ++i)
        for (size_t j = i + 1; j < s.size(); ++j) CHECK(s[i] * s[j] == s[j] * s[i]);
}

TEST_CASE("three-point tensor is totally symmetric") {
    for (auto g : {projective_space(4, {5}), projective_space(3, {2})}) {
        int degree = g.bundle_rows[0][0];
        ProductRun run(std::move(g), 3, 2);
        GwReport report =
            gw_extract(run.table, run.small.geom.presentation, degree);
        const int n = run.small.geom.dim();
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    CHECK(report.three_point[k][i][j] == report.three_point[i][k][j]);
                    CHECK(report.three_point[k][i][j] == report.three_point[k][j][i]);
                }
        CHECK(report.potential_third == report.three_point[1][1][1]);
    }
}

TEST_CASE("gw_extract validates its inputs") {
    ProductRun run(projective_space(4, {5}), 2, 1);
    CohPresentation no_pairing = run.small.geom.presentation;
    no_pairing.pairing.reset();
    CHECK_THROWS_AS(gw_extract(run.table, no_pairing, 5), PairingMissing);
    CHECK_THROWS_AS(gw_extract(run.table, qdm_test::p1xp1().presentation, 5),
                    NotRankOne);
    CHECK_THROWS_AS(gw_extract(run.table, run.small.geom.presentation, 0),
                    ConfigError);
}

TEST_CASE("flat tables are stable under raising the Novikov order") {
    ProductRun lo(projective_space(4, {5}), 2, 2);
    ProductRun hi(projective_space(4, {5}), 3, 2);
    for (size_t k = 0; k < lo.table.structure.size(); ++k) {
        const auto& a = lo.table.structure[k];
        const auto& b = hi.table.structure[k];
        for (const auto& [mono, s] : b.terms())
            CHECK(s.truncated(2) == a.coeff(mono).truncated(2));
    }
    // Mirror maps agree on the overlap as well.
    MirrorMap glo = mirror_map(lo.small.canonical, lo.small.geom.presentation);
    MirrorMap ghi = mirror_map(hi.small.canonical, hi.small.geom.presentation);
    for (int k = 0; k < 5; ++k) CHECK(ghi.g[k].truncated(2) == glo.g[k].truncated(2));
}
