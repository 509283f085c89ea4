#include <doctest.h>

#include "qdm/bigrecon.hpp"
#include "test_helpers.hpp"

using namespace qdm;
using qdm_test::q1;

namespace {

Rational inv_factorial(int m) {
    Rational f(1);
    for (int k = 2; k <= m; ++k) f *= Rational(k);
    return f.inverse();
}

} // namespace

TEST_CASE("P^1 reconstruction in full mode expands Q e^{t^1}") {
    qdm_test::PipelineRun run(projective_space(1, {}), 3);
    BigConnection big =
        reconstruct_big(run.canonical, run.geom.presentation, 3, ReconMode::Full);
    REQUIRE(big.loop_vars == std::vector<int>{0, 1});

    // bigA = [[0, Q e^{t^1}], [1, 0]]: entry (0,1) carries Q (t^1)^m / m!.
    for (int m = 0; m <= 3; ++m) {
        TMonomial mono(std::vector<int>{0, m});
        CoeffMatrix c = big.big_a[0].coeff(mono).coeff(q1(1));
        CHECK(c.at(0, 1) == CoeffScalar(inv_factorial(m)));
        CHECK(c.at(1, 0).is_zero());
    }
    CHECK(big.big_a[0].coeff(TMonomial::zero(2)).coeff(q1(0)).at(1, 0) ==
          CoeffScalar(1));
    // No t^0 dependence (string direction) beyond the constant.
    CHECK(big.big_a[0].coeff(TMonomial(std::vector<int>{1, 0})).is_zero());

    CHECK(flatness_check(big).all_pass());
    // Omega_0 = id and Omega_1 = bigA hold in full mode as consequences.
    CHECK(big.big_omega[1] == big.big_a[0]);
}

TEST_CASE("P^1 reconstruction in reduced mode stores the t = 0 slice") {
    qdm_test::PipelineRun run(projective_space(1, {}), 3);
    BigConnection big =
        reconstruct_big(run.canonical, run.geom.presentation, 2, ReconMode::Reduced);
    CHECK(big.divisor_index == std::vector<int>{1});
    CHECK(big.loop_vars.empty());

    TMonomial none(std::vector<int>{});
    CHECK(big.big_a[0].coeff(none) == run.canonical[0]);
    CHECK(big.big_omega[1] == big.big_a[0]);
    CHECK(big.big_omega[0].coeff(none).coeff(q1(0)).is_identity());
    CHECK(flatness_check(big).all_pass());
}

TEST_CASE("full and reduced modes agree on the t = 0 slice") {
    qdm_test::PipelineRun run(projective_space(2, {}), 3);
    BigConnection full =
        reconstruct_big(run.canonical, run.geom.presentation, 2, ReconMode::Full);
    BigConnection reduced =
        reconstruct_big(run.canonical, run.geom.presentation, 2, ReconMode::Reduced);
    CHECK(full.big_a[0].coeff(TMonomial::zero(3)) ==
          reduced.big_a[0].coeff(TMonomial::zero(1)));
    CHECK(flatness_check(full).all_pass());
    CHECK(flatness_check(reduced).all_pass());
}

TEST_CASE("reconstruction is deterministic") {
    qdm_test::PipelineRun run(projective_space(4, {5}), 3);
    BigConnection a =
        reconstruct_big(run.canonical, run.geom.presentation, 2, ReconMode::Reduced);
    BigConnection b =
        reconstruct_big(run.canonical, run.geom.presentation, 2, ReconMode::Reduced);
    for (size_t i = 0; i < a.big_a.size(); ++i) CHECK(a.big_a[i] == b.big_a[i]);
    for (size_t i = 0; i < a.big_omega.size(); ++i)
        CHECK(a.big_omega[i] == b.big_omega[i]);
}

TEST_CASE("rank-2 reconstruction passes the flatness diagnostics") {
    qdm_test::PipelineRun run(qdm_test::p1xp1(), 2);
    BigConnection big =
        reconstruct_big(run.canonical, run.geom.presentation, 2, ReconMode::Reduced);
    CHECK(big.divisor_index == std::vector<int>{1, 2});
    CHECK(big.loop_vars == std::vector<int>{3});
    FlatnessReport report = flatness_check(big);
    CHECK(report.all_pass());
    CHECK(!report.items.empty());
}

TEST_CASE("a corrupted connection is caught with a witness") {
    qdm_test::PipelineRun run(projective_space(2, {}), 3);
    BigConnection big =
        reconstruct_big(run.canonical, run.geom.presentation, 2, ReconMode::Reduced);
    // Perturb one entry; at least one identity must now fail and name a spot.
    TPoly<CoeffMatrix> bad = big.big_a[0];
    CoeffMatrix bump(3);
    bump.at(0, 0) = CoeffScalar(1);
    bad.add_term(TMonomial::zero(static_cast<int>(big.loop_vars.size())), q1(2), bump);
    big.big_a[0] = bad;
    FlatnessReport report = flatness_check(big);
    CHECK(!report.all_pass());
    bool witnessed = false;
    for (const auto& item : report.items)
        if (!item.pass && !item.witness.empty()) witnessed = true;
    CHECK(witnessed);
}

TEST_CASE("reconstruction validates its preconditions") {
    qdm_test::PipelineRun run(projective_space(2, {}), 2);
    // Raw (hbar-carrying) connection matrices are rejected...
    CHECK_THROWS_AS(reconstruct_big({run.frame}, run.geom.presentation, 1,
                                    ReconMode::Reduced),
                    ResidualHbar);
    // ... as is a constant term differing from the cup matrix.
    MatrixSeries shifted = run.canonical[0];
    CoeffMatrix off = shifted.coeff(q1(0));
    off.at(2, 0) = CoeffScalar(1);
    shifted.set(q1(0), off);
    CHECK_THROWS_AS(reconstruct_big({shifted}, run.geom.presentation, 1,
                                    ReconMode::Reduced),
                    ConfigError);
}

TEST_CASE("reconstruction reaches a fixed point within the t-order bound") {
    qdm_test::PipelineRun run(projective_space(7, {9}), 3);
    BigConnection big =
        reconstruct_big(run.canonical, run.geom.presentation, 5, ReconMode::Reduced);
    CHECK(big.t_order == 5);
    CHECK(flatness_check(big).all_pass());
    // Divisor derivative rule: dt^{i_1} acts as Q d/dQ on the stored slice.
    CHECK(big.t_derivative(1, big.big_a[0]) == big.big_a[0].log_q(0));
}
