#include <random>

#include <doctest.h>

#include "qdm/coeff_scalar.hpp"
#include "qdm/matrix.hpp"
#include "qdm/novikov.hpp"
#include "qdm/rational.hpp"

using namespace qdm;

namespace {

CoeffScalar random_scalar(std::mt19937& rng) {
    std::uniform_int_distribution<int> terms(0, 3), h(-2, 2), lam(0, 2),
        num(-9, 9), den(1, 3);
    CoeffScalar x;
    for (int t = terms(rng); t > 0; --t)
        x += CoeffScalar::term(Rational(num(rng), den(rng)), h(rng), lam(rng));
    return x;
}

CoeffMatrix random_matrix(std::mt19937& rng, int n) {
    std::uniform_int_distribution<int> num(-5, 5);
    CoeffMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = CoeffScalar(Rational(num(rng)));
    return m;
}

} // namespace

TEST_CASE("Rational canonical form and arithmetic") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-3, -6) == Rational(1, 2));
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
    CHECK(Rational::parse("22/7").str() == "22/7");
    CHECK(Rational::from_strings("-10", "4") == Rational(-5, 2));
    CHECK(Rational(7, 2).inverse() == Rational(2, 7));
    CHECK_THROWS_AS(Rational().inverse(), Error);
    CHECK(Rational(3).is_integer());
    CHECK(!Rational(3, 2).is_integer());
}

TEST_CASE("CoeffScalar ring axioms on random elements") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 50; ++trial) {
        CoeffScalar a = random_scalar(rng), b = random_scalar(rng),
                    c = random_scalar(rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(CoeffScalar(1) * a == a);
        CHECK((a + (-a)).is_zero());
        CHECK((a - a).is_zero());
    }
}

TEST_CASE("pi_plus is an idempotent linear splitting") {
    std::mt19937 rng(777);
    for (int trial = 0; trial < 50; ++trial) {
        CoeffScalar a = random_scalar(rng), b = random_scalar(rng);
        CHECK(a.pi_plus() + a.pi_minus() == a);
        CHECK(a.pi_plus().pi_plus() == a.pi_plus());
        CHECK(a.pi_minus().pi_minus() == a.pi_minus());
        CHECK(a.pi_plus().pi_minus().is_zero());
        CHECK((a + b).pi_plus() == a.pi_plus() + b.pi_plus());
    }
    CoeffScalar x = CoeffScalar::hbar(-1) + CoeffScalar(3) + CoeffScalar::hbar(2);
    CHECK(x.pi_plus() == CoeffScalar(3) + CoeffScalar::hbar(2));
    CHECK(x.pi_minus() == CoeffScalar::hbar(-1));
}

TEST_CASE("hbar_specialize evaluates Laurent polynomials") {
    CoeffScalar x = CoeffScalar::term(Rational(3), 2) +
                    CoeffScalar::term(Rational(1, 2), -1) + CoeffScalar(5);
    // 3*4 + (1/2)/2 + 5 = 17 + 1/4
    CHECK(x.hbar_specialize(Rational(2)) == CoeffScalar(Rational(69, 4)));
    CHECK_THROWS_AS(x.hbar_specialize(Rational(0)), NegativeHbarPole);
    CoeffScalar poly = CoeffScalar::hbar(3) + CoeffScalar(1);
    CHECK(poly.hbar_specialize(Rational(0)) == CoeffScalar(1));
}

TEST_CASE("unit_inverse inverts monomial units only") {
    CoeffScalar u = CoeffScalar::term(Rational(3), 2);
    CHECK(u.unit_inverse() == CoeffScalar::term(Rational(1, 3), -2));
    CHECK(u * u.unit_inverse() == CoeffScalar(1));
    CoeffScalar nonunit = CoeffScalar(1) + CoeffScalar::hbar();
    CHECK_THROWS_AS(nonunit.unit_inverse(), NonInvertibleConstantTerm);
    CHECK_THROWS_AS(CoeffScalar::lambda().unit_inverse(), NonInvertibleConstantTerm);
}

TEST_CASE("NovikovSeries truncation and derivative") {
    SeriesContext ctx(1, 2);
    ScalarSeries q(ctx);
    q.set(NovikovExponent({1}), CoeffScalar(1));
    ScalarSeries q2 = q * q;
    CHECK(q2.coeff(NovikovExponent({2})) == CoeffScalar(1));
    CHECK((q2 * q).is_zero()); // Q^3 dropped by the truncation
    CHECK_THROWS_AS(q.set(NovikovExponent({3}), CoeffScalar(1)), ConfigError);

    ScalarSeries s = q + q2;
    ScalarSeries ds = s.log_derivative(0);
    CHECK(ds.coeff(NovikovExponent({1})) == CoeffScalar(1));
    CHECK(ds.coeff(NovikovExponent({2})) == CoeffScalar(2));

    SeriesContext wctx(2, 4, {1, 2});
    CHECK(wctx.admits(NovikovExponent({2, 1})));
    CHECK(!wctx.admits(NovikovExponent({1, 2})));
    CHECK(static_cast<int>(wctx.exponents().size()) == 5 + 3 + 1); // d2 = 0,1,2
}

TEST_CASE("invert_constant_term handles unit pivots") {
    CHECK(invert_constant_term(CoeffMatrix::identity(3)).is_identity());

    CoeffMatrix m(2);
    m.at(0, 1) = CoeffScalar::term(Rational(2), 1);
    m.at(1, 0) = CoeffScalar::hbar(-1);
    CoeffMatrix inv = invert_constant_term(m);
    CHECK((m * inv).is_identity());
    CHECK((inv * m).is_identity());

    CoeffMatrix bad(2);
    bad.at(0, 0) = CoeffScalar(1) + CoeffScalar::hbar();
    bad.at(1, 0) = CoeffScalar(1) + CoeffScalar::hbar();
    bad.at(1, 1) = CoeffScalar(1);
    CHECK_THROWS_AS(invert_constant_term(bad), NonInvertibleConstantTerm);
}

TEST_CASE("series_invert of a nilpotent shift matches the geometric series") {
    SeriesContext ctx(1, 3);
    const int n = 3;
    CoeffMatrix shift(n);
    shift.at(1, 0) = CoeffScalar(1);
    shift.at(2, 1) = CoeffScalar(1);

    MatrixSeries s = identity_series(ctx, n);
    s.set(NovikovExponent({1}), shift);
    MatrixSeries inv = series_invert(s);

    CHECK(inv.coeff(NovikovExponent({1})) == -shift);
    CHECK(inv.coeff(NovikovExponent({2})) == shift * shift);
    CHECK(inv.coeff(NovikovExponent({3})).is_zero()); // shift^3 = 0
    CHECK(s * inv == identity_series(ctx, n));
    CHECK(inv * s == identity_series(ctx, n));
}

TEST_CASE("series_invert multiply-back on random series") {
    std::mt19937 rng(2024);
    SeriesContext ctx(1, 3);
    for (int trial = 0; trial < 5; ++trial) {
        MatrixSeries s = identity_series(ctx, 3);
        for (int d = 1; d <= 3; ++d)
            s.set(NovikovExponent({d}), random_matrix(rng, 3));
        MatrixSeries inv = series_invert(s);
        CHECK(s * inv == identity_series(ctx, 3));
        CHECK(inv * s == identity_series(ctx, 3));
    }
}

TEST_CASE("matrix pi_plus acts entrywise on series") {
    SeriesContext ctx(1, 1);
    CoeffMatrix m(2);
    m.at(0, 0) = CoeffScalar::hbar(-2) + CoeffScalar(4);
    m.at(1, 1) = CoeffScalar::hbar(1);
    MatrixSeries s(ctx);
    s.set(NovikovExponent({1}), m);
    MatrixSeries p = pi_plus(s);
    CoeffMatrix expect(2);
    expect.at(0, 0) = CoeffScalar(4);
    expect.at(1, 1) = CoeffScalar::hbar(1);
    CHECK(p.coeff(NovikovExponent({1})) == expect);
}

TEST_CASE("zero-dimensional matrices and vectors act as universal zeros") {
    CoeffMatrix z;
    CoeffMatrix m(2);
    m.at(0, 1) = CoeffScalar(7);
    CHECK(z + m == m);
    CHECK(m - z == m);
    CHECK((m * z).is_zero());
    CoeffVector zv;
    CoeffVector v(2);
    v[0] = CoeffScalar(3);
    CHECK(zv + v == v);
    CHECK(v - zv == v);
}
