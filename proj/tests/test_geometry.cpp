#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <doctest.h>

#include "qdm/geometry.hpp"
#include "test_helpers.hpp"

using namespace qdm;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Relabel basis indices 1..n-1 by a permutation fixing the unit.
CohPresentation permute_basis(const CohPresentation& p, const std::vector<int>& perm) {
    CohPresentation out;
    out.n = p.n;
    out.r = p.r;
    out.basis_monomials.resize(p.n);
    out.degrees.resize(p.n);
    for (int i = 0; i < p.n; ++i) {
        out.basis_monomials[perm[i]] = p.basis_monomials[i];
        out.degrees[perm[i]] = p.degrees[i];
    }
    for (const auto& m : p.cup_matrices) {
        RationalMatrix w(p.n, std::vector<Rational>(p.n));
        for (int i = 0; i < p.n; ++i)
            for (int j = 0; j < p.n; ++j) w[perm[i]][perm[j]] = m[i][j];
        out.cup_matrices.push_back(std::move(w));
    }
    if (p.pairing) {
        RationalMatrix w(p.n, std::vector<Rational>(p.n));
        for (int i = 0; i < p.n; ++i)
            for (int j = 0; j < p.n; ++j) w[perm[i]][perm[j]] = (*p.pairing)[i][j];
        out.pairing = w;
    }
    return out;
}

} // namespace

TEST_CASE("projective_space builds the standard data") {
    GeometryInput g = projective_space(7, {9});
    CHECK(g.r == 1);
    CHECK(g.weight_rows == std::vector<std::vector<int>>(8, {1}));
    CHECK(g.bundle_rows == std::vector<std::vector<int>>{{9}});
    CHECK(g.presentation.n == 8);
    CHECK(g.novikov_degree(0) == -2); // 2 * (8 - 9)

    // Cup matrix is the nilpotent shift, pairing the antidiagonal.
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            CHECK(g.presentation.cup_matrices[0][i][j] ==
                  Rational(i == j + 1 ? 1 : 0));
            CHECK((*g.presentation.pairing)[i][j] == Rational(i + j == 7 ? 1 : 0));
        }

    GeometryInput p1 = projective_space(1, {});
    CHECK(p1.weight_rows.size() == 2);
    CHECK(p1.bundle_rows.empty());
    CHECK(p1.presentation.n == 2);
    CHECK_THROWS_AS(projective_space(0, {}), ConfigError);
    CHECK_THROWS_AS(projective_space(2, {0}), ConfigError);
}

TEST_CASE("cup matrix nilpotency is sharp: M^n != 0, M^{n+1} = 0") {
    GeometryInput g = projective_space(3, {});
    CoeffMatrix m = g.presentation.cup_matrix(0);
    CoeffMatrix p = CoeffMatrix::identity(4);
    for (int k = 0; k < 3; ++k) p = p * m;
    CHECK(!p.is_zero()); // M^3 has the single corner entry
    CHECK((p * m).is_zero());
}

TEST_CASE("fixture round-trips to the generated geometry") {
    GeometryInput loaded =
        load_geometry(read_file(std::string(QDM_SOURCE_DIR) + "/data/p7_o9.json"));
    GeometryInput gen = projective_space(7, {9});
    CHECK(loaded.r == gen.r);
    CHECK(loaded.weight_rows == gen.weight_rows);
    CHECK(loaded.bundle_rows == gen.bundle_rows);
    CHECK(loaded.presentation.basis_monomials == gen.presentation.basis_monomials);
    CHECK(loaded.presentation.degrees == gen.presentation.degrees);
    CHECK(loaded.presentation.cup_matrices == gen.presentation.cup_matrices);
    CHECK(*loaded.presentation.pairing == *gen.presentation.pairing);
}

TEST_CASE("load_geometry rejects malformed and invalid documents") {
    CHECK_THROWS_AS(load_geometry("not json"), SchemaError);
    CHECK_THROWS_AS(load_geometry("{\"r\": 1}"), SchemaError);

    // A rank-2 document whose cup matrices fail to commute.
    GeometryInput good = qdm_test::p1xp1();
    GeometryInput bad = good;
    bad.presentation.cup_matrices[1][3][1] = Rational(2);
    CHECK_THROWS_WITH_AS(bad.validate(),
                         "ValidationError: cup matrices do not commute",
                         ValidationError);

    GeometryInput no_pairing = good;
    no_pairing.presentation.pairing.reset();
    CHECK_NOTHROW(no_pairing.validate());
    CHECK(!no_pairing.presentation.pairing.has_value());

    GeometryInput asym = good;
    (*asym.presentation.pairing)[0][3] = Rational(2);
    CHECK_THROWS_AS(asym.validate(), ValidationError);
}

TEST_CASE("validation catches grading and frame-unit violations") {
    GeometryInput g = projective_space(2, {});
    GeometryInput graded = g;
    // A degree-preserving (rather than raising) entry breaks the grading.
    graded.presentation.cup_matrices[0][1][1] = Rational(1);
    CHECK_THROWS_AS(graded.validate(), ValidationError);

    GeometryInput scaled = g;
    // Scaling the shift keeps every structural check except frame-unit.
    scaled.presentation.cup_matrices[0][1][0] = Rational(2);
    CHECK_THROWS_AS(scaled.validate(), ValidationError);
}

TEST_CASE("nef_ambient repeats weight rows and extends the bundle") {
    GeometryInput p1 = projective_space(1, {});
    GeometryInput same = nef_ambient(p1, {0, 0});
    CHECK(same.weight_rows == p1.weight_rows);
    CHECK(same.bundle_rows == p1.bundle_rows);
    CHECK_NOTHROW(same.validate()); // presentation carried over unchanged

    // P^1 with one repeat: the data of P^2 with O(1).
    GeometryInput y = nef_ambient(p1, {1, 0});
    CHECK(y.weight_rows == std::vector<std::vector<int>>(3, {1}));
    CHECK(y.bundle_rows == std::vector<std::vector<int>>{{1}});
    CHECK_THROWS_AS(y.validate(), PresentationRequired);

    // P^2 with two repeats on one row: P^4 with O(1) + O(1).
    GeometryInput p2 = projective_space(2, {});
    GeometryInput z = nef_ambient(p2, {0, 0, 2});
    CHECK(z.weight_rows == std::vector<std::vector<int>>(5, {1}));
    CHECK(z.bundle_rows == std::vector<std::vector<int>>(2, {1}));

    CHECK_THROWS_AS(nef_ambient(p1, {0}), ConfigError);
    CHECK_THROWS_AS(nef_ambient(p1, {-1, 0}), ConfigError);

    GeometryInput neg = p1;
    neg.weight_rows = {{-2}, {1}};
    CHECK_THROWS_AS(nef_ambient(neg, {0, 0}), NotNef);
}

TEST_CASE("randomly permuted bases still validate") {
    std::mt19937 rng(42);
    GeometryInput p3 = projective_space(3, {});
    GeometryInput q = qdm_test::p1xp1();
    for (int trial = 0; trial < 10; ++trial) {
        for (const CohPresentation* src : {&p3.presentation, &q.presentation}) {
            std::vector<int> perm(src->n);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin() + 1, perm.end(), rng); // keep the unit first
            CHECK_NOTHROW(permute_basis(*src, perm).validate());
        }
    }
}
