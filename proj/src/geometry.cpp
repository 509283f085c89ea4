#include "qdm/geometry.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace qdm {

namespace {

int total(const std::vector<int>& v) {
    int s = 0;
    for (int x : v) s += x;
    return s;
}

CoeffMatrix to_coeff_matrix(const RationalMatrix& m) {
    const int n = static_cast<int>(m.size());
    CoeffMatrix out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!m[i][j].is_zero()) out.at(i, j) = CoeffScalar(m[i][j]);
    return out;
}

bool rational_matrix_invertible(RationalMatrix m) {
    const int n = static_cast<int>(m.size());
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int row = col; row < n; ++row)
            if (!m[row][col].is_zero()) {
                pivot = row;
                break;
            }
        if (pivot < 0) return false;
        std::swap(m[pivot], m[col]);
        Rational inv = m[col][col].inverse();
        for (int j = 0; j < n; ++j) m[col][j] *= inv;
        for (int row = col + 1; row < n; ++row) {
            Rational f = m[row][col];
            if (f.is_zero()) continue;
            for (int j = 0; j < n; ++j) m[row][j] -= f * m[col][j];
        }
    }
    return true;
}

} // namespace

CoeffMatrix CohPresentation::cup_matrix(int a) const {
    return to_coeff_matrix(cup_matrices[a]);
}

CoeffMatrix CohPresentation::class_matrix(const std::vector<int>& row) const {
    CoeffMatrix m(n);
    for (int a = 0; a < r; ++a) {
        if (row[a] == 0) continue;
        CoeffMatrix ma = cup_matrix(a);
        ma *= Rational(row[a]);
        m += ma;
    }
    return m;
}

void CohPresentation::validate() const {
    if (n <= 0) throw ValidationError("presentation dimension must be positive");
    if (r < 0) throw ValidationError("negative generator count");
    if (static_cast<int>(basis_monomials.size()) != n)
        throw ValidationError("basis_monomials size != n");
    if (static_cast<int>(degrees.size()) != n)
        throw ValidationError("degrees size != n");
    if (static_cast<int>(cup_matrices.size()) != r)
        throw ValidationError("cup_matrices size != r");
    for (const auto& mu : basis_monomials)
        if (static_cast<int>(mu.size()) != r)
            throw ValidationError("basis monomial length != r");
    for (const auto& m : cup_matrices) {
        if (static_cast<int>(m.size()) != n)
            throw ValidationError("cup matrix is not n x n");
        for (const auto& row : m)
            if (static_cast<int>(row.size()) != n)
                throw ValidationError("cup matrix is not n x n");
    }
    if (total(basis_monomials[0]) != 0)
        throw ValidationError("basis monomial mu_0 must be the unit (all zero)");
    for (int i = 0; i < n; ++i) {
        if (degrees[i] != 2 * total(basis_monomials[i]))
            throw ValidationError("degrees[" + std::to_string(i) +
                                  "] != 2*|mu_i|");
    }

    std::vector<CoeffMatrix> cups;
    cups.reserve(r);
    for (int a = 0; a < r; ++a) cups.push_back(cup_matrix(a));

    for (int a = 0; a < r; ++a)
        for (int b = a + 1; b < r; ++b)
            if (!(cups[a] * cups[b] == cups[b] * cups[a]))
                throw ValidationError("cup matrices do not commute");

    for (int a = 0; a < r; ++a) {
        CoeffMatrix p = CoeffMatrix::identity(n);
        for (int k = 0; k < n; ++k) p = p * cups[a];
        if (!p.is_zero())
            throw ValidationError("cup matrix M_" + std::to_string(a) +
                                  " is not nilpotent");
    }

    for (int a = 0; a < r; ++a)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!cups[a].at(j, i).is_zero() && degrees[j] != degrees[i] + 2)
                    throw ValidationError("cup matrix M_" + std::to_string(a) +
                                          " violates grading at (" +
                                          std::to_string(j) + "," +
                                          std::to_string(i) + ")");

    for (int i = 0; i < n; ++i) {
        CoeffVector v = CoeffVector::basis(n, 0);
        for (int a = 0; a < r; ++a)
            for (int k = 0; k < basis_monomials[i][a]; ++k) v = cups[a] * v;
        if (!(v == CoeffVector::basis(n, i)))
            throw ValidationError("frame-unit condition fails for basis index " +
                                  std::to_string(i));
    }

    if (pairing) {
        const RationalMatrix& g = *pairing;
        if (static_cast<int>(g.size()) != n)
            throw ValidationError("pairing is not n x n");
        for (const auto& row : g)
            if (static_cast<int>(row.size()) != n)
                throw ValidationError("pairing is not n x n");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (g[i][j] != g[j][i])
                    throw ValidationError("pairing is not symmetric");
        if (!rational_matrix_invertible(g))
            throw ValidationError("pairing is degenerate");
    }
}

void GeometryInput::validate() const {
    if (presentation.n == 0)
        throw PresentationRequired("geometry '" + name +
                                   "' has no cohomology presentation attached");
    presentation.validate();
    if (r != presentation.r)
        throw ValidationError("geometry rank r does not match presentation");
    for (const auto& u : weight_rows)
        if (static_cast<int>(u.size()) != r)
            throw ValidationError("weight row length != r");
    for (const auto& v : bundle_rows) {
        if (static_cast<int>(v.size()) != r)
            throw ValidationError("bundle row length != r");
        if (convex)
            for (int x : v)
                if (x < 0)
                    throw ValidationError(
                        "bundle row has a negative entry but convex flag is set");
    }
}

int GeometryInput::novikov_degree(int a) const {
    int s = 0;
    for (const auto& u : weight_rows) s += u[a];
    for (const auto& v : bundle_rows) s -= v[a];
    return 2 * s;
}

GeometryInput projective_space(int n_dim, const std::vector<int>& twists) {
    if (n_dim < 1) throw ConfigError("projective_space requires nDim >= 1");
    for (int k : twists)
        if (k < 1) throw ConfigError("twists must be positive");

    GeometryInput g;
    std::ostringstream name;
    name << "P" << n_dim;
    for (size_t j = 0; j < twists.size(); ++j)
        name << (j ? "," : "/") << "O(" << twists[j] << ")";
    g.name = name.str();
    g.r = 1;
    g.weight_rows.assign(n_dim + 1, {1});
    for (int k : twists) g.bundle_rows.push_back({k});
    g.convex = true;

    CohPresentation& p = g.presentation;
    const int n = n_dim + 1;
    p.n = n;
    p.r = 1;
    for (int i = 0; i < n; ++i) {
        p.basis_monomials.push_back({i});
        p.degrees.push_back(2 * i);
    }
    RationalMatrix shift(n, std::vector<Rational>(n));
    for (int i = 1; i < n; ++i) shift[i][i - 1] = Rational(1);
    p.cup_matrices.push_back(shift);
    RationalMatrix pairing(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i) pairing[i][n - 1 - i] = Rational(1);
    p.pairing = pairing;

    g.validate();
    return g;
}

GeometryInput nef_ambient(const GeometryInput& geom, const std::vector<int>& repeats) {
    if (repeats.size() != geom.weight_rows.size())
        throw ConfigError("repeats length must equal the number of weight rows");
    for (int x : repeats)
        if (x < 0) throw ConfigError("repeats must be nonnegative");

    // c_1(Y) = sum_i (1 + repeats[i]) u_i must be nef in the chosen basis.
    std::vector<int> c1(geom.r, 0);
    for (size_t i = 0; i < geom.weight_rows.size(); ++i)
        for (int a = 0; a < geom.r; ++a)
            c1[a] += (1 + repeats[i]) * geom.weight_rows[i][a];
    for (int a = 0; a < geom.r; ++a)
        if (c1[a] < 0)
            throw NotNef("c1 of the ambient is negative in component " +
                         std::to_string(a));

    GeometryInput y;
    y.name = geom.name + "-ambient";
    y.r = geom.r;
    y.convex = geom.convex;
    y.bundle_rows = geom.bundle_rows;
    for (size_t i = 0; i < geom.weight_rows.size(); ++i) {
        for (int k = 0; k <= repeats[i]; ++k) y.weight_rows.push_back(geom.weight_rows[i]);
        for (int k = 0; k < repeats[i]; ++k) y.bundle_rows.push_back(geom.weight_rows[i]);
    }
    // Presentation of Y is intentionally left empty; callers must attach one
    // (GeometryInput::validate raises PresentationRequired until then).
    if (std::all_of(repeats.begin(), repeats.end(), [](int x) { return x == 0; }))
        y.presentation = geom.presentation;
    return y;
}

namespace {

Rational parse_rational(const nlohmann::json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_object() && j.contains("num")) {
        auto field = [&](const char* key) -> std::string {
            if (!j.contains(key)) return "1";
            const auto& v = j.at(key);
            return v.is_string() ? v.get<std::string>()
                                 : std::to_string(v.get<long long>());
        };
        return Rational::from_strings(field("num"), field("den"));
    }
    throw SchemaError("expected rational (int, decimal string, or {num,den})");
}

RationalMatrix parse_matrix(const nlohmann::json& j) {
    if (!j.is_array()) throw SchemaError("expected matrix (array of arrays)");
    RationalMatrix m;
    for (const auto& row : j) {
        if (!row.is_array()) throw SchemaError("expected matrix row");
        std::vector<Rational> out;
        for (const auto& x : row) out.push_back(parse_rational(x));
        m.push_back(std::move(out));
    }
    return m;
}

std::vector<std::vector<int>> parse_int_rows(const nlohmann::json& j, const char* what) {
    if (!j.is_array()) throw SchemaError(std::string("expected array for ") + what);
    std::vector<std::vector<int>> rows;
    for (const auto& row : j) {
        if (!row.is_array()) throw SchemaError(std::string("expected int row in ") + what);
        rows.push_back(row.get<std::vector<int>>());
    }
    return rows;
}

} // namespace

GeometryInput load_geometry(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    try {
        GeometryInput g;
        g.name = j.value("name", "unnamed");
        g.r = j.at("r").get<int>();
        g.weight_rows = parse_int_rows(j.at("weights"), "weights");
        g.bundle_rows = j.contains("bundle") && !j.at("bundle").is_null()
                            ? parse_int_rows(j.at("bundle"), "bundle")
                            : std::vector<std::vector<int>>{};
        g.convex = j.value("convex", true);

        const auto& c = j.at("cohomology");
        CohPresentation& p = g.presentation;
        p.n = c.at("n").get<int>();
        p.r = g.r;
        p.basis_monomials = parse_int_rows(c.at("basis_monomials"), "basis_monomials");
        p.degrees = c.at("degrees").get<std::vector<int>>();
        for (const auto& m : c.at("cup_matrices")) p.cup_matrices.push_back(parse_matrix(m));
        if (c.contains("pairing") && !c.at("pairing").is_null())
            p.pairing = parse_matrix(c.at("pairing"));

        g.validate();
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("geometry schema violation: ") + e.what());
    }
}

} // namespace qdm
