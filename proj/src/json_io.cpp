#include "qdm/json_io.hpp"

#include <sstream>

namespace qdm {

json to_json(const CoeffScalar& x) {
    json arr = json::array();
    for (const auto& [k, v] : x.terms()) {
        json t;
        t["h"] = k.h;
        t["lam"] = k.lam;
        t["num"] = v.num_string();
        t["den"] = v.den_string();
        arr.push_back(std::move(t));
    }
    return arr;
}

json to_json(const CoeffVector& v) {
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(to_json(v[i]));
    return arr;
}

json to_json(const CoeffMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.dim(); ++j) row.push_back(to_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {
template <class T>
json series_to_json(const NovikovSeries<T>& s) {
    json arr = json::array();
    for (const auto& [d, v] : s.coeffs()) {
        json t;
        t["d"] = d.d;
        t["value"] = to_json(v);
        arr.push_back(std::move(t));
    }
    return arr;
}
template <class T>
json tpoly_to_json(const TPoly<T>& p) {
    json arr = json::array();
    for (const auto& [mono, s] : p.terms()) {
        json t;
        t["t"] = mono.m;
        t["series"] = series_to_json(s);
        arr.push_back(std::move(t));
    }
    return arr;
}
} // namespace

json to_json(const ScalarSeries& s) { return series_to_json(s); }
json to_json(const VectorSeries& s) { return series_to_json(s); }
json to_json(const MatrixSeries& s) { return series_to_json(s); }
json to_json(const TPoly<CoeffScalar>& p) { return tpoly_to_json(p); }
json to_json(const TPoly<CoeffMatrix>& p) { return tpoly_to_json(p); }

json to_json(const MirrorMap& map) {
    json arr = json::array();
    for (const auto& g : map.g) arr.push_back(to_json(g));
    return arr;
}

json to_json(const FlatnessReport& report) {
    json arr = json::array();
    for (const auto& item : report.items) {
        json t;
        t["identity"] = item.name;
        t["pass"] = item.pass;
        if (!item.pass) t["witness"] = item.witness;
        arr.push_back(std::move(t));
    }
    return arr;
}

namespace {
std::string scalar_text(const CoeffScalar& x) { return x.str(); }

std::string vector_text(const CoeffVector& v) {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < v.size(); ++i) os << (i ? "; " : "") << scalar_text(v[i]);
    os << "]";
    return os.str();
}

std::string matrix_text(const CoeffMatrix& m) {
    std::ostringstream os;
    for (int i = 0; i < m.dim(); ++i) {
        os << "  [";
        for (int j = 0; j < m.dim(); ++j) os << (j ? "; " : "") << scalar_text(m.at(i, j));
        os << "]\n";
    }
    return os.str();
}

template <class T, class F>
std::string series_text(const NovikovSeries<T>& s, F&& render) {
    std::ostringstream os;
    for (const auto& [d, v] : s.coeffs()) os << "Q" << d.str() << ":\n" << render(v);
    return os.str();
}
} // namespace

std::string to_text(const ScalarSeries& s) {
    return series_text(s, [](const CoeffScalar& x) { return scalar_text(x) + "\n"; });
}
std::string to_text(const VectorSeries& s) {
    return series_text(s, [](const CoeffVector& v) { return vector_text(v) + "\n"; });
}
std::string to_text(const MatrixSeries& s) {
    return series_text(s, [](const CoeffMatrix& m) { return matrix_text(m); });
}
std::string to_text(const TPoly<CoeffMatrix>& p) {
    std::ostringstream os;
    for (const auto& [mono, s] : p.terms())
        os << "t" << mono.str() << ":\n" << to_text(s);
    return os.str();
}

std::string table_to_csv(const QuantumProductTable& table) {
    std::ostringstream os;
    os << "k,i,j,t_monomial,q_exponent,value\n";
    const int n = table.presentation->n;
    for (int k = 0; k < n; ++k) {
        for (const auto& [mono, s] : table.structure[k].terms())
            for (const auto& [d, m] : s.coeffs())
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        const CoeffScalar& x = m.at(j, i);
                        if (x.is_zero()) continue;
                        os << k << "," << i << "," << j << ",\"" << mono.str()
                           << "\",\"" << d.str() << "\"," << x.str() << "\n";
                    }
    }
    return os.str();
}

} // namespace qdm
