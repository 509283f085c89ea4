#ifndef QDM_JSON_IO_HPP
#define QDM_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "qdm/bigrecon.hpp"
#include "qdm/matrix.hpp"
#include "qdm/mirrormap.hpp"
#include "qdm/tpoly.hpp"

namespace qdm {

using json = nlohmann::ordered_json;

// CoeffScalar: array of {"h": int, "lam": int, "num": str, "den": str},
// ordered by (h, lam).
json to_json(const CoeffScalar& x);
json to_json(const CoeffVector& v);
json to_json(const CoeffMatrix& m);

// NovikovSeries: array of {"d": [int,...], "value": ...}, ordered by exponent.
json to_json(const ScalarSeries& s);
json to_json(const VectorSeries& s);
json to_json(const MatrixSeries& s);

// TPoly: array of {"t": [int,...], "series": ...}, ordered by monomial.
json to_json(const TPoly<CoeffScalar>& p);
json to_json(const TPoly<CoeffMatrix>& p);

json to_json(const MirrorMap& map);
json to_json(const FlatnessReport& report);

// Compact human-readable renderings (--format text).
std::string to_text(const ScalarSeries& s);
std::string to_text(const VectorSeries& s);
std::string to_text(const MatrixSeries& s);
std::string to_text(const TPoly<CoeffMatrix>& p);

// CSV rows "k,i,j,t_monomial,q_exponent,value" for a product table.
std::string table_to_csv(const QuantumProductTable& table);

} // namespace qdm

#endif
