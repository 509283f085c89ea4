#ifndef QDM_IFUNCTION_HPP
#define QDM_IFUNCTION_HPP

#include "qdm/geometry.hpp"
#include "qdm/matrix.hpp"

namespace qdm {

enum class LambdaMode { Zero, Poly };

// Cohomology-valued series attached to a geometry.
struct CohVectorSeries {
    VectorSeries series;
    const GeometryInput* geometry = nullptr;
};

// The hypergeometric series of (X, V): for each effective degree d the
// product of toric factors for <u_i, d> and bundle factors for <v_j, d>
// applied to the unit class.
CohVectorSeries i_function(const GeometryInput& geom, const SeriesContext& ctx,
                           LambdaMode lambda_mode);

// Multiply each Q^d coefficient by the bundle factors of `bundle_rows`.
CohVectorSeries hypergeometric_modification(const CohVectorSeries& series,
                                            const std::vector<std::vector<int>>& bundle_rows,
                                            LambdaMode lambda_mode);

// Frame columns L^{-1}: column k is the basis-monomial derivative ladder
// prod_a (hbar Q^a d/dQ^a + p_a)^{mu_k(a)} applied to I.
MatrixSeries frame_columns(const GeometryInput& geom, const CohVectorSeries& I);

// (hbar Q^a d/dQ^a + p_a) acting on a cohomology-valued series.
VectorSeries ladder_operator(const GeometryInput& geom, int a, const VectorSeries& v);

// Same operator acting columnwise on a matrix series.
MatrixSeries ladder_operator(const GeometryInput& geom, int a, const MatrixSeries& m);

} // namespace qdm

#endif
