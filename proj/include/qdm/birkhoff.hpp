#ifndef QDM_BIRKHOFF_HPP
#define QDM_BIRKHOFF_HPP

#include "qdm/connection.hpp"
#include "qdm/ifunction.hpp"
#include "qdm/matrix.hpp"

namespace qdm {

// L = L_+ L_- split of the fundamental solution: lPlus has only
// nonnegative hbar powers with identity constant term; lMinusInv is the
// identity plus strictly negative hbar powers, and equals Linv * lPlus.
struct BirkhoffFactors {
    MatrixSeries l_plus;
    MatrixSeries l_minus_inv;
};

// Factorize from L^{-1} by the degree recursion
// L_{+,d} = -sum_{0<f<=d} pi_plus(T_f L_{+,d-f}); cross-checked against the
// independent Neumann-sum formula L_+ v = sum_k (id - pi_plus o L^{-1})^k v.
BirkhoffFactors birkhoff_factorize(const MatrixSeries& linv);

// Neumann-sum route alone (test oracle).
MatrixSeries birkhoff_l_plus_neumann(const MatrixSeries& linv);

// Gauge the connection into the canonical frame:
// A_a -> L_+^{-1} A_a L_+ + hbar L_+^{-1} Q^a dL_+/dQ^a.
// Every entry of the result must be hbar-free (ResidualHbar otherwise).
std::vector<MatrixSeries> canonical_connection(const SmallConnection& conn,
                                               const BirkhoffFactors& factors);

// J-function of the canonical frame: first column of L_-^{-1}.
CohVectorSeries canonical_j(const BirkhoffFactors& factors, const GeometryInput& geom);

} // namespace qdm

#endif
