#ifndef QDM_MIRRORMAP_HPP
#define QDM_MIRRORMAP_HPP

#include <vector>

#include "qdm/bigrecon.hpp"
#include "qdm/geometry.hpp"
#include "qdm/tpoly.hpp"

namespace qdm {

// Flat-coordinate shift functions: t-hat^k = t^k + g^k(Q) with g^k(0) = 0.
struct MirrorMap {
    std::vector<ScalarSeries> g; // one hbar-free series per basis index
};

// Solve sum_k (Q^a d/dQ^a g^k) e_k = (A_a(Q) - M_a) e_0 with g^k(0) = 0.
MirrorMap mirror_map(const std::vector<MatrixSeries>& canonical,
                     const CohPresentation& pres);

// Structure constants of the big quantum product in flat coordinates:
// polynomials in the t-hat variables with q-series coefficients, where
// q^a = Q^a e^{t-hat^a}.
struct QuantumProductTable {
    std::vector<int> t_vars;     // basis indices of the retained t-hat variables
    std::vector<int> divisor_index;
    std::vector<TPoly<CoeffMatrix>> structure; // n multiplication matrices
    const CohPresentation* presentation = nullptr;

    const TPoly<CoeffMatrix>& matrix(int k) const { return structure[k]; }
};

// Substitute t^j := t-hat^j - g^j(Q), apply the connection coordinate change
// in the divisor directions, and repackage all divisor dependence through
// q^a = Q^a e^{t-hat^a}.  Requires a reduced-mode reconstruction.
QuantumProductTable flat_products(const BigConnection& big, const MirrorMap& map);

// Twisted three-point tensor and potential derivative for a degree-k
// hypersurface in a rank-one ambient space.
struct GwReport {
    int degree_k = 0;
    // <e_k * e_i, e_j>_V, totally symmetric.
    std::vector<std::vector<std::vector<TPoly<CoeffScalar>>>> three_point;
    TPoly<CoeffScalar> potential_third; // (d/dt-hat^1)^3 F
};

GwReport gw_extract(const QuantumProductTable& table, const CohPresentation& pres,
                    int hypersurface_degree);

} // namespace qdm

#endif
