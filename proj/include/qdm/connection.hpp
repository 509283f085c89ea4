#ifndef QDM_CONNECTION_HPP
#define QDM_CONNECTION_HPP

#include "qdm/geometry.hpp"
#include "qdm/ifunction.hpp"
#include "qdm/matrix.hpp"

namespace qdm {

// Connection matrices A_a(Q, hbar) of the small quantum D-module in the
// frame given by the derivative columns of the I-function.
struct SmallConnection {
    std::vector<MatrixSeries> matrices; // A_a, one per Novikov variable
    const GeometryInput* geometry = nullptr;

    // hbar * (Q^b dA_a/dQ^b - Q^a dA_b/dQ^a) + [A_b, A_a] = 0 for all a, b;
    // throws InternalFlatnessViolation with a witness on failure.
    void check_flatness() const;
};

// Extract A_a from the frame columns S = L^{-1} via the degree recursion
// (A_a)_d = (hbar d_a + M_a) S_d - sum_{0<f<=d} S_{d-f} (A_a)_f, then
// re-verify the ladder identity at every retained exponent.
SmallConnection connection_from_frame(const GeometryInput& geom, const MatrixSeries& s);

// Rank-1 substitution oracle: expresses P^N as sum_{j<N} C_j(Q,hbar) P^j by
// repeatedly rewriting with P^N = Q * prod_{m=1}^{k}(kP + m hbar) (k = 0
// means the untwisted relation P^N = Q).  Returns the N columns C_0..C_{N-1}.
std::vector<ScalarSeries> pf_reduce(int big_n, int k, const SeriesContext& ctx);

} // namespace qdm

#endif
