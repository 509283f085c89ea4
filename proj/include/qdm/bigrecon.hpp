#ifndef QDM_BIGRECON_HPP
#define QDM_BIGRECON_HPP

#include <string>
#include <vector>

#include "qdm/geometry.hpp"
#include "qdm/tpoly.hpp"

namespace qdm {

enum class ReconMode { Reduced, Full };

// Big quantum D-module connection reconstructed from the canonical small
// connection.  In Reduced mode the stored polynomials range over the
// degree >= 4 coordinates only; the unit and divisor directions are
// recovered by Omega_0 = id, Omega_{i_a} = A_a, and the substitution
// Q^a -> Q^a e^{t^a} (string/divisor structure).
struct BigConnection {
    ReconMode mode = ReconMode::Reduced;
    int t_order = 0;
    std::vector<int> loop_vars;          // basis indices carried as t-variables
    std::vector<int> divisor_index;      // basis index of p_a e_0 per generator a
    std::vector<TPoly<CoeffMatrix>> big_a;     // r matrices A_a(Q, t)
    std::vector<TPoly<CoeffMatrix>> big_omega; // n matrices Omega_i(Q, t)
    const CohPresentation* presentation = nullptr;

    // d/dt^i with the string/divisor rule applied for non-loop indices in
    // Reduced mode (dt^0 = 0, dt^{i_a} = Q^a d/dQ^a).
    TPoly<CoeffMatrix> t_derivative(int basis_index, const TPoly<CoeffMatrix>& x) const;
};

// Inductive flatness solver: from the hbar-free canonical matrices A_a(Q)
// build (A_a(Q,t), Omega_i(Q,t)) with Omega_i e_0 = e_i, order by order in
// the t-variables through degree n_t.
BigConnection reconstruct_big(const std::vector<MatrixSeries>& canonical,
                              const CohPresentation& pres, int n_t, ReconMode mode);

struct FlatnessReport {
    struct Item {
        std::string name;
        bool pass = false;
        std::string witness; // first offending (t-monomial, degree, entry)
    };
    std::vector<Item> items;
    bool all_pass() const {
        for (const auto& it : items)
            if (!it.pass) return false;
        return true;
    }
};

// Full per-identity diagnostic: pairwise commutators and all integrability
// relations among {A_a, Omega_i}, plus the unit-column condition.
FlatnessReport flatness_check(const BigConnection& big);

} // namespace qdm

#endif
