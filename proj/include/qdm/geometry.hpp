#ifndef QDM_GEOMETRY_HPP
#define QDM_GEOMETRY_HPP

#include <optional>
#include <string>
#include <vector>

#include "qdm/matrix.hpp"
#include "qdm/rational.hpp"

namespace qdm {

// Rational n x n matrix (cup-product and pairing data).
using RationalMatrix = std::vector<std::vector<Rational>>;

// Finite presentation of the even cohomology ring H*(X): a monomial basis
// generated from the unit by the degree-2 classes p_a, plus their
// cup-multiplication matrices and (optionally) the Poincare pairing.
struct CohPresentation {
    int n = 0;                                   // dim H*(X)
    int r = 0;                                   // number of degree-2 generators
    std::vector<std::vector<int>> basis_monomials; // mu_i in N^r, mu_0 = 0
    std::vector<int> degrees;                    // cohomological degree of e_i
    std::vector<RationalMatrix> cup_matrices;    // M_a, multiplication by p_a
    std::optional<RationalMatrix> pairing;       // g_ij = int e_i e_j

    // Throws ValidationError naming the first violated invariant.
    void validate() const;

    CoeffMatrix cup_matrix(int a) const;
    // Multiplication matrix of the class sum_a row[a] * p_a.
    CoeffMatrix class_matrix(const std::vector<int>& row) const;
};

// Combinatorial input: toric weight rows, twisting-bundle rows, and the
// cohomology presentation of the ambient space.
struct GeometryInput {
    std::string name;
    int r = 0;
    std::vector<std::vector<int>> weight_rows;   // u_i in Z^r
    std::vector<std::vector<int>> bundle_rows;   // v_j in Z^r
    CohPresentation presentation;
    bool convex = true;

    int dim() const { return presentation.n; }
    void validate() const;
    // 2 * <sum u_i - sum v_j, dual a>; the grading degree of Q^a.
    int novikov_degree(int a) const;
};

// P^nDim with bundle O(k_1) + ... + O(k_l).
GeometryInput projective_space(int n_dim, const std::vector<int>& twists);

// Parse and validate the geometry JSON schema.
GeometryInput load_geometry(const std::string& json_text);

// Repeat weight row u_i a further repeats[i] times and extend the bundle by
// the repeated divisor classes (nef-ambient embedding).  The presentation of
// the result must be supplied by the caller before downstream use.
GeometryInput nef_ambient(const GeometryInput& geom, const std::vector<int>& repeats);

} // namespace qdm

#endif
