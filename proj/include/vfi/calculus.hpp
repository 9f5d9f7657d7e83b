#pragma once

#include "vfi/fields.hpp"
#include "vfi/quadrature.hpp"

namespace vfi {

enum class Bc { Tangent, Normal };
const char* bc_name(Bc bc);
Bc parse_bc(const std::string& s);

// Pointwise operators. curl is the antisymmetric matrix
// (d_j B^i - d_i B^j)/sqrt(2); its squared Frobenius norm equals the squared
// euclidean norm of the classical 3-d curl vector.
Mat curl_matrix(const VectorField& f, const Vec& x);
Mat sym_grad(const VectorField& f, const Vec& x);
double divergence(const VectorField& f, const Vec& x);

// Squared L2 norms over the domain plus the squared boundary trace norm.
struct Norms {
  double l2 = 0;        // ||B||^2
  double grad = 0;      // ||grad B||^2 (all n^2 partials)
  double curl = 0;      // ||curl B||^2
  double div = 0;       // ||div B||^2
  double sym = 0;       // ||Sym grad B||^2
  double boundary = 0;  // ||B||^2 on the boundary
};

Norms compute_norms(const VectorField& f, const Domain& dom,
                    const QuadratureRule& rule);

// Same, with the resolution gate: recompute at twice the order and demand
// relative agreement within `rel_tol`, else QuadratureUnderResolved.
Norms compute_norms_resolved(const VectorField& f, const Domain& dom, int order,
                             double rel_tol = 1e-8);

// Boundary curvature terms: the shape-operator pairing of the tangential
// trace, and the mean-curvature weighted trace.
double boundary_shape_term(const VectorField& f, const Domain& dom,
                           const QuadratureRule& rule);  // int s(B).B
double boundary_mean_term(const VectorField& f, const Domain& dom,
                          const QuadratureRule& rule);   // (n-1) int H |B|^2

// Max over boundary nodes of |B.N| (Tangent) or |B - (B.N)N| (Normal).
double bc_residual(const VectorField& f, const Domain& dom,
                   const QuadratureRule& rule, Bc bc);

}  // namespace vfi
