#pragma once

#include <string>
#include <vector>

#include "vfi/calculus.hpp"

namespace vfi {

// ---------------------------------------------------------------------------
// Dimensional constants and the epsilon balance in their derivation
// ---------------------------------------------------------------------------

// C1(n) = 1 + (1 + sqrt(1+n))^2 governs tangent boundary conditions,
// C2(n) = 1 + (n-1 + sqrt(n-1)sqrt(2n-1))^2 the normal ones. C1 expands to
// n + 3 + 2 sqrt(1+n).
double constant_c1(int n);
double constant_c2(int n);
double theorem_constant(Bc bc, int n);

struct EpsilonChoice {
  double c_n = 0;           // 1 (tangent) or n-1 (normal)
  double epsilon = 0;       // 1 / (c + sqrt(c) sqrt(c+n))
  double amplification = 0; // (c + sqrt(c) sqrt(c+n))^2 = (c/(1-c eps))(n+1/eps)
};
EpsilonChoice optimal_epsilon(Bc bc, int n);

// constant * max(rho^2, rho^-2): transfers the reach-normalized constant to
// the classical inequality on a domain of reach rho.
double corollary_transfer(double constant, double rho);

// ---------------------------------------------------------------------------
// Integral identities and inequality checks
// ---------------------------------------------------------------------------

struct IdentityResiduals {
  double boundary_term = 0;   // the bc-applicable curvature term
  double gaffney_abs = 0, gaffney_rel = 0;
  double korn_abs = 0, korn_rel = 0;
};

// ||grad B||^2 = ||curl B||^2 + ||div B||^2 + boundary term   (gaffney)
// ||grad B||^2 = 2||Sym grad B||^2 - ||div B||^2 - boundary term  (korn)
// where the boundary term is the shape pairing for tangent fields and the
// mean-curvature term for normal fields. Requires bc_residual <= 1e-10.
IdentityResiduals identity_residuals(const VectorField& f, const Domain& dom,
                                     const QuadratureRule& rule, Bc bc);

inline double gaffney_identity_residual(const VectorField& f, const Domain& dom,
                                        const QuadratureRule& rule, Bc bc) {
  return identity_residuals(f, dom, rule, bc).gaffney_abs;
}
inline double korn_identity_residual(const VectorField& f, const Domain& dom,
                                     const QuadratureRule& rule, Bc bc) {
  return identity_residuals(f, dom, rule, bc).korn_abs;
}

// slack of  ||B||^2_boundary <= eps*rho*||grad B||^2 + ((n+1/eps)/rho)*||B||^2.
// Returns RHS - LHS (and RHS via out-param when needed).
double trace_slack(const Norms& norms, int n, double rho, double eps,
                   double* rhs_out = nullptr);
double trace_slack(const VectorField& f, const Domain& dom,
                   const QuadratureRule& rule, double eps,
                   double* rhs_out = nullptr);

// Log-spaced epsilon grid used by the trace suite.
std::vector<double> epsilon_grid(double lo = 1e-3, double hi = 1e3, int count = 25);

struct QuotientReport {
  std::string domain_id;
  std::string field;
  Bc bc = Bc::Tangent;
  double rho = 0;
  ReachMethod rho_method = ReachMethod::Analytic;
  Norms norms;
  double boundary_term = 0;
  double bc_resid = 0;
  double quotient_gaffney = 0;
  double quotient_korn = 0;
  double constant_bound = 0;  // C1 or C2 per bc
  double slack_gaffney = 0;   // constant_bound - quotient
  double slack_korn = 0;
  double res_gaffney_id = 0;  // relative identity residuals
  double res_korn_id = 0;
};

// Scale-invariant quotients
//   (||B||^2/rho^2 + ||grad B||^2) / (||B||^2/rho^2 + ||curl||^2 + ||div||^2)
//   (||B||^2/rho^2 + ||grad B||^2) / (||B||^2/rho^2 + ||Sym grad||^2)
// with slack against the dimensional constant for the given bc.
QuotientReport homogeneous_quotients(const VectorField& f, const Domain& dom,
                                     const QuadratureRule& rule, Bc bc);

// (||curl||^2 + ||div||^2) - ||grad||^2 >= 0 on convex domains (tangent bc)
// and mean-convex domains (normal bc). Returns the slack.
double convexity_special_case(const VectorField& f, const Domain& dom,
                              const QuadratureRule& rule, Bc bc);

// ---------------------------------------------------------------------------
// Verification registry: the curated (domain, field, bc) triples that the
// identity/theorem/trace suites and the `verify` command run over.
// ---------------------------------------------------------------------------

struct Triple {
  std::string domain_config;
  std::string field;
  Bc bc;
};
std::vector<Triple> verification_registry();

// Scalar test functions for the trace suite, as one-component fields.
std::vector<std::string> scalar_test_names();

// CSV header/row for QuotientReport tables.
std::string quotient_csv_header();
std::string quotient_csv_row(const QuotientReport& r);

}  // namespace vfi
