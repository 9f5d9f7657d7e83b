#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vfi/domains.hpp"

namespace vfi {

// ---------------------------------------------------------------------------
// Multivariate polynomials (exact evaluation and differentiation). Used to
// give registered fields closed-form Jacobians; finite differences only ever
// appear as cross-check oracles in tests.
// ---------------------------------------------------------------------------

struct Monomial {
  double coef = 0;
  std::array<int, kMaxDim> exp{};
};

struct Polynomial {
  int n = 0;
  std::vector<Monomial> terms;

  double eval(const Vec& x) const;
  Polynomial derivative(int var) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial scaled(double s) const;

  static Polynomial constant(int n, double c);
  static Polynomial variable(int n, int i);
  // Grammar: sum of terms; term = [coef] ('*' x<i> ['^' p])*  e.g.
  // "2*x0^2*x1 - x1 + 3".
  static Polynomial parse(const std::string& s, int n);
};

// ---------------------------------------------------------------------------
// Vector fields
// ---------------------------------------------------------------------------

struct VectorField {
  std::string name;
  int n = 0;
  std::function<Vec(const Vec&)> eval;
  // Entry (i,j) = d_j B^i.
  std::function<Mat(const Vec&)> jacobian;
  // Guard: true when x is too close to the singular set to evaluate.
  std::function<bool(const Vec&)> singular;
  std::string singular_set;

  // Integration hint for compactly supported fields: the field vanishes
  // outside this ball, norms integrate over it exactly.
  struct SupportBall {
    Vec center;
    double radius = 0;
  };
  std::optional<SupportBall> support;

  bool is_singular_at(const Vec& x) const { return singular && singular(x); }
};

VectorField polynomial_field(const std::string& name, std::vector<Polynomial> comps);

// Named constructors.
VectorField rotation_xy(int n);                       // (-x1, x0, 0, ...)
VectorField position_field(int n);                    // x
VectorField torus_gamma_field(double r, double R);    // (-y,x,0)/(x^2+y^2)
VectorField torus_normal_field(double r, double R);   // gradient of the tube level fn
VectorField bump_field(const Domain& dom, const Vec& center, double radius,
                       const Vec& direction);
// Divergence-free bump: curl of a bump potential (n=3) / perp-gradient (n=2).
VectorField divfree_bump_field(const Domain& dom, const Vec& center, double radius,
                               const Vec& direction3 /* used for n=3 */);
VectorField perp_rotate(const VectorField& f);        // (-B^2, B^1), 2-d only

// Level function of the domain that vanishes on the whole boundary
// (polynomial for ball/annulus/ellipse; used by stream/potential bases).
Polynomial level_function(const Domain& dom);

// Registry: fields addressable by string name, bound to a domain where the
// construction needs its geometry. Names:
//   rotation_xy | position | torus_gamma | torus_normal | bump | bump_curl |
//   radial:<k> | poly:<c0|c1|...> | stream:<q> | potential:<q> |
//   curlfield:<A0|A1|A2> | perp_of:<name>
VectorField make_field(const std::string& name, const Domain& dom);

// Names suitable for a given (domain, boundary condition) pairing are listed
// by the verification registry in checks.hpp.

// Central finite-difference Jacobian (test oracle).
Mat fd_jacobian(const VectorField& f, const Vec& x, double h = 1e-5);

}  // namespace vfi
