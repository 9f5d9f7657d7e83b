#pragma once

#include <string>
#include <vector>

#include "vfi/checks.hpp"

namespace vfi {

// Closed-form reference values for the example fields, each derived
// independently of the quadrature path that checks them.

double unit_ball_volume(int n);   // pi^{n/2} / Gamma(n/2 + 1)
double unit_sphere_area(int n);   // 2 pi^{n/2} / Gamma(n/2)

// Azimuthal harmonic field Gamma = (-y,x,0)/(x^2+y^2) on the solid torus
// (minor r, major R). Reductions of the meridian-disk integrals:
//   ||Gamma||^2      = 4 pi^2 (R - sqrt(R^2 - r^2))
//   ||grad Gamma||^2 = 4 pi^2 r^2 / (R^2 - r^2)^{3/2}
double torus_gamma_l2(double r, double R);
double torus_gamma_grad(double r, double R);

// 1 + rho^2 ||grad Gamma||^2 / ||Gamma||^2 at aspect ratio a = R/r > 1
// (scale-invariant; rho = min{r, R-r}).
double torus_gamma_quotient(double aspect);

// Grid argmax of the quotient over aspect ratios.
struct SweepMax {
  double aspect = 0;
  double value = 0;
};
SweepMax torus_argmax_sweep(double lo, double hi, double step);

// Rotation field Y = (-x2, x1, 0, ...) on the ball of radius r:
//   ||Y||^2 = 2 r^{n+2} |B_1| / (n+2),   ||grad Y||^2 = 2 r^n |B_1|,
//   rho^2 ||grad Y||^2 / ||Y||^2 = n+2,  Korn-tangent quotient = n+3.
struct BallKilling {
  int n = 0;
  double r = 0;
  double l2 = 0;
  double grad = 0;
  double gradient_ratio = 0;  // n+2
  double korn_quotient = 0;   // n+3
};
BallKilling ball_killing_case(int n, double r);

// Value-reproduction oracle cases: closed forms vs quadrature.
struct OracleScalar {
  std::string name;
  double expected = 0;
  double computed = 0;
  double tol = 0;        // relative
  bool pass = false;
};
struct OracleCase {
  std::string name;
  std::string description;
  std::vector<OracleScalar> scalars;
  bool pass = true;
};

std::vector<std::string> oracle_case_names();
OracleCase run_oracle_case(const std::string& name, int order);

}  // namespace vfi
