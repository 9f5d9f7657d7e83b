#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vfi/common.hpp"

namespace vfi {

// Parametrized domain families with exact boundary geometry: charts,
// outward unit normals, principal curvatures (sign convention: convex
// boundaries have kappa <= 0 w.r.t. the outward normal, so the ball has
// kappa_i = -1/r), reach, signed distance, nearest-point projection and
// the inward collar chart.

enum class Family { Ball, Annulus, Ellipse, Torus };

const char* family_name(Family f);

struct Domain {
  Family family = Family::Ball;
  int n = 0;  // ambient dimension

  // Family parameters; unused ones stay zero.
  double r = 0;             // Ball radius / Torus minor radius
  double r0 = 0, r1 = 0;    // Annulus inner/outer radii
  double a = 0, b = 0;      // Ellipse semi-axes, a >= b > 0
  double R = 0;             // Torus major radius

  int chart_dim() const { return n - 1; }
  std::string id() const;

  bool convex() const { return family == Family::Ball || family == Family::Ellipse; }
  // Mean curvature <= 0 everywhere (w.r.t. the outward normal).
  bool mean_convex() const { return convex(); }

  double diameter() const;
  double volume() const;  // closed form
  std::optional<double> boundary_area() const;  // closed form when one exists
};

Domain make_ball(double r, int n);
Domain make_annulus(double r0, double r1);
Domain make_ellipse(double a, double b);
Domain make_torus(double r, double R);

// Plain-text config block, e.g. "family=torus r=1 R=2 n=3".
// Recognized keys: family, n, r, R, r0, r1, a, b. A bare family name gets
// that family's canonical parameters.
Domain parse_domain(const std::string& config);

// Chart coordinates (n-1 of them). Conventions:
//   Ball n=2:   (phi)                       phi periodic
//   Ball n>=3:  (theta_1..theta_{n-2}, phi) theta in [0,pi], phi periodic
//   Annulus:    (c, theta)                  c = 0 outer circle, 1 inner
//   Ellipse:    (t)                         (a cos t, b sin t)
//   Torus:      (psi, phi)                  psi meridian angle, phi azimuth
struct ChartPoint {
  int m = 0;
  std::array<double, kMaxDim - 1> u{};

  ChartPoint() = default;
  ChartPoint(std::initializer_list<double> xs) : m(int(xs.size())) {
    int i = 0;
    for (double x : xs) u[i++] = x;
  }
};

struct BoundaryPoint {
  ChartPoint chart;
  Vec position;
  Vec normal;  // outward, unit
  int k = 0;   // number of principal curvatures (= n-1)
  std::array<double, kMaxDim - 1> kappa{};
  std::array<Vec, kMaxDim - 1> principal_dir{};
  double mean_curvature = 0;
};

BoundaryPoint boundary_point(const Domain& dom, const ChartPoint& u);

enum class ReachMethod { Analytic, UniformBallBisection };

struct ReachEstimate {
  double value = 0;
  ReachMethod method = ReachMethod::Analytic;
  double tolerance = 0;
};

ReachEstimate reach_analytic(const Domain& dom);

// Uniform-ball bisection against a dense boundary sample set: eps is
// feasible iff no sample lies strictly inside either tangent ball
// B_eps(y +- eps*N(y)). Supported for n <= 3.
ReachEstimate reach_numeric(const Domain& dom, double tol);

// Negative inside, zero on the boundary, positive outside.
double signed_distance(const Domain& dom, const Vec& x);

// Unique nearest boundary point; requires dist(x, boundary) < reach.
BoundaryPoint nearest_point(const Domain& dom, const Vec& x);

// Collar chart around the boundary. Positive t offsets INWARD (this is the
// orientation in which the metric determinant ratio below holds verbatim);
// negative t offsets outward. Requires |t| < reach.
Vec tubular_map(const Domain& dom, double t, const ChartPoint& u);

// det g(t,u) / det g(0,u) = prod_j (1 + t*kappa_j(u))^2 for the collar chart.
double metric_determinant(const Domain& dom, double t, const ChartPoint& u);

// Lipschitz extension of the outward unit normal, supported on the inward
// collar of depth alpha*reach: X = psi(t) * N(nearest(x)) with the linear
// cutoff psi(t) = max(0, 1 - |t|/(alpha*rho)), t = inward depth.
struct ExtensionField {
  Domain dom;
  double alpha = 0;
  double rho = 0;

  double psi(double t) const;
  Vec eval(const Vec& x) const;
  // div X at inward depth t under the chart point u, for 0 < t < alpha*rho:
  //   div X = -psi'(t) - psi(t) * sum_j kappa_j / (1 + t*kappa_j).
  double div_at(double t, const ChartPoint& u) const;
  double div_bound() const { return (1.0 / alpha + dom.n - 1) / rho; }
};

ExtensionField extension_field(const Domain& dom, double alpha);

// Structured boundary sampling with spacing <= h (positions and outward
// normals); used by the reach bisection and by sampling-based tests.
struct BoundarySample {
  Vec position;
  Vec normal;
};
std::vector<BoundarySample> sample_boundary(const Domain& dom, double h);

// Deterministic chart-point sampler (low-discrepancy lattice over the chart
// ranges; never lands on seams).
std::vector<ChartPoint> chart_samples(const Domain& dom, int count);

}  // namespace vfi
