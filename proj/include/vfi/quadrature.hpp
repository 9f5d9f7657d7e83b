#pragma once

#include <vector>

#include "vfi/domains.hpp"

namespace vfi {

// Tensor-product rules in chart coordinates with the exact parametrization
// Jacobian: Gauss-Legendre in radial directions, Gauss-Gegenbauer (weight
// (1-u^2)^{(k-1)/2}, u = cos theta) in polar sphere angles, midpoint in
// periodic angles (2*order points). `order` is the point count per
// non-periodic axis.

struct QuadratureRule {
  int order = 0;
  std::vector<Vec> nodes;
  std::vector<double> weights;
  std::vector<BoundaryPoint> bnodes;
  std::vector<double> bweights;

  std::size_t volume_points() const { return nodes.size(); }
  std::size_t boundary_points() const { return bnodes.size(); }
};

QuadratureRule make_rule(const Domain& dom, int order);

// Volume-only rule over an off-center ball (integration of compactly
// supported fields over their support).
QuadratureRule ball_volume_rule(const Vec& center, double radius, int n, int order);

struct Node1D {
  double x;
  double w;
};

// Gauss-Legendre on [-1,1].
std::vector<Node1D> gauss_legendre(int q);

// Gauss rule for the weight (1-x^2)^alpha on [-1,1] (Golub-Welsch on the
// symmetric Jacobi matrix). alpha = 0 reproduces Gauss-Legendre.
std::vector<Node1D> gauss_gegenbauer(int q, double alpha);

// Deterministic weighted quadrature sum (kernel-backed fixed-order
// reduction): sum_i w_i * f(i).
double integrate(const std::vector<double>& weights,
                 const std::vector<double>& values);

}  // namespace vfi
