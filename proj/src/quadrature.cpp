#include "vfi/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "vfi/kernels/reduce.hpp"

namespace vfi {

std::vector<Node1D> gauss_legendre(int q) {
  // Newton on the Legendre recurrence with Chebyshev-like initial guesses.
  std::vector<Node1D> out(q);
  for (int k = 0; k < (q + 1) / 2; ++k) {
    double x = std::cos(kPi * (k + 0.75) / (q + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= q; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = q * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    out[k] = {-x, w};
    out[q - 1 - k] = {x, w};
  }
  if (q % 2 == 1) out[q / 2].x = 0.0;
  return out;
}

std::vector<Node1D> gauss_gegenbauer(int q, double alpha) {
  if (alpha == 0.0) return gauss_legendre(q);
  // Symmetric Jacobi matrix from the monic three-term recurrence of the
  // orthogonal polynomials for weight (1-x^2)^alpha; nodes are its
  // eigenvalues, weights mu0 * v1^2 (Golub-Welsch).
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(q, q);
  for (int j = 1; j < q; ++j) {
    double bj = j * (j + 2 * alpha) /
                ((2 * j + 2 * alpha + 1) * (2 * j + 2 * alpha - 1));
    T(j, j - 1) = T(j - 1, j) = std::sqrt(bj);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  if (es.info() != Eigen::Success)
    fail(ErrorCode::EigenNoConvergence, "Jacobi matrix eigensolve failed");
  double mu0 = std::sqrt(kPi) * std::tgamma(alpha + 1.0) / std::tgamma(alpha + 1.5);
  std::vector<Node1D> out(q);
  for (int i = 0; i < q; ++i) {
    double v1 = es.eigenvectors()(0, i);
    out[i] = {es.eigenvalues()(i), mu0 * v1 * v1};
  }
  return out;
}

namespace {

std::vector<double> midpoint_angles(int m) {
  std::vector<double> a(m);
  for (int i = 0; i < m; ++i) a[i] = 2 * kPi * (i + 0.5) / m;
  return a;
}

// Gauss-Legendre mapped to [lo,hi].
std::vector<Node1D> gl_on(double lo, double hi, int q) {
  auto gl = gauss_legendre(q);
  for (auto& nd : gl) {
    nd.x = lo + (nd.x + 1.0) * 0.5 * (hi - lo);
    nd.w *= 0.5 * (hi - lo);
  }
  return gl;
}

// Angular factor grid over S^{n-1}: directions and measure weights
// (relative to the unit sphere). theta_i uses Gauss-Gegenbauer with
// alpha=(k-1)/2, k = n-1-i; phi uses 2*order midpoints.
struct SphereGrid {
  std::vector<Vec> dirs;
  std::vector<double> wts;  // includes the full sin^k measure
};

SphereGrid sphere_grid(int n, int order) {
  SphereGrid g;
  if (n == 2) {
    int m = 2 * order;
    double dw = 2 * kPi / m;
    for (double phi : midpoint_angles(m)) {
      g.dirs.push_back(Vec{std::cos(phi), std::sin(phi)});
      g.wts.push_back(dw);
    }
    return g;
  }
  std::vector<std::vector<Node1D>> polar(n - 2);
  for (int i = 0; i < n - 2; ++i) {
    int k = n - 2 - i;  // sin^k weight for this angle
    polar[i] = gauss_gegenbauer(order, (k - 1) / 2.0);
  }
  int mphi = 2 * order;
  double dphi = 2 * kPi / mphi;
  auto phis = midpoint_angles(mphi);

  std::vector<int> idx(n - 2, 0);
  for (;;) {
    double w = 1.0, prod = 1.0;
    Vec d(n);
    for (int i = 0; i < n - 2; ++i) {
      const Node1D& nd = polar[i][idx[i]];
      double ct = nd.x, st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      d[i] = prod * ct;
      prod *= st;
      w *= nd.w;
    }
    for (int j = 0; j < mphi; ++j) {
      Vec dd = d;
      dd[n - 2] = prod * std::cos(phis[j]);
      dd[n - 1] = prod * std::sin(phis[j]);
      g.dirs.push_back(dd);
      g.wts.push_back(w * dphi);
    }
    int c = n - 3;
    while (c >= 0 && ++idx[c] == int(polar[c].size())) idx[c--] = 0;
    if (c < 0) break;
  }
  return g;
}

ChartPoint sphere_chart_of_dir(int n, const Vec& d) {
  ChartPoint u;
  u.m = n - 1;
  if (n == 2) {
    u.u[0] = std::atan2(d[1], d[0]);
    return u;
  }
  double tail = std::hypot(d[n - 2], d[n - 1]);
  for (int i = n - 3; i >= 0; --i) {
    u.u[i] = std::atan2(tail, d[i]);
    tail = std::hypot(tail, d[i]);
  }
  u.u[n - 2] = std::atan2(d[n - 1], d[n - 2]);
  return u;
}

}  // namespace

QuadratureRule ball_volume_rule(const Vec& center, double radius, int n, int order) {
  QuadratureRule rule;
  rule.order = order;
  auto radial = gl_on(0.0, radius, order);
  auto grid = sphere_grid(n, order);
  rule.nodes.reserve(radial.size() * grid.dirs.size());
  for (const auto& rs : radial) {
    double rw = rs.w * std::pow(rs.x, n - 1);
    for (std::size_t j = 0; j < grid.dirs.size(); ++j) {
      Vec p = center + grid.dirs[j] * rs.x;
      p.n = n;
      rule.nodes.push_back(p);
      rule.weights.push_back(rw * grid.wts[j]);
    }
  }
  return rule;
}

QuadratureRule make_rule(const Domain& dom, int order) {
  if (order < 2) fail(ErrorCode::InvalidParams, "quadrature order must be >= 2");
  if (dom.family == Family::Ball) {
    double projected = 2.0 * std::pow(double(order), dom.n);
    if (projected > 8e6)
      fail(ErrorCode::InvalidParams,
           "tensor rule too large for " + dom.id() + " at order " +
               std::to_string(order) + "; lower the order");
  }
  QuadratureRule rule;
  rule.order = order;
  switch (dom.family) {
    case Family::Ball: {
      rule = ball_volume_rule(Vec::zero(dom.n), dom.r, dom.n, order);
      rule.order = order;
      auto grid = sphere_grid(dom.n, order);
      double rpow = std::pow(dom.r, dom.n - 1);
      for (std::size_t j = 0; j < grid.dirs.size(); ++j) {
        rule.bnodes.push_back(
            boundary_point(dom, sphere_chart_of_dir(dom.n, grid.dirs[j])));
        rule.bweights.push_back(rpow * grid.wts[j]);
      }
      break;
    }
    case Family::Annulus: {
      auto radial = gl_on(dom.r0, dom.r1, order);
      int m = 2 * order;
      auto phis = midpoint_angles(m);
      double dphi = 2 * kPi / m;
      for (const auto& rs : radial)
        for (double phi : phis) {
          rule.nodes.push_back(Vec{rs.x * std::cos(phi), rs.x * std::sin(phi)});
          rule.weights.push_back(rs.w * rs.x * dphi);
        }
      for (int c = 0; c <= 1; ++c) {
        double rc = (c == 0) ? dom.r1 : dom.r0;
        for (double phi : phis) {
          rule.bnodes.push_back(boundary_point(dom, ChartPoint{double(c), phi}));
          rule.bweights.push_back(rc * dphi);
        }
      }
      break;
    }
    case Family::Ellipse: {
      auto radial = gl_on(0.0, 1.0, order);
      int m = 2 * order;
      auto phis = midpoint_angles(m);
      double dphi = 2 * kPi / m;
      for (const auto& rs : radial)
        for (double phi : phis) {
          rule.nodes.push_back(
              Vec{dom.a * rs.x * std::cos(phi), dom.b * rs.x * std::sin(phi)});
          rule.weights.push_back(rs.w * rs.x * dom.a * dom.b * dphi);
        }
      for (double t : midpoint_angles(m)) {
        rule.bnodes.push_back(boundary_point(dom, ChartPoint{t}));
        double arc = std::hypot(dom.a * std::sin(t), dom.b * std::cos(t));
        rule.bweights.push_back(arc * dphi);
      }
      break;
    }
    case Family::Torus: {
      auto radial = gl_on(0.0, dom.r, order);
      int m = 2 * order;
      auto angs = midpoint_angles(m);
      double da = 2 * kPi / m;
      for (const auto& rs : radial)
        for (double psi : angs) {
          double ring = dom.R + rs.x * std::cos(psi);
          double z = rs.x * std::sin(psi);
          for (double phi : angs) {
            rule.nodes.push_back(Vec{ring * std::cos(phi), ring * std::sin(phi), z});
            rule.weights.push_back(rs.w * rs.x * ring * da * da);
          }
        }
      for (double psi : angs) {
        double ring = dom.R + dom.r * std::cos(psi);
        for (double phi : angs) {
          rule.bnodes.push_back(boundary_point(dom, ChartPoint{psi, phi}));
          rule.bweights.push_back(dom.r * ring * da * da);
        }
      }
      break;
    }
  }
  return rule;
}

double integrate(const std::vector<double>& weights, const std::vector<double>& values) {
  if (weights.size() != values.size())
    fail(ErrorCode::InvalidParams, "weights/values size mismatch");
  return kernels::weighted_sum(weights.data(), values.data(), weights.size());
}

}  // namespace vfi
