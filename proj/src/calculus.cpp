#include "vfi/calculus.hpp"

#include <algorithm>
#include <cmath>

#include "vfi/kernels/reduce.hpp"

namespace vfi {

const char* bc_name(Bc bc) { return bc == Bc::Tangent ? "tangent" : "normal"; }

Bc parse_bc(const std::string& s) {
  if (s == "tangent" || s == "T") return Bc::Tangent;
  if (s == "normal" || s == "N") return Bc::Normal;
  fail(ErrorCode::ConfigError, "bc must be 'tangent' or 'normal', got '" + s + "'");
}

namespace {

void require_regular(const VectorField& f, const Vec& x) {
  if (f.is_singular_at(x))
    fail(ErrorCode::SingularPoint,
         f.name + " evaluated too close to its singular set (" + f.singular_set + ")");
}

}  // namespace

Mat curl_matrix(const VectorField& f, const Vec& x) {
  require_regular(f, x);
  Mat J = f.jacobian(x);
  Mat C(f.n);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < f.n; ++i)
    for (int j = 0; j < f.n; ++j) C(i, j) = (J(i, j) - J(j, i)) * inv_sqrt2;
  return C;
}

Mat sym_grad(const VectorField& f, const Vec& x) {
  require_regular(f, x);
  Mat J = f.jacobian(x);
  Mat S(f.n);
  for (int i = 0; i < f.n; ++i)
    for (int j = 0; j < f.n; ++j) S(i, j) = 0.5 * (J(i, j) + J(j, i));
  return S;
}

double divergence(const VectorField& f, const Vec& x) {
  require_regular(f, x);
  return f.jacobian(x).trace();
}

namespace {

// Volume nodes for a field over a domain: compactly supported fields are
// integrated over their support ball (the integrand is polynomial there,
// which keeps the rule exact); everything else uses the domain rule.
QuadratureRule support_rule(const VectorField& f, const QuadratureRule& rule) {
  QuadratureRule sub = ball_volume_rule(f.support->center, f.support->radius,
                                        f.n, rule.order);
  sub.bnodes = rule.bnodes;
  sub.bweights = rule.bweights;
  return sub;
}

struct VolumeScalars {
  std::vector<double> b2, grad2, curl2, div2, sym2;
};

VolumeScalars volume_scalars(const VectorField& f, const QuadratureRule& rule) {
  const std::size_t N = rule.nodes.size();
  VolumeScalars s;
  s.b2.resize(N);
  s.grad2.resize(N);
  s.curl2.resize(N);
  s.div2.resize(N);
  s.sym2.resize(N);
  const int n = f.n;
  for (std::size_t i = 0; i < N; ++i) {
    const Vec& x = rule.nodes[i];
    require_regular(f, x);
    Vec v = f.eval(x);
    Mat J = f.jacobian(x);
    double b2 = 0;
    for (int k = 0; k < n; ++k) b2 += v[k] * v[k];
    double g2 = 0, c2 = 0, s2 = 0, tr = 0;
    for (int a = 0; a < n; ++a) {
      tr += J(a, a);
      for (int b = 0; b < n; ++b) {
        g2 += J(a, b) * J(a, b);
        double anti = J(a, b) - J(b, a);
        double symm = 0.5 * (J(a, b) + J(b, a));
        c2 += 0.5 * anti * anti;
        s2 += symm * symm;
      }
    }
    s.b2[i] = b2;
    s.grad2[i] = g2;
    s.curl2[i] = c2;
    s.div2[i] = tr * tr;
    s.sym2[i] = s2;
  }
  return s;
}

}  // namespace

Norms compute_norms(const VectorField& f, const Domain& dom,
                    const QuadratureRule& rule) {
  (void)dom;
  const QuadratureRule* vol = &rule;
  QuadratureRule sub;
  if (f.support) {
    sub = support_rule(f, rule);
    vol = &sub;
  }
  VolumeScalars s = volume_scalars(f, *vol);
  const double* w = vol->weights.data();
  const std::size_t N = vol->weights.size();
  Norms out;
  out.l2 = kernels::weighted_sum(w, s.b2.data(), N);
  out.grad = kernels::weighted_sum(w, s.grad2.data(), N);
  out.curl = kernels::weighted_sum(w, s.curl2.data(), N);
  out.div = kernels::weighted_sum(w, s.div2.data(), N);
  out.sym = kernels::weighted_sum(w, s.sym2.data(), N);

  if (f.support) {
    out.boundary = 0.0;  // the field vanishes on the domain boundary
  } else {
    std::vector<double> tb2(rule.bnodes.size());
    for (std::size_t i = 0; i < rule.bnodes.size(); ++i) {
      const Vec& x = rule.bnodes[i].position;
      require_regular(f, x);
      tb2[i] = f.eval(x).norm2();
    }
    out.boundary =
        kernels::weighted_sum(rule.bweights.data(), tb2.data(), tb2.size());
  }
  return out;
}

Norms compute_norms_resolved(const VectorField& f, const Domain& dom, int order,
                             double rel_tol) {
  Norms coarse = compute_norms(f, dom, make_rule(dom, order));
  Norms fine = compute_norms(f, dom, make_rule(dom, 2 * order));
  // Quantities at roundoff level relative to the field's overall scale are
  // compared against that scale, not against themselves.
  double global = std::max({fine.l2, fine.grad, fine.boundary, 1e-300});
  auto rel = [global](double c, double fval) {
    double scale = std::max({std::abs(c), std::abs(fval), 1e-12 * global});
    return std::abs(c - fval) / scale;
  };
  double worst = std::max({rel(coarse.l2, fine.l2), rel(coarse.grad, fine.grad),
                           rel(coarse.curl, fine.curl), rel(coarse.div, fine.div),
                           rel(coarse.sym, fine.sym),
                           rel(coarse.boundary, fine.boundary)});
  if (worst > rel_tol)
    fail(ErrorCode::QuadratureUnderResolved,
         "order " + std::to_string(order) + " changes by " + fmt12(worst) +
             " when doubled (field " + f.name + ")");
  return fine;
}

double boundary_shape_term(const VectorField& f, const Domain& dom,
                           const QuadratureRule& rule) {
  (void)dom;
  std::vector<double> vals(rule.bnodes.size());
  for (std::size_t i = 0; i < rule.bnodes.size(); ++i) {
    const BoundaryPoint& bp = rule.bnodes[i];
    require_regular(f, bp.position);
    Vec v = f.eval(bp.position);
    // Only the tangential trace enters the shape pairing.
    double acc = 0;
    for (int j = 0; j < bp.k; ++j) {
      double c = v.dot(bp.principal_dir[j]);
      acc += bp.kappa[j] * c * c;
    }
    vals[i] = acc;
  }
  return kernels::weighted_sum(rule.bweights.data(), vals.data(), vals.size());
}

double boundary_mean_term(const VectorField& f, const Domain& dom,
                          const QuadratureRule& rule) {
  std::vector<double> vals(rule.bnodes.size());
  for (std::size_t i = 0; i < rule.bnodes.size(); ++i) {
    const BoundaryPoint& bp = rule.bnodes[i];
    require_regular(f, bp.position);
    vals[i] = bp.mean_curvature * f.eval(bp.position).norm2();
  }
  return (dom.n - 1) *
         kernels::weighted_sum(rule.bweights.data(), vals.data(), vals.size());
}

double bc_residual(const VectorField& f, const Domain& dom,
                   const QuadratureRule& rule, Bc bc) {
  (void)dom;
  double worst = 0;
  for (const auto& bp : rule.bnodes) {
    require_regular(f, bp.position);
    Vec v = f.eval(bp.position);
    double nn = v.dot(bp.normal);
    if (bc == Bc::Tangent) {
      worst = std::max(worst, std::abs(nn));
    } else {
      Vec tang = v - bp.normal * nn;
      worst = std::max(worst, tang.norm());
    }
  }
  return worst;
}

}  // namespace vfi
