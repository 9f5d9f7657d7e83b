#include "vfi/checks.hpp"

#include <cmath>
#include <sstream>

namespace vfi {

double constant_c1(int n) {
  if (n < 2) fail(ErrorCode::InvalidDimension, "n >= 2 required");
  double s = 1.0 + std::sqrt(1.0 + n);
  return 1.0 + s * s;
}

double constant_c2(int n) {
  if (n < 2) fail(ErrorCode::InvalidDimension, "n >= 2 required");
  double s = (n - 1.0) + std::sqrt(n - 1.0) * std::sqrt(2.0 * n - 1.0);
  return 1.0 + s * s;
}

double theorem_constant(Bc bc, int n) {
  return bc == Bc::Tangent ? constant_c1(n) : constant_c2(n);
}

EpsilonChoice optimal_epsilon(Bc bc, int n) {
  if (n < 2) fail(ErrorCode::InvalidDimension, "n >= 2 required");
  EpsilonChoice e;
  e.c_n = (bc == Bc::Tangent) ? 1.0 : n - 1.0;
  double root = e.c_n + std::sqrt(e.c_n) * std::sqrt(e.c_n + n);
  e.epsilon = 1.0 / root;
  e.amplification = root * root;
  return e;
}

double corollary_transfer(double constant, double rho) {
  if (!(rho > 0)) fail(ErrorCode::InvalidParams, "rho > 0 required");
  return constant * std::max(rho * rho, 1.0 / (rho * rho));
}

IdentityResiduals identity_residuals(const VectorField& f, const Domain& dom,
                                     const QuadratureRule& rule, Bc bc) {
  double resid = bc_residual(f, dom, rule, bc);
  if (resid > 1e-10)
    fail(ErrorCode::BCViolated, f.name + " on " + dom.id() + " has " +
                                    std::string(bc_name(bc)) + " residual " +
                                    fmt12(resid));
  Norms nm = compute_norms(f, dom, rule);
  double bterm = (bc == Bc::Tangent) ? boundary_shape_term(f, dom, rule)
                                     : boundary_mean_term(f, dom, rule);
  IdentityResiduals out;
  out.boundary_term = bterm;
  {
    double lhs = nm.grad;
    double rhs = nm.curl + nm.div + bterm;
    out.gaffney_abs = std::abs(lhs - rhs);
    double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
    out.gaffney_rel = out.gaffney_abs / scale;
  }
  {
    double lhs = nm.grad;
    double rhs = 2.0 * nm.sym - nm.div - bterm;
    out.korn_abs = std::abs(lhs - rhs);
    double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
    out.korn_rel = out.korn_abs / scale;
  }
  return out;
}

double trace_slack(const Norms& norms, int n, double rho, double eps,
                   double* rhs_out) {
  double rhs = eps * rho * norms.grad + (n + 1.0 / eps) / rho * norms.l2;
  if (rhs_out) *rhs_out = rhs;
  return rhs - norms.boundary;
}

double trace_slack(const VectorField& f, const Domain& dom,
                   const QuadratureRule& rule, double eps, double* rhs_out) {
  if (!(eps > 0)) fail(ErrorCode::InvalidParams, "eps > 0 required");
  Norms nm = compute_norms(f, dom, rule);
  return trace_slack(nm, dom.n, reach_analytic(dom).value, eps, rhs_out);
}

std::vector<double> epsilon_grid(double lo, double hi, int count) {
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i)
    g[i] = lo * std::pow(hi / lo, double(i) / (count - 1));
  return g;
}

QuotientReport homogeneous_quotients(const VectorField& f, const Domain& dom,
                                     const QuadratureRule& rule, Bc bc) {
  QuotientReport r;
  r.domain_id = dom.id();
  r.field = f.name;
  r.bc = bc;
  ReachEstimate re = reach_analytic(dom);
  r.rho = re.value;
  r.rho_method = re.method;
  r.bc_resid = bc_residual(f, dom, rule, bc);
  if (r.bc_resid > 1e-10)
    fail(ErrorCode::BCViolated, f.name + " on " + dom.id() + " violates " +
                                    std::string(bc_name(bc)) + " bc: residual " +
                                    fmt12(r.bc_resid));
  r.norms = compute_norms(f, dom, rule);
  double mass = r.norms.l2 / (r.rho * r.rho);
  double scale = mass + r.norms.grad;
  if (!(scale > 0))
    fail(ErrorCode::ZeroField, f.name + " has vanishing norms on " + dom.id());
  r.quotient_gaffney = (mass + r.norms.grad) / (mass + r.norms.curl + r.norms.div);
  r.quotient_korn = (mass + r.norms.grad) / (mass + r.norms.sym);
  r.constant_bound = theorem_constant(bc, dom.n);
  r.slack_gaffney = r.constant_bound - r.quotient_gaffney;
  r.slack_korn = r.constant_bound - r.quotient_korn;
  IdentityResiduals ir = identity_residuals(f, dom, rule, bc);
  r.boundary_term = ir.boundary_term;
  r.res_gaffney_id = ir.gaffney_rel;
  r.res_korn_id = ir.korn_rel;
  return r;
}

double convexity_special_case(const VectorField& f, const Domain& dom,
                              const QuadratureRule& rule, Bc bc) {
  if (bc == Bc::Tangent && !dom.convex())
    fail(ErrorCode::DomainNotConvex, dom.id() + " is not convex");
  if (bc == Bc::Normal && !dom.mean_convex())
    fail(ErrorCode::DomainNotConvex, dom.id() + " is not mean-convex");
  double resid = bc_residual(f, dom, rule, bc);
  if (resid > 1e-10)
    fail(ErrorCode::BCViolated, f.name + " violates bc: residual " + fmt12(resid));
  Norms nm = compute_norms(f, dom, rule);
  return (nm.curl + nm.div) - nm.grad;
}

std::vector<Triple> verification_registry() {
  const std::string ball2 = "family=ball n=2 r=1";
  const std::string ball3 = "family=ball n=3 r=1";
  const std::string annulus = "family=annulus r0=1 r1=2";
  const std::string ellipse = "family=ellipse a=2 b=1";
  const std::string torus = "family=torus r=1 R=2";
  return {
      {ball2, "rotation_xy", Bc::Tangent},
      {ball2, "stream:x0", Bc::Tangent},
      {ball2, "stream:x0*x1", Bc::Tangent},
      {ball2, "bump", Bc::Tangent},
      {ball2, "bump_curl", Bc::Tangent},
      {ball2, "position", Bc::Normal},
      {ball2, "potential:x0", Bc::Normal},
      {ball2, "perp_of:stream:x0", Bc::Normal},
      {ball2, "radial:1", Bc::Normal},
      {ball3, "rotation_xy", Bc::Tangent},
      {ball3, "curlfield:0|0|x0*x1", Bc::Tangent},
      {ball3, "curlfield:x1|0|x2^2", Bc::Tangent},
      {ball3, "bump", Bc::Tangent},
      {ball3, "bump_curl", Bc::Tangent},
      {ball3, "position", Bc::Normal},
      {ball3, "potential:x0*x1", Bc::Normal},
      {ball3, "radial:1", Bc::Normal},
      {annulus, "rotation_xy", Bc::Tangent},
      {annulus, "stream:x0", Bc::Tangent},
      {annulus, "bump", Bc::Tangent},
      {annulus, "position", Bc::Normal},
      {annulus, "radial:1", Bc::Normal},
      {ellipse, "stream:1", Bc::Tangent},
      {ellipse, "stream:x0", Bc::Tangent},
      {ellipse, "bump", Bc::Tangent},
      {ellipse, "potential:1", Bc::Normal},
      {ellipse, "perp_of:stream:1", Bc::Normal},
      {torus, "rotation_xy", Bc::Tangent},
      {torus, "torus_gamma", Bc::Tangent},
      {torus, "bump", Bc::Tangent},
      {torus, "torus_normal", Bc::Normal},
  };
}

std::vector<std::string> scalar_test_names() {
  return {"poly:1", "poly:x0", "poly:x0*x1", "bump"};
}

std::string quotient_csv_header() {
  return "domain,field,bc,rho,q_gaffney,q_korn,C_bound,slack_g,slack_k,"
         "res_gaffney_id,res_korn_id";
}

std::string quotient_csv_row(const QuotientReport& r) {
  std::ostringstream os;
  os << r.domain_id << ',' << r.field << ',' << bc_name(r.bc) << ','
     << fmt17(r.rho) << ',' << fmt17(r.quotient_gaffney) << ','
     << fmt17(r.quotient_korn) << ',' << fmt17(r.constant_bound) << ','
     << fmt17(r.slack_gaffney) << ',' << fmt17(r.slack_korn) << ','
     << fmt17(r.res_gaffney_id) << ',' << fmt17(r.res_korn_id);
  return os.str();
}

}  // namespace vfi
