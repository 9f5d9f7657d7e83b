#include "vfi/oracles.hpp"

#include <cmath>

namespace vfi {

double unit_ball_volume(int n) {
  return std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

double unit_sphere_area(int n) {
  return 2.0 * std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0);
}

double torus_gamma_l2(double r, double R) {
  return 4 * kPi * kPi * (R - std::sqrt(R * R - r * r));
}

double torus_gamma_grad(double r, double R) {
  return 4 * kPi * kPi * r * r / std::pow(R * R - r * r, 1.5);
}

double torus_gamma_quotient(double aspect) {
  if (!(aspect > 1.0)) fail(ErrorCode::InvalidAspect, "aspect ratio must exceed 1");
  double rho = std::min(1.0, aspect - 1.0);
  double ratio = torus_gamma_grad(1.0, aspect) / torus_gamma_l2(1.0, aspect);
  return 1.0 + rho * rho * ratio;
}

SweepMax torus_argmax_sweep(double lo, double hi, double step) {
  SweepMax best;
  best.value = -1e300;
  for (double a = lo; a <= hi + 1e-12; a += step) {
    if (!(a > 1.0)) continue;
    double v = torus_gamma_quotient(a);
    if (v > best.value) best = {a, v};
  }
  if (best.value < 0) fail(ErrorCode::InvalidAspect, "empty sweep grid");
  return best;
}

BallKilling ball_killing_case(int n, double r) {
  if (n < 2) fail(ErrorCode::InvalidDimension, "n >= 2 required");
  if (!(r > 0)) fail(ErrorCode::InvalidParams, "r > 0 required");
  BallKilling k;
  k.n = n;
  k.r = r;
  double b1 = unit_ball_volume(n);
  k.l2 = 2.0 * std::pow(r, n + 2) * b1 / (n + 2);
  k.grad = 2.0 * std::pow(r, n) * b1;
  k.gradient_ratio = n + 2.0;
  k.korn_quotient = n + 3.0;
  return k;
}

// ---------------------------------------------------------------------------
// Oracle cases
// ---------------------------------------------------------------------------

namespace {

void add(OracleCase& oc, const std::string& name, double expected, double computed,
         double tol) {
  double scale = std::max({std::abs(expected), std::abs(computed), 1e-30});
  bool pass = std::abs(expected - computed) <= tol * scale;
  oc.scalars.push_back({name, expected, computed, tol, pass});
  oc.pass = oc.pass && pass;
}

// Absolute comparison against zero.
void add_zero(OracleCase& oc, const std::string& name, double computed, double tol) {
  bool pass = std::abs(computed) <= tol;
  oc.scalars.push_back({name, 0.0, computed, tol, pass});
  oc.pass = oc.pass && pass;
}

OracleCase torus_gamma_case(double aspect, int order) {
  OracleCase oc;
  oc.name = "torus_gamma_a" + fmt12(aspect);
  oc.description = "harmonic azimuthal field on the solid torus, aspect " +
                   fmt12(aspect);
  Domain dom = make_torus(1.0, aspect);
  QuadratureRule rule = make_rule(dom, order);
  VectorField g = make_field("torus_gamma", dom);
  Norms nm = compute_norms(g, dom, rule);
  add(oc, "l2_norm2", torus_gamma_l2(1.0, aspect), nm.l2, 1e-9);
  add(oc, "grad_norm2", torus_gamma_grad(1.0, aspect), nm.grad, 1e-9);
  double rho = reach_analytic(dom).value;
  double q = 1.0 + rho * rho * nm.grad / nm.l2;
  add(oc, "quotient", torus_gamma_quotient(aspect), q, 1e-9);
  // Pointwise harmonicity: curl and divergence vanish off the axis.
  double worst_curl = 0, worst_div = 0, worst_bc = 0;
  for (const auto& u : chart_samples(dom, 1000)) {
    Vec x = tubular_map(dom, 0.3 * rho, u);
    worst_curl = std::max(worst_curl, std::sqrt(curl_matrix(g, x).frobenius2()));
    worst_div = std::max(worst_div, std::abs(divergence(g, x)));
  }
  worst_bc = bc_residual(g, dom, rule, Bc::Tangent);
  add_zero(oc, "curl_residual", worst_curl, 1e-12);
  add_zero(oc, "div_residual", worst_div, 1e-12);
  add_zero(oc, "tangent_bc_residual", worst_bc, 1e-10);
  return oc;
}

OracleCase torus_argmax_case() {
  OracleCase oc;
  oc.name = "torus_argmax";
  oc.description = "aspect-ratio sweep of the torus quotient peaks at 2";
  SweepMax m = torus_argmax_sweep(1.1, 3.0, 0.01);
  add(oc, "argmax_aspect", 2.0, m.aspect, 0.01 / 2.0);
  add(oc, "max_value", torus_gamma_quotient(2.0), m.value, 1e-12);
  return oc;
}

OracleCase ball_killing_oracle(int n, int order) {
  OracleCase oc;
  oc.name = "ball_killing_n" + std::to_string(n);
  oc.description = "rotation field on the n-ball: gradient ratio n+2, "
                   "Korn-tangent quotient n+3";
  double prev_korn = 0;
  bool have_prev = false;
  for (double r : {0.5, 1.0, 2.0}) {
    Domain dom = make_ball(r, n);
    QuadratureRule rule = make_rule(dom, order);
    VectorField y = rotation_xy(n);
    Norms nm = compute_norms(y, dom, rule);
    BallKilling k = ball_killing_case(n, r);
    std::string tag = "_r" + fmt12(r);
    add(oc, "l2_norm2" + tag, k.l2, nm.l2, n <= 3 ? 1e-10 : 1e-9);
    add(oc, "grad_norm2" + tag, k.grad, nm.grad, n <= 3 ? 1e-10 : 1e-9);
    double ratio = r * r * nm.grad / nm.l2;
    add(oc, "gradient_ratio" + tag, k.gradient_ratio, ratio, 1e-8);
    double mass = nm.l2 / (r * r);
    double korn = (mass + nm.grad) / (mass + nm.sym);
    add(oc, "korn_quotient" + tag, k.korn_quotient, korn, 1e-8);
    if (have_prev) add(oc, "r_invariance" + tag, prev_korn, korn, 1e-12);
    prev_korn = korn;
    have_prev = true;
  }
  return oc;
}

OracleCase ball_rotation_norms_case(int order) {
  OracleCase oc;
  oc.name = "ball_rotation_n3";
  oc.description = "rotation field on the unit 3-ball: closed-form norms and "
                   "shape boundary term";
  Domain dom = make_ball(1.0, 3);
  QuadratureRule rule = make_rule(dom, order);
  VectorField y = rotation_xy(3);
  Norms nm = compute_norms(y, dom, rule);
  double b1 = unit_ball_volume(3);  // 4*pi/3
  add(oc, "l2_norm2", 8 * kPi / 15, nm.l2, 1e-10);
  add(oc, "grad_norm2", 2 * b1, nm.grad, 1e-10);
  add(oc, "curl_norm2", 4 * b1, nm.curl, 1e-10);
  add_zero(oc, "sym_norm2", nm.sym, 1e-12);
  add(oc, "shape_term", -2 * b1, boundary_shape_term(y, dom, rule), 1e-10);
  return oc;
}

OracleCase ball_position_norms_case(int order) {
  OracleCase oc;
  oc.name = "ball_position_n3";
  oc.description = "radial position field on the unit 3-ball: mean-curvature "
                   "boundary term and divergence norm";
  Domain dom = make_ball(1.0, 3);
  QuadratureRule rule = make_rule(dom, order);
  VectorField p = position_field(3);
  Norms nm = compute_norms(p, dom, rule);
  double b1 = unit_ball_volume(3);
  add(oc, "grad_norm2", 3 * b1, nm.grad, 1e-10);
  add(oc, "div_norm2", 9 * b1, nm.div, 1e-10);
  add(oc, "mean_term", -8 * kPi, boundary_mean_term(p, dom, rule), 1e-10);
  IdentityResiduals ir = identity_residuals(p, dom, rule, Bc::Normal);
  add_zero(oc, "korn_identity_rel", ir.korn_rel, 1e-10);
  return oc;
}

OracleCase divfree_bump_case(int order) {
  OracleCase oc;
  oc.name = "divfree_bump_n3";
  oc.description = "compactly supported curl field: grad/sym norm ratio 2";
  Domain dom = make_ball(1.0, 3);
  QuadratureRule rule = make_rule(dom, order);
  VectorField f = make_field("bump_curl", dom);
  Norms nm = compute_norms(f, dom, rule);
  add_zero(oc, "div_norm2", nm.div, 1e-20);
  add(oc, "grad_over_sym", 2.0, nm.grad / nm.sym, 1e-7);
  IdentityResiduals ir = identity_residuals(f, dom, rule, Bc::Tangent);
  add_zero(oc, "gaffney_identity_rel", ir.gaffney_rel, 1e-10);
  return oc;
}

OracleCase perp_disk_case(int order) {
  OracleCase oc;
  oc.name = "perp_disk";
  oc.description = "perp rotation swaps curl and divergence norms on the disk";
  Domain dom = make_ball(1.0, 2);
  QuadratureRule rule = make_rule(dom, order);
  VectorField b = make_field("stream:x0", dom);
  VectorField bp = perp_rotate(b);
  Norms nb = compute_norms(b, dom, rule);
  Norms np = compute_norms(bp, dom, rule);
  add(oc, "l2_preserved", nb.l2, np.l2, 1e-13);
  add(oc, "grad_preserved", nb.grad, np.grad, 1e-13);
  add(oc, "curl_to_div", nb.curl, np.div, 1e-13);
  add(oc, "div_to_curl", nb.div, np.curl, 1e-13);
  VectorField rot = rotation_xy(2);
  add_zero(oc, "perp_of_rotation_is_normal",
           bc_residual(perp_rotate(rot), dom, rule, Bc::Normal), 1e-12);
  return oc;
}

OracleCase trace_const_ball_case(int order) {
  OracleCase oc;
  oc.name = "trace_const_ball";
  oc.description = "constants on the unit ball saturate the trace bound as "
                   "eps grows";
  Domain dom = make_ball(1.0, 3);
  QuadratureRule rule = make_rule(dom, order);
  VectorField one = make_field("poly:1", dom);
  Norms nm = compute_norms(one, dom, rule);
  double prev = 1e300;
  bool monotone = true;
  double last_ratio = 0;
  for (double eps : epsilon_grid(1e-3, 1e3, 25)) {
    double rhs = 0;
    double slack = trace_slack(nm, dom.n, 1.0, eps, &rhs);
    double ratio = slack / rhs;
    if (ratio > prev + 1e-14) monotone = false;
    prev = ratio;
    last_ratio = ratio;
  }
  add_zero(oc, "slack_ratio_at_eps_1e3", last_ratio, 1e-3);
  add_zero(oc, "monotone_decrease_violations", monotone ? 0.0 : 1.0, 0.5);
  return oc;
}

}  // namespace

std::vector<std::string> oracle_case_names() {
  return {"torus_gamma_a2", "torus_gamma_a1.5", "torus_gamma_a3", "torus_argmax",
          "ball_killing_n2", "ball_killing_n3", "ball_killing_n4",
          "ball_killing_n5", "ball_killing_n6", "ball_rotation_n3",
          "ball_position_n3", "divfree_bump_n3", "perp_disk", "trace_const_ball"};
}

OracleCase run_oracle_case(const std::string& name, int order) {
  if (name == "torus_gamma_a2") return torus_gamma_case(2.0, order);
  if (name == "torus_gamma_a1.5") return torus_gamma_case(1.5, order);
  if (name == "torus_gamma_a3") return torus_gamma_case(3.0, order);
  if (name == "torus_argmax") return torus_argmax_case();
  if (name == "ball_killing_n2") return ball_killing_oracle(2, order);
  if (name == "ball_killing_n3") return ball_killing_oracle(3, order);
  if (name == "ball_killing_n4") return ball_killing_oracle(4, std::min(order, 10));
  if (name == "ball_killing_n5") return ball_killing_oracle(5, std::min(order, 8));
  if (name == "ball_killing_n6") return ball_killing_oracle(6, std::min(order, 8));
  if (name == "ball_rotation_n3") return ball_rotation_norms_case(order);
  if (name == "ball_position_n3") return ball_position_norms_case(order);
  if (name == "divfree_bump_n3") return divfree_bump_case(order);
  if (name == "perp_disk") return perp_disk_case(order);
  if (name == "trace_const_ball") return trace_const_ball_case(order);
  fail(ErrorCode::ConfigError, "unknown oracle case '" + name + "'");
}

}  // namespace vfi
