#include "vfi/search.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "vfi/kernels/reduce.hpp"
#include "vfi/oracles.hpp"
#include "vfi/parallel.hpp"

namespace vfi {

const char* kind_name(QuotientKind k) {
  return k == QuotientKind::Gaffney ? "gaffney" : "korn";
}

QuotientKind parse_kind(const std::string& s) {
  if (s == "gaffney" || s == "G") return QuotientKind::Gaffney;
  if (s == "korn" || s == "K") return QuotientKind::Korn;
  fail(ErrorCode::ConfigError, "kind must be 'gaffney' or 'korn', got '" + s + "'");
}

// ---------------------------------------------------------------------------
// Trial spaces
// ---------------------------------------------------------------------------

namespace {

// Monomials of total degree <= deg in n variables, in a fixed deterministic
// order. Coordinates are pre-scaled by 1/scale so that spaces over scaled
// domains are exact images of each other.
void monomials_upto(int n, int deg, std::vector<Polynomial>& out, double scale) {
  std::array<int, kMaxDim> e{};
  // iterative odometer over exponents with sum <= deg
  for (;;) {
    int total = 0;
    for (int i = 0; i < n; ++i) total += e[i];
    if (total <= deg) {
      Monomial m;
      m.coef = std::pow(1.0 / scale, total);
      m.exp = e;
      Polynomial p;
      p.n = n;
      p.terms.push_back(m);
      out.push_back(p);
    }
    int c = 0;
    while (c < n) {
      if (++e[c] > deg) {
        e[c] = 0;
        ++c;
      } else {
        break;
      }
    }
    if (c == n) break;
  }
}

double domain_scale(const Domain& dom) {
  switch (dom.family) {
    case Family::Ball: return dom.r;
    case Family::Annulus: return dom.r1;
    case Family::Ellipse: return dom.a;
    case Family::Torus: return dom.R + dom.r;
  }
  return 1.0;
}

void push(TrialSpace& ts, VectorField f, TrialConstruction c) {
  ts.basis.push_back(std::move(f));
  ts.construction.push_back(c);
}

}  // namespace

TrialSpace build_trial_space(const Domain& dom, Bc bc, int degree) {
  if (dom.family == Family::Torus)
    fail(ErrorCode::UnsupportedDomainForSearch,
         "torus trial spaces are not built; sweep the fixed harmonic field "
         "instead");
  if (degree < 0 || degree > 10)
    fail(ErrorCode::InvalidParams, "degree must be in [0, 10]");
  if (dom.family == Family::Ball && dom.n > 6)
    fail(ErrorCode::UnsupportedDomainForSearch, "ball searches support n <= 6");

  const int n = dom.n;
  const double scale = domain_scale(dom);
  TrialSpace ts;
  ts.dom = dom;
  ts.bc = bc;
  ts.degree = degree;

  Polynomial w = level_function(dom).scaled(1.0 / (scale * scale));
  std::vector<Polynomial> q;
  monomials_upto(n, degree, q, scale);
  std::vector<Polynomial> qlow;
  monomials_upto(n, std::max(0, degree - 1), qlow, scale);

  if (bc == Bc::Tangent) {
    // Rigid rotations satisfy the tangent condition on centered balls and
    // annuli; on the ellipse the stream construction covers degree one.
    if (dom.family != Family::Ellipse) {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          std::vector<Polynomial> comps(n, Polynomial::constant(n, 0));
          comps[i] = Polynomial::variable(n, j).scaled(-1.0 / scale);
          comps[j] = Polynomial::variable(n, i).scaled(1.0 / scale);
          push(ts, polynomial_field("rot_" + std::to_string(i) + std::to_string(j),
                                    std::move(comps)),
               TrialConstruction::KnownSpecial);
        }
    }
    if (n == 2) {
      // Perp gradients of boundary-vanishing potentials are tangent.
      for (std::size_t k = 0; k < q.size(); ++k) {
        Polynomial p = w * q[k];
        push(ts,
             polynomial_field("stream_" + std::to_string(k),
                              {p.derivative(1).scaled(-1.0), p.derivative(0)}),
             TrialConstruction::StreamFunction);
      }
    } else {
      // curl(w * monomial * e_k) is tangent on the ball.
      for (std::size_t k = 0; k < qlow.size(); ++k)
        for (int axis = 0; axis < 3 && n == 3; ++axis) {
          std::array<Polynomial, 3> A{Polynomial::constant(n, 0),
                                      Polynomial::constant(n, 0),
                                      Polynomial::constant(n, 0)};
          A[axis] = w * qlow[k];
          std::vector<Polynomial> comps = {
              A[2].derivative(1) + A[1].derivative(2).scaled(-1.0),
              A[0].derivative(2) + A[2].derivative(0).scaled(-1.0),
              A[1].derivative(0) + A[0].derivative(1).scaled(-1.0)};
          push(ts,
               polynomial_field(
                   "curlpot_" + std::to_string(k) + "_" + std::to_string(axis),
                   std::move(comps)),
               TrialConstruction::StreamFunction);
        }
    }
  } else {
    // Gradients of boundary-vanishing potentials are normal fields.
    for (std::size_t k = 0; k < q.size(); ++k) {
      Polynomial p = w * q[k];
      std::vector<Polynomial> comps;
      for (int i = 0; i < n; ++i) comps.push_back(p.derivative(i));
      push(ts, polynomial_field("potential_" + std::to_string(k), std::move(comps)),
           TrialConstruction::GradientPotential);
    }
    if (dom.family == Family::Ball || dom.family == Family::Annulus) {
      // Radially even fields |x|^{2k} x are normal on centered circles/spheres.
      Polynomial norm2 = Polynomial::constant(n, 0);
      for (int i = 0; i < n; ++i)
        norm2 = norm2 + Polynomial::variable(n, i) * Polynomial::variable(n, i);
      norm2 = norm2.scaled(1.0 / (scale * scale));
      Polynomial pw = Polynomial::constant(n, 1);
      for (int k = 0; 2 * k + 1 <= degree; ++k) {
        std::vector<Polynomial> comps;
        for (int i = 0; i < n; ++i)
          comps.push_back(pw * Polynomial::variable(n, i).scaled(1.0 / scale));
        push(ts, polynomial_field("radial_" + std::to_string(k), std::move(comps)),
             TrialConstruction::KnownSpecial);
        pw = pw * norm2;
      }
    }
  }

  // Trace-zero enrichment w * (monomial vector); satisfies both conditions
  // and pins the quotient floor at one.
  for (std::size_t k = 0; k < qlow.size(); ++k)
    for (int i = 0; i < n; ++i) {
      std::vector<Polynomial> comps(n, Polynomial::constant(n, 0));
      comps[i] = w * qlow[k];
      push(ts,
           polynomial_field("wmono_" + std::to_string(k) + "_" + std::to_string(i),
                            std::move(comps)),
           TrialConstruction::InteriorBump);
    }
  return ts;
}

// ---------------------------------------------------------------------------
// Gram assembly
// ---------------------------------------------------------------------------

namespace {

// Per-field node samples stored as component-major planes so that Gram
// entries reduce to kernel dot products over contiguous arrays.
struct FieldSamples {
  int n = 0;
  std::size_t nodes = 0;
  std::vector<std::vector<double>> value;  // n planes
  std::vector<std::vector<double>> jac;    // n*n planes (i*n+j)
  std::vector<double> divg;                // trace plane
};

FieldSamples sample_field(const VectorField& f, const QuadratureRule& rule) {
  FieldSamples s;
  s.n = f.n;
  s.nodes = rule.nodes.size();
  s.value.assign(f.n, std::vector<double>(s.nodes));
  s.jac.assign(f.n * f.n, std::vector<double>(s.nodes));
  s.divg.resize(s.nodes);
  for (std::size_t i = 0; i < s.nodes; ++i) {
    Vec v = f.eval(rule.nodes[i]);
    Mat J = f.jacobian(rule.nodes[i]);
    for (int c = 0; c < f.n; ++c) s.value[c][i] = v[c];
    for (int a = 0; a < f.n; ++a)
      for (int b = 0; b < f.n; ++b) s.jac[a * f.n + b][i] = J(a, b);
    s.divg[i] = J.trace();
  }
  return s;
}

struct BilinearForms {
  double mass = 0;  // int B_k . B_l
  double grad = 0;  // int grad B_k : grad B_l
  double curl = 0;  // int curl B_k : curl B_l
  double div = 0;   // int div B_k div B_l
  double sym = 0;   // int Sym B_k : Sym B_l
};

BilinearForms pair_forms(const FieldSamples& fk, const FieldSamples& fl,
                         const std::vector<double>& w) {
  const int n = fk.n;
  const std::size_t N = fk.nodes;
  const double* wd = w.data();
  BilinearForms out;
  for (int c = 0; c < n; ++c)
    out.mass += kernels::weighted_dot(wd, fk.value[c].data(), fl.value[c].data(), N);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      out.grad += kernels::weighted_dot(wd, fk.jac[a * n + b].data(),
                                        fl.jac[a * n + b].data(), N);
  // curl:curl = grad:grad - grad:grad^T ; sym:sym = (grad:grad + grad:grad^T)/2
  double cross = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      cross += kernels::weighted_dot(wd, fk.jac[a * n + b].data(),
                                     fl.jac[b * n + a].data(), N);
  out.curl = out.grad - cross;
  out.sym = 0.5 * (out.grad + cross);
  out.div = kernels::weighted_dot(wd, fk.divg.data(), fl.divg.data(), N);
  return out;
}

}  // namespace

GramPair assemble_grams(const TrialSpace& space, const QuadratureRule& rule,
                        QuotientKind kind) {
  const int m = int(space.basis.size());
  const double rho = reach_analytic(space.dom).value;
  const double inv_rho2 = 1.0 / (rho * rho);
  GramPair g;
  g.m = m;
  g.A.assign(std::size_t(m) * m, 0.0);
  g.M.assign(std::size_t(m) * m, 0.0);

  std::vector<FieldSamples> samples(m);
  parallel_for(m, [&](std::size_t k) {
    samples[k] = sample_field(space.basis[k], rule);
  });

  // Upper triangle in parallel, then mirror.
  std::vector<std::pair<int, int>> pairs;
  for (int k = 0; k < m; ++k)
    for (int l = k; l < m; ++l) pairs.emplace_back(k, l);
  std::vector<BilinearForms> forms(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t p) {
    forms[p] = pair_forms(samples[pairs[p].first], samples[pairs[p].second],
                          rule.weights);
  });
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto [k, l] = pairs[p];
    const BilinearForms& f = forms[p];
    double num = f.mass * inv_rho2 + f.grad;
    double den = (kind == QuotientKind::Gaffney)
                     ? f.mass * inv_rho2 + f.curl + f.div
                     : f.mass * inv_rho2 + f.sym;
    g.A[k * m + l] = g.A[l * m + k] = num;
    g.M[k * m + l] = g.M[l * m + k] = den;
  }
  return g;
}

RayleighResult max_generalized_rayleigh(const GramPair& grams) {
  const int m = grams.m;
  if (m == 0) fail(ErrorCode::InvalidParams, "empty trial space");
  Eigen::Map<const Eigen::MatrixXd> A(grams.A.data(), m, m);
  Eigen::Map<const Eigen::MatrixXd> M(grams.M.data(), m, m);

  double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, M.cwiseAbs().maxCoeff()))
    fail(ErrorCode::InvalidParams, "denominator Gram is not symmetric");

  // Spectral rank filter on M, then whiten and solve the standard problem.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> mh(M);
  if (mh.info() != Eigen::Success)
    fail(ErrorCode::EigenNoConvergence, "denominator eigensolve failed");
  double lmax = mh.eigenvalues().maxCoeff();
  if (!(lmax > 0)) fail(ErrorCode::NotPositiveDefinite, "denominator form <= 0");
  double thresh = 1e-10 * lmax;
  std::vector<int> keep;
  for (int i = 0; i < m; ++i)
    if (mh.eigenvalues()(i) > thresh) keep.push_back(i);
  if (keep.empty()) fail(ErrorCode::RankDeficient, "no directions retained");

  Eigen::MatrixXd T(m, keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c)
    T.col(c) =
        mh.eigenvectors().col(keep[c]) / std::sqrt(mh.eigenvalues()(keep[c]));
  Eigen::MatrixXd Ared = T.transpose() * A * T;
  Ared = 0.5 * (Ared + Ared.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ah(Ared);
  if (ah.info() != Eigen::Success)
    fail(ErrorCode::EigenNoConvergence, "reduced eigensolve failed");
  int top = int(keep.size()) - 1;
  RayleighResult out;
  out.lambda = ah.eigenvalues()(top);
  out.retained = int(keep.size());
  Eigen::VectorXd v = T * ah.eigenvectors().col(top);
  Eigen::VectorXd rv = A * v - out.lambda * (M * v);
  double mvn = (M * v).norm();
  out.residual = mvn > 0 ? rv.norm() / mvn : 0.0;
  if (out.residual > 1e-8)
    fail(ErrorCode::EigenNoConvergence,
         "eigenpair residual " + fmt12(out.residual) + " exceeds 1e-8");
  out.coefficients.assign(v.data(), v.data() + m);
  return out;
}

std::vector<LadderEntry> estimate_constant(const Domain& dom, Bc bc,
                                           QuotientKind kind,
                                           const std::vector<int>& degrees,
                                           int order) {
  std::vector<LadderEntry> out;
  for (int d : degrees) {
    TrialSpace ts = build_trial_space(dom, bc, d);
    QuadratureRule rule = make_rule(dom, order);
    GramPair g = assemble_grams(ts, rule, kind);
    RayleighResult r = max_generalized_rayleigh(g);
    out.push_back({d, int(ts.basis.size()), r.retained, r.lambda, r.residual});
  }
  return out;
}

SweepTable sweep(const std::string& family, const std::vector<double>& grid,
                 const std::string& field, Bc bc, int order, int threads) {
  SweepTable t;
  t.family = family;
  t.field = field;
  t.bc = bc;
  if (family != "torus" && family != "annulus")
    fail(ErrorCode::ConfigError, "sweep supports families 'torus' and 'annulus'");
  t.param_name = (family == "torus") ? "aspect" : "ratio";
  t.rows.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    SweepRow row;
    row.param = grid[i];
    try {
      Domain dom = (family == "torus")
                       ? (grid[i] > 1.0
                              ? make_torus(1.0, grid[i])
                              : throw Error(ErrorCode::InvalidAspect,
                                            "aspect ratio must exceed 1"))
                       : make_annulus(1.0, grid[i]);
      QuadratureRule rule = make_rule(dom, order);
      VectorField f = make_field(field, dom);
      QuotientReport rep = homogeneous_quotients(f, dom, rule, bc);
      row.rho = rep.rho;
      row.norms = rep.norms;
      row.q_gaffney = rep.quotient_gaffney;
      row.q_korn = rep.quotient_korn;
      if (family == "torus" && field == "torus_gamma") {
        row.closed_form = torus_gamma_quotient(grid[i]);
        row.has_closed_form = true;
      }
      row.ok = true;
    } catch (const Error& e) {
      row.ok = false;
      row.error = error_code_name(e.code());
    }
    t.rows[i] = row;
  }, threads);
  return t;
}

std::string sweep_csv(const SweepTable& t) {
  std::ostringstream os;
  os << t.param_name
     << ",status,rho,q_gaffney,q_korn,closed_form,l2,grad,curl,div,sym,boundary\n";
  for (const auto& r : t.rows) {
    os << fmt17(r.param) << ',';
    if (!r.ok) {
      os << "failed:" << r.error << ",,,,,,,,,,\n";
      continue;
    }
    os << "ok," << fmt17(r.rho) << ',' << fmt17(r.q_gaffney) << ','
       << fmt17(r.q_korn) << ','
       << (r.has_closed_form ? fmt17(r.closed_form) : std::string()) << ','
       << fmt17(r.norms.l2) << ',' << fmt17(r.norms.grad) << ','
       << fmt17(r.norms.curl) << ',' << fmt17(r.norms.div) << ','
       << fmt17(r.norms.sym) << ',' << fmt17(r.norms.boundary) << "\n";
  }
  return os.str();
}

std::string ladder_csv(const std::vector<LadderEntry>& entries, double cap) {
  std::ostringstream os;
  os << "degree,basis_size,retained,lambda,residual,cap,gap\n";
  for (const auto& e : entries)
    os << e.degree << ',' << e.basis_size << ',' << e.retained << ','
       << fmt17(e.lambda) << ',' << fmt17(e.residual) << ',' << fmt17(cap) << ','
       << fmt17(cap - e.lambda) << "\n";
  return os.str();
}

}  // namespace vfi
