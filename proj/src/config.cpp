#include "vfi/config.hpp"

#include <json.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "vfi/oracles.hpp"
#include "vfi/parallel.hpp"
#include "vfi/search.hpp"

namespace vfi {

using json = nlohmann::ordered_json;

const std::string* ExperimentConfig::find(const std::string& key) const {
  for (const auto& [k, v] : kv)
    if (k == key) return &v;
  return nullptr;
}

std::string ExperimentConfig::get(const std::string& key,
                                  const std::string& fallback) const {
  const std::string* v = find(key);
  return v ? *v : fallback;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : kv)
    if (k == key) {
      v = value;
      return;
    }
  kv.emplace_back(key, value);
}

namespace {

const std::set<std::string>& allowed_keys() {
  static const std::set<std::string> keys = {
      "domain", "field", "bc",      "order",   "degrees", "kind", "grid",
      "out",    "tol",   "case",    "n",       "n_max",   "threads",
      "manifest", "epsilon_grid"};
  return keys;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::ConfigError, "expected key=value, got '" + line + "'");
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    if (key == "command") {
      if (!c.command.empty())
        fail(ErrorCode::ConfigError, "duplicate command line");
      c.command = value;
      continue;
    }
    if (!allowed_keys().count(key))
      fail(ErrorCode::ConfigError, "unknown config key '" + key + "'");
    c.kv.emplace_back(key, value);
  }
  if (c.command.empty()) fail(ErrorCode::ConfigError, "missing command=...");
  return c;
}

std::string emit_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "command=" << c.command << "\n";
  for (const auto& [k, v] : c.kv) os << k << "=" << v << "\n";
  return os.str();
}

std::vector<ManifestEntry> check_manifest() {
  return {
      {"constants_c1", "tangent dimensional constant 1+(1+sqrt(1+n))^2"},
      {"constants_c2",
       "normal dimensional constant 1+(n-1+sqrt(n-1)sqrt(2n-1))^2"},
      {"constant_expansion", "C1 expands to n+3+2 sqrt(1+n)"},
      {"epsilon_identity",
       "balance identity (c/(1-c eps))(n+1/eps) = (c+sqrt(c)sqrt(c+n))^2"},
      {"reach_analytic", "closed-form reach per family"},
      {"reach_uniform_ball", "uniform-ball bisection agrees with closed form"},
      {"curvature_reach_bound", "principal curvatures bounded by 1/reach"},
      {"tube_determinant",
       "collar metric determinant ratio prod (1+t kappa_j)^2"},
      {"tube_roundtrip", "nearest-point projection inverts the collar chart"},
      {"div_extension_bound",
       "normal extension divergence bounded by (1/alpha+n-1)/reach"},
      {"bc_residual", "node-wise tangent/normal boundary-condition residual"},
      {"quadrature_resolution", "norms stable under order doubling"},
      {"identity_tangent",
       "tangent gradient identity with shape-operator boundary term"},
      {"identity_normal",
       "normal gradient identity with mean-curvature boundary term"},
      {"korn_identity_tangent",
       "tangent symmetric-gradient identity with shape-operator term"},
      {"korn_identity_normal",
       "normal symmetric-gradient identity with mean-curvature term"},
      {"trace_inequality",
       "boundary trace bounded by eps rho grad + ((n+1/eps)/rho) mass"},
      {"trace_tightness_constants",
       "constants on balls saturate the trace coefficient as eps grows"},
      {"gaffney_bound", "homogeneous curl-div quotient bounded by C1/C2"},
      {"korn_bound", "homogeneous symmetric-gradient quotient bounded by C1/C2"},
      {"constant_transfer", "classical constant <= max(rho^2, rho^-2) * C"},
      {"convex_special", "curl-div dominance on convex domains, tangent bc"},
      {"meanconvex_special",
       "curl-div dominance on mean-convex domains, normal bc"},
      {"torus_gamma_closed_form",
       "harmonic azimuthal torus field: closed forms vs quadrature"},
      {"torus_argmax", "torus quotient peaks at aspect ratio 2"},
      {"ball_killing", "rotation field on the n-ball: ratios n+2 and n+3"},
      {"duality_2d", "2-d quotient invariance under perp rotation and bc swap"},
      {"quotient_floor", "trace-zero fields pin the quotient floor at 1"},
      {"search_monotonicity", "nested trial spaces give nondecreasing maxima"},
      {"search_cap", "searched maxima capped by the dimensional constants"},
      {"search_scaling", "estimates invariant under domain scaling"},
      {"determinism", "byte-identical artifacts across thread counts"},
  };
}

// ---------------------------------------------------------------------------
// Experiment runner
// ---------------------------------------------------------------------------

namespace {

struct CheckFailure {
  std::string check;
  std::string detail;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream of(path, std::ios::binary);
  if (!of) fail(ErrorCode::ConfigError, "cannot open output file " + path);
  of << content;
}

json norms_json(const Norms& n) {
  return json{{"l2", n.l2},     {"grad", n.grad}, {"curl", n.curl},
              {"div", n.div},   {"sym", n.sym},   {"boundary", n.boundary}};
}

json report_json(const QuotientReport& r) {
  return json{{"domain", r.domain_id},
              {"field", r.field},
              {"bc", bc_name(r.bc)},
              {"rho", r.rho},
              {"rho_method", r.rho_method == ReachMethod::Analytic
                                 ? "analytic"
                                 : "uniform_ball_bisection"},
              {"norms", norms_json(r.norms)},
              {"boundary_term", r.boundary_term},
              {"bc_residual", r.bc_resid},
              {"q_gaffney", r.quotient_gaffney},
              {"q_korn", r.quotient_korn},
              {"C_bound", r.constant_bound},
              {"slack_g", r.slack_gaffney},
              {"slack_k", r.slack_korn},
              {"res_gaffney_id", r.res_gaffney_id},
              {"res_korn_id", r.res_korn_id}};
}

int cmd_constants(const ExperimentConfig& c) {
  int n = std::stoi(c.get("n", "3"));
  int n_max = std::stoi(c.get("n_max", std::to_string(n)));
  json out = json::array();
  for (int k = n; k <= n_max; ++k) {
    double c1 = constant_c1(k), c2 = constant_c2(k);
    EpsilonChoice et = optimal_epsilon(Bc::Tangent, k);
    EpsilonChoice en = optimal_epsilon(Bc::Normal, k);
    std::cout << "n=" << k << "  C1=" << fmt12(c1) << "  C2=" << fmt12(c2)
              << "\n  tangent: c=" << fmt12(et.c_n) << " eps=" << fmt12(et.epsilon)
              << " amplification=" << fmt12(et.amplification)
              << "\n  normal:  c=" << fmt12(en.c_n) << " eps=" << fmt12(en.epsilon)
              << " amplification=" << fmt12(en.amplification) << "\n";
    out.push_back(json{{"n", k},
                       {"C1", c1},
                       {"C2", c2},
                       {"expansion_gap", c1 - (k + 3 + 2 * std::sqrt(1.0 + k))},
                       {"tangent",
                        {{"c", et.c_n},
                         {"eps", et.epsilon},
                         {"amplification", et.amplification}}},
                       {"normal",
                        {{"c", en.c_n},
                         {"eps", en.epsilon},
                         {"amplification", en.amplification}}}});
  }
  std::string path = c.get("out", "");
  if (!path.empty()) write_file(path + ".json", out.dump(2) + "\n");
  return 0;
}

int cmd_reach(const ExperimentConfig& c) {
  Domain dom = parse_domain(c.get("domain", "ball"));
  double tol = std::stod(c.get("tol", "1e-3"));
  ReachEstimate an = reach_analytic(dom);
  ReachEstimate nu = reach_numeric(dom, tol);
  double diff = std::abs(an.value - nu.value);
  std::cout << dom.id() << "  reach_analytic=" << fmt12(an.value)
            << "  reach_numeric=" << fmt12(nu.value) << "  |diff|=" << fmt12(diff)
            << "  tol=" << fmt12(tol) << "\n";
  std::string path = c.get("out", "");
  if (!path.empty())
    write_file(path + ".json",
               json{{"domain", dom.id()},
                    {"reach_analytic", an.value},
                    {"reach_numeric", nu.value},
                    {"tol", tol},
                    {"diff", diff}}
                       .dump(2) +
                   "\n");
  if (diff > 2 * tol) {
    std::cout << "FAIL reach_uniform_ball: disagreement " << fmt12(diff)
              << " > 2*tol\n";
    return 1;
  }
  return 0;
}

// All inequality/identity checks for one (domain, field, bc) triple.
QuotientReport verify_triple(const Domain& dom, const std::string& field_name,
                             Bc bc, int order, const std::string& eps_spec,
                             std::vector<CheckFailure>& failures) {
  VectorField f = make_field(field_name, dom);
  std::string tag = " (" + field_name + " on " + dom.id() + ", " + bc_name(bc) + ")";
  try {
    compute_norms_resolved(f, dom, order);
  } catch (const Error& e) {
    failures.push_back({"quadrature_resolution", e.what() + tag});
  }
  QuadratureRule rule = make_rule(dom, order);
  QuotientReport rep = homogeneous_quotients(f, dom, rule, bc);

  if (rep.res_gaffney_id > 1e-7)
    failures.push_back({bc == Bc::Tangent ? "identity_tangent" : "identity_normal",
                        "relative residual " + fmt12(rep.res_gaffney_id) + tag});
  if (rep.res_korn_id > 1e-7)
    failures.push_back(
        {bc == Bc::Tangent ? "korn_identity_tangent" : "korn_identity_normal",
         "relative residual " + fmt12(rep.res_korn_id) + tag});
  if (rep.slack_gaffney < -1e-8 * rep.constant_bound)
    failures.push_back({"gaffney_bound", "slack " + fmt12(rep.slack_gaffney) + tag});
  if (rep.slack_korn < -1e-8 * rep.constant_bound)
    failures.push_back({"korn_bound", "slack " + fmt12(rep.slack_korn) + tag});
  if ((bc == Bc::Tangent && dom.convex()) || (bc == Bc::Normal && dom.mean_convex())) {
    double slack = convexity_special_case(f, dom, rule, bc);
    double scale = std::max(rep.norms.grad, 1e-30);
    if (slack < -1e-8 * scale)
      failures.push_back(
          {bc == Bc::Tangent ? "convex_special" : "meanconvex_special",
           "slack " + fmt12(slack) + tag});
  }
  // Trace inequality over the epsilon grid (lo:hi:count).
  auto c1 = eps_spec.find(':');
  auto c2 = eps_spec.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    fail(ErrorCode::ConfigError, "epsilon_grid must be lo:hi:count");
  auto grid = epsilon_grid(std::stod(eps_spec.substr(0, c1)),
                           std::stod(eps_spec.substr(c1 + 1, c2 - c1 - 1)),
                           std::stoi(eps_spec.substr(c2 + 1)));
  for (double eps : grid) {
    double rhs = 0;
    double slack = trace_slack(rep.norms, dom.n, rep.rho, eps, &rhs);
    if (slack < -1e-8 * rhs) {
      failures.push_back({"trace_inequality", "slack " + fmt12(slack) + " at eps " +
                                                  fmt12(eps) + tag});
      break;
    }
  }
  return rep;
}

int cmd_verify(const ExperimentConfig& c) {
  int order = std::stoi(c.get("order", "24"));
  std::string eps_spec = c.get("epsilon_grid", "1e-3:1e3:25");
  std::vector<CheckFailure> failures;
  std::vector<QuotientReport> reports;

  // With an explicit field: one triple. Without: the whole registry.
  if (const std::string* field = c.find("field")) {
    Domain dom = parse_domain(c.get("domain", "ball"));
    Bc bc = parse_bc(c.get("bc", "tangent"));
    reports.push_back(verify_triple(dom, *field, bc, order, eps_spec, failures));
  } else {
    if (c.find("domain"))
      fail(ErrorCode::ConfigError,
           "registry-wide verify takes no domain; pass --field for a single triple");
    for (const auto& t : verification_registry())
      reports.push_back(verify_triple(parse_domain(t.domain_config), t.field, t.bc,
                                      order, eps_spec, failures));
  }

  std::ostringstream csv;
  csv << quotient_csv_header() << "\n";
  for (const auto& rep : reports) csv << quotient_csv_row(rep) << "\n";
  std::cout << csv.str();
  std::string path = c.get("out", "");
  if (!path.empty()) {
    json arr = json::array();
    for (const auto& rep : reports) arr.push_back(report_json(rep));
    write_file(path + ".json", arr.dump(2) + "\n");
    write_file(path + ".csv", csv.str());
  }
  for (const auto& fl : failures)
    std::cout << "FAIL " << fl.check << ": " << fl.detail << "\n";
  if (failures.empty()) std::cout << "all checks passed\n";
  return failures.empty() ? 0 : 1;
}

int cmd_oracle(const ExperimentConfig& c) {
  std::string which = c.get("case", "all");
  int order = std::stoi(c.get("order", "32"));
  std::vector<std::string> names =
      which == "all" ? oracle_case_names() : std::vector<std::string>{which};
  bool all_pass = true;
  json out = json::array();
  for (const auto& nm : names) {
    OracleCase oc = run_oracle_case(nm, order);
    std::cout << "case " << oc.name << ": " << (oc.pass ? "PASS" : "FAIL") << "\n";
    json scalars = json::array();
    for (const auto& s : oc.scalars) {
      std::cout << "  " << (s.pass ? "pass" : "FAIL") << "  " << s.name
                << "  expected=" << fmt12(s.expected)
                << "  computed=" << fmt12(s.computed) << "  tol=" << fmt12(s.tol)
                << "\n";
      scalars.push_back(json{{"name", s.name},
                             {"expected", s.expected},
                             {"computed", s.computed},
                             {"tol", s.tol},
                             {"pass", s.pass}});
    }
    out.push_back(json{{"case", oc.name},
                       {"description", oc.description},
                       {"pass", oc.pass},
                       {"scalars", scalars}});
    all_pass = all_pass && oc.pass;
  }
  std::string path = c.get("out", "");
  if (!path.empty()) write_file(path + ".json", out.dump(2) + "\n");
  return all_pass ? 0 : 1;
}

std::vector<int> parse_degrees(const std::string& s) {
  auto dots = s.find("..");
  std::vector<int> out;
  if (dots != std::string::npos) {
    int lo = std::stoi(s.substr(0, dots));
    int hi = std::stoi(s.substr(dots + 2));
    for (int d = lo; d <= hi; ++d) out.push_back(d);
  } else {
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(std::stoi(tok));
  }
  if (out.empty()) fail(ErrorCode::ConfigError, "empty degree list '" + s + "'");
  return out;
}

int cmd_estimate(const ExperimentConfig& c) {
  Domain dom = parse_domain(c.get("domain", "family=ball n=2 r=1"));
  Bc bc = parse_bc(c.get("bc", "tangent"));
  QuotientKind kind = parse_kind(c.get("kind", "korn"));
  std::vector<int> degrees = parse_degrees(c.get("degrees", "1..4"));
  int order = std::stoi(c.get("order", "12"));
  auto ladder = estimate_constant(dom, bc, kind, degrees, order);
  double cap = theorem_constant(bc, dom.n);
  std::string csv = ladder_csv(ladder, cap);
  std::cout << csv;

  std::vector<CheckFailure> failures;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (ladder[i].lambda > cap + 1e-6)
      failures.push_back(
          {"search_cap", "lambda " + fmt12(ladder[i].lambda) + " above bound"});
    if (i > 0 && ladder[i].lambda < ladder[i - 1].lambda - 1e-10)
      failures.push_back({"search_monotonicity",
                          "degree " + std::to_string(ladder[i].degree) +
                              " dropped below its predecessor"});
  }
  std::string path = c.get("out", "");
  if (!path.empty()) {
    write_file(path + ".csv", csv);
    json entries = json::array();
    for (const auto& e : ladder)
      entries.push_back(json{{"degree", e.degree},
                             {"basis_size", e.basis_size},
                             {"retained", e.retained},
                             {"lambda", e.lambda},
                             {"residual", e.residual}});
    write_file(path + ".json",
               json{{"domain", dom.id()},
                    {"bc", bc_name(bc)},
                    {"kind", kind_name(kind)},
                    {"order", order},
                    {"rho", reach_analytic(dom).value},
                    {"cap", cap},
                    {"entries", entries}}
                       .dump(2) +
                   "\n");
  }
  for (const auto& fl : failures)
    std::cout << "FAIL " << fl.check << ": " << fl.detail << "\n";
  return failures.empty() ? 0 : 1;
}

std::vector<double> parse_grid(const std::string& s) {
  // lo:hi:step
  auto c1 = s.find(':');
  auto c2 = s.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    fail(ErrorCode::ConfigError, "grid must be lo:hi:step, got '" + s + "'");
  double lo = std::stod(s.substr(0, c1));
  double hi = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
  double step = std::stod(s.substr(c2 + 1));
  if (!(step > 0) || hi < lo) fail(ErrorCode::ConfigError, "bad grid '" + s + "'");
  int count = int(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 100000) fail(ErrorCode::ConfigError, "grid has too many points");
  std::vector<double> g;
  for (int i = 0; i < count; ++i) g.push_back(lo + i * step);
  return g;
}

int cmd_sweep(const ExperimentConfig& c) {
  std::string family = c.get("domain", "torus");
  std::string field = c.get("field", "torus_gamma");
  Bc bc = parse_bc(c.get("bc", "tangent"));
  int order = std::stoi(c.get("order", "32"));
  std::vector<double> grid = parse_grid(c.get("grid", "1.1:3.0:0.01"));
  SweepTable t = sweep(family, grid, field, bc, order);
  std::string csv = sweep_csv(t);
  std::string path = c.get("out", "");
  if (!path.empty()) {
    write_file(path + ".csv", csv);
    write_file(path + ".json",
               json{{"family", t.family},
                    {"field", t.field},
                    {"bc", bc_name(t.bc)},
                    {"param", t.param_name},
                    {"order", order},
                    {"rows", t.rows.size()},
                    {"grid", c.get("grid", "1.1:3.0:0.01")}}
                       .dump(2) +
                   "\n");
  } else {
    std::cout << csv;
  }
  std::size_t ok = 0;
  for (const auto& r : t.rows) ok += r.ok ? 1 : 0;
  std::cout << "sweep: " << ok << "/" << t.rows.size() << " rows ok\n";
  return 0;
}

}  // namespace

int run_experiment(const ExperimentConfig& c) {
  if (const std::string* th = c.find("threads")) {
    setenv("VFI_THREADS", th->c_str(), 1);
  }
  if (c.get("manifest", "") == "1") {
    json out = json::array();
    for (const auto& m : check_manifest())
      out.push_back(json{{"check", m.check}, {"description", m.description}});
    std::cout << out.dump(2) << "\n";
  }
  try {
    if (c.command == "constants") return cmd_constants(c);
    if (c.command == "reach") return cmd_reach(c);
    if (c.command == "verify") return cmd_verify(c);
    if (c.command == "oracle") return cmd_oracle(c);
    if (c.command == "estimate") return cmd_estimate(c);
    if (c.command == "sweep") return cmd_sweep(c);
    fail(ErrorCode::ConfigError, "unknown command '" + c.command + "'");
  } catch (const Error& e) {
    // Bad experiment descriptions (unknown keys, out-of-range family
    // parameters) are config errors; everything else is a failed check.
    if (e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::InvalidParams ||
        e.code() == ErrorCode::InvalidDimension ||
        e.code() == ErrorCode::UnsupportedDomainForSearch) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    }
    std::cerr << "FAIL: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace vfi
