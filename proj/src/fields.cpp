#include "vfi/fields.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <memory>

namespace vfi {

// ---------------------------------------------------------------------------
// Polynomial
// ---------------------------------------------------------------------------

double Polynomial::eval(const Vec& x) const {
  double s = 0;
  for (const auto& m : terms) {
    double t = m.coef;
    for (int i = 0; i < n; ++i)
      for (int p = 0; p < m.exp[i]; ++p) t *= x[i];
    s += t;
  }
  return s;
}

Polynomial Polynomial::derivative(int var) const {
  Polynomial d;
  d.n = n;
  for (const auto& m : terms) {
    if (m.exp[var] == 0) continue;
    Monomial t = m;
    t.coef *= t.exp[var];
    t.exp[var] -= 1;
    d.terms.push_back(t);
  }
  return d;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial p;
  p.n = n;
  std::map<std::array<int, kMaxDim>, double> acc;
  for (const auto& l : terms)
    for (const auto& r : o.terms) {
      std::array<int, kMaxDim> e{};
      for (int i = 0; i < n; ++i) e[i] = l.exp[i] + r.exp[i];
      acc[e] += l.coef * r.coef;
    }
  for (const auto& [e, c] : acc)
    if (c != 0) p.terms.push_back({c, e});
  return p;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial p = *this;
  p.terms.insert(p.terms.end(), o.terms.begin(), o.terms.end());
  return p;
}

Polynomial Polynomial::scaled(double s) const {
  Polynomial p = *this;
  for (auto& m : p.terms) m.coef *= s;
  return p;
}

Polynomial Polynomial::constant(int n, double c) {
  Polynomial p;
  p.n = n;
  if (c != 0) p.terms.push_back({c, {}});
  return p;
}

Polynomial Polynomial::variable(int n, int i) {
  Polynomial p;
  p.n = n;
  Monomial m;
  m.coef = 1;
  m.exp[i] = 1;
  p.terms.push_back(m);
  return p;
}

Polynomial Polynomial::parse(const std::string& s, int n) {
  Polynomial p;
  p.n = n;
  std::size_t i = 0;
  auto skip = [&] { while (i < s.size() && std::isspace((unsigned char)s[i])) ++i; };
  skip();
  bool first = true;
  while (i < s.size()) {
    double sign = 1.0;
    skip();
    if (s[i] == '+' || s[i] == '-') {
      sign = (s[i] == '-') ? -1.0 : 1.0;
      ++i;
    } else if (!first) {
      fail(ErrorCode::ConfigError, "expected +/- in polynomial '" + s + "'");
    }
    first = false;
    Monomial m;
    m.coef = sign;
    bool any = false;
    for (;;) {
      skip();
      if (i < s.size() && (std::isdigit((unsigned char)s[i]) || s[i] == '.')) {
        std::size_t used = 0;
        m.coef *= std::stod(s.substr(i), &used);
        i += used;
        any = true;
      } else if (i < s.size() && s[i] == 'x') {
        ++i;
        std::size_t used = 0;
        int var = std::stoi(s.substr(i), &used);
        i += used;
        if (var < 0 || var >= n)
          fail(ErrorCode::ConfigError, "variable index out of range in '" + s + "'");
        int pw = 1;
        skip();
        if (i < s.size() && s[i] == '^') {
          ++i;
          pw = std::stoi(s.substr(i), &used);
          i += used;
        }
        m.exp[var] += pw;
        any = true;
      } else {
        break;
      }
      skip();
      if (i < s.size() && s[i] == '*') { ++i; continue; }
      break;
    }
    if (!any) fail(ErrorCode::ConfigError, "empty term in polynomial '" + s + "'");
    p.terms.push_back(m);
    skip();
  }
  return p;
}

// ---------------------------------------------------------------------------
// Field constructors
// ---------------------------------------------------------------------------

VectorField polynomial_field(const std::string& name, std::vector<Polynomial> comps) {
  const int n = comps.at(0).n;
  if (int(comps.size()) != n)
    fail(ErrorCode::InvalidParams, "field needs n components");
  // Precompute the n^2 partial derivatives.
  auto derivs = std::make_shared<std::vector<Polynomial>>();
  auto cs = std::make_shared<std::vector<Polynomial>>(std::move(comps));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) derivs->push_back((*cs)[i].derivative(j));
  VectorField f;
  f.name = name;
  f.n = n;
  f.eval = [cs, n](const Vec& x) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = (*cs)[i].eval(x);
    return v;
  };
  f.jacobian = [derivs, n](const Vec& x) {
    Mat J(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) J(i, j) = (*derivs)[i * n + j].eval(x);
    return J;
  };
  return f;
}

VectorField rotation_xy(int n) {
  std::vector<Polynomial> comps;
  comps.push_back(Polynomial::variable(n, 1).scaled(-1.0));
  comps.push_back(Polynomial::variable(n, 0));
  for (int i = 2; i < n; ++i) comps.push_back(Polynomial::constant(n, 0));
  return polynomial_field("rotation_xy", std::move(comps));
}

VectorField position_field(int n) {
  std::vector<Polynomial> comps;
  for (int i = 0; i < n; ++i) comps.push_back(Polynomial::variable(n, i));
  return polynomial_field("position", std::move(comps));
}

VectorField torus_gamma_field(double r, double R) {
  if (!(R - r > 0)) fail(ErrorCode::AxisTooClose, "domain closure touches the z-axis");
  double clearance = (R - r) / 2;
  VectorField f;
  f.name = "torus_gamma";
  f.n = 3;
  f.singular_set = "z-axis {x=y=0}";
  f.singular = [clearance](const Vec& x) {
    return std::hypot(x[0], x[1]) <= clearance;
  };
  f.eval = [](const Vec& x) {
    double u = x[0] * x[0] + x[1] * x[1];
    return Vec{-x[1] / u, x[0] / u, 0.0};
  };
  f.jacobian = [](const Vec& x) {
    double u = x[0] * x[0] + x[1] * x[1];
    double u2 = u * u;
    Mat J(3);
    J(0, 0) = 2 * x[0] * x[1] / u2;
    J(0, 1) = (x[1] * x[1] - x[0] * x[0]) / u2;
    J(1, 0) = (x[1] * x[1] - x[0] * x[0]) / u2;
    J(1, 1) = -2 * x[0] * x[1] / u2;
    return J;
  };
  return f;
}

VectorField torus_normal_field(double r, double R) {
  if (!(R - r > 0)) fail(ErrorCode::AxisTooClose, "domain closure touches the z-axis");
  double clearance = (R - r) / 2;
  VectorField f;
  f.name = "torus_normal";
  f.n = 3;
  f.singular_set = "z-axis {x=y=0}";
  f.singular = [clearance](const Vec& x) {
    return std::hypot(x[0], x[1]) <= clearance;
  };
  // Gradient of w = r^2 - (rho_c - R)^2 - z^2; vanishes on the boundary
  // level set, so the gradient is normal there.
  f.eval = [R](const Vec& x) {
    double rho = std::hypot(x[0], x[1]);
    double fac = -2.0 * (rho - R) / rho;
    return Vec{fac * x[0], fac * x[1], -2.0 * x[2]};
  };
  f.jacobian = [R](const Vec& x) {
    double rho = std::hypot(x[0], x[1]);
    double rho3 = rho * rho * rho;
    Mat J(3);
    J(0, 0) = -2.0 + 2.0 * R * x[1] * x[1] / rho3;
    J(0, 1) = -2.0 * R * x[0] * x[1] / rho3;
    J(1, 0) = -2.0 * R * x[0] * x[1] / rho3;
    J(1, 1) = -2.0 + 2.0 * R * x[0] * x[0] / rho3;
    J(2, 2) = -2.0;
    return J;
  };
  return f;
}

namespace {

void check_support(const Domain& dom, const Vec& center, double radius) {
  double inside = -signed_distance(dom, center);
  if (!(inside > radius * (1.0 + 1e-9)))
    fail(ErrorCode::SupportTouchesBoundary,
         "bump support ball is not strictly inside " + dom.id());
}

// profile(s2) = (1 - s2)^3 on s2 < 1, with s2 = |x-c|^2 / radius^2.
inline double profile(double s2) { double q = 1 - s2; return q * q * q; }
inline double profile_d(double s2) { double q = 1 - s2; return -3 * q * q; }
inline double profile_dd(double s2) { return 6 * (1 - s2); }

}  // namespace

VectorField bump_field(const Domain& dom, const Vec& center, double radius,
                       const Vec& direction) {
  check_support(dom, center, radius);
  const int n = dom.n;
  Vec c = center;
  Vec d = direction;
  double rb2 = radius * radius;
  VectorField f;
  f.name = "bump";
  f.n = n;
  f.support = VectorField::SupportBall{center, radius};
  f.eval = [c, d, rb2, n](const Vec& x) {
    Vec dx = x - c;
    double s2 = dx.norm2() / rb2;
    if (s2 >= 1.0) return Vec::zero(n);
    return d * profile(s2);
  };
  f.jacobian = [c, d, rb2, n](const Vec& x) {
    Vec dx = x - c;
    double s2 = dx.norm2() / rb2;
    Mat J(n);
    if (s2 >= 1.0) return J;
    double dp = profile_d(s2) * 2.0 / rb2;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) J(i, j) = d[i] * dp * dx[j];
    return J;
  };
  return f;
}

VectorField divfree_bump_field(const Domain& dom, const Vec& center, double radius,
                               const Vec& direction3) {
  check_support(dom, center, radius);
  const int n = dom.n;
  Vec c = center;
  double rb2 = radius * radius;
  VectorField f;
  f.name = "bump_curl";
  f.n = n;
  f.support = VectorField::SupportBall{center, radius};
  if (n == 2) {
    // perp-gradient of the scalar bump: (-d_y phi, d_x phi).
    f.eval = [c, rb2](const Vec& x) {
      Vec dx = x - c;
      double s2 = dx.norm2() / rb2;
      if (s2 >= 1.0) return Vec::zero(2);
      double g = profile_d(s2) * 2.0 / rb2;
      return Vec{-g * dx[1], g * dx[0]};
    };
    f.jacobian = [c, rb2](const Vec& x) {
      Vec dx = x - c;
      double s2 = dx.norm2() / rb2;
      Mat J(2);
      if (s2 >= 1.0) return J;
      double g = profile_d(s2) * 2.0 / rb2;
      double gg = profile_dd(s2) * 4.0 / (rb2 * rb2);
      // B = (-g*dx1, g*dx0)
      J(0, 0) = -gg * dx[1] * dx[0];
      J(0, 1) = -gg * dx[1] * dx[1] - g;
      J(1, 0) = gg * dx[0] * dx[0] + g;
      J(1, 1) = gg * dx[0] * dx[1];
      return J;
    };
    return f;
  }
  if (n != 3) fail(ErrorCode::InvalidDimension, "bump_curl needs n = 2 or 3");
  Vec d = direction3;
  // B = curl(phi * d) = grad(phi) x d, phi the scalar bump.
  f.eval = [c, d, rb2](const Vec& x) {
    Vec dx = x - c;
    double s2 = dx.norm2() / rb2;
    if (s2 >= 1.0) return Vec::zero(3);
    double g = profile_d(s2) * 2.0 / rb2;  // grad phi = g * dx
    return Vec{g * (dx[1] * d[2] - dx[2] * d[1]), g * (dx[2] * d[0] - dx[0] * d[2]),
               g * (dx[0] * d[1] - dx[1] * d[0])};
  };
  f.jacobian = [c, d, rb2](const Vec& x) {
    Vec dx = x - c;
    double s2 = dx.norm2() / rb2;
    Mat J(3);
    if (s2 >= 1.0) return J;
    double g = profile_d(s2) * 2.0 / rb2;
    double gg = profile_dd(s2) * 4.0 / (rb2 * rb2);
    Vec cr{dx[1] * d[2] - dx[2] * d[1], dx[2] * d[0] - dx[0] * d[2],
           dx[0] * d[1] - dx[1] * d[0]};
    // d_j (g * cr_i) = gg*dx_j*cr_i + g * d_j(cr_i)
    Mat dcr(3);  // d cr_i / d x_j
    dcr(0, 1) = d[2]; dcr(0, 2) = -d[1];
    dcr(1, 0) = -d[2]; dcr(1, 2) = d[0];
    dcr(2, 0) = d[1]; dcr(2, 1) = -d[0];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) J(i, j) = gg * dx[j] * cr[i] + g * dcr(i, j);
    return J;
  };
  return f;
}

VectorField perp_rotate(const VectorField& f) {
  if (f.n != 2) fail(ErrorCode::InvalidDimension, "perp rotation is 2-d only");
  VectorField g;
  g.name = "perp_of:" + f.name;
  g.n = 2;
  g.singular = f.singular;
  g.singular_set = f.singular_set;
  g.support = f.support;
  auto ev = f.eval;
  auto jc = f.jacobian;
  g.eval = [ev](const Vec& x) {
    Vec v = ev(x);
    return Vec{-v[1], v[0]};
  };
  g.jacobian = [jc](const Vec& x) {
    Mat J = jc(x);
    Mat G(2);
    G(0, 0) = -J(1, 0); G(0, 1) = -J(1, 1);
    G(1, 0) = J(0, 0);  G(1, 1) = J(0, 1);
    return G;
  };
  return g;
}

Polynomial level_function(const Domain& dom) {
  const int n = dom.n;
  Polynomial norm2 = Polynomial::constant(n, 0);
  for (int i = 0; i < n; ++i)
    norm2 = norm2 + Polynomial::variable(n, i) * Polynomial::variable(n, i);
  switch (dom.family) {
    case Family::Ball:
      return Polynomial::constant(n, dom.r * dom.r) + norm2.scaled(-1.0);
    case Family::Annulus:
      return (norm2 + Polynomial::constant(n, -dom.r0 * dom.r0)) *
             (Polynomial::constant(n, dom.r1 * dom.r1) + norm2.scaled(-1.0));
    case Family::Ellipse: {
      Polynomial x2 = Polynomial::variable(n, 0) * Polynomial::variable(n, 0);
      Polynomial y2 = Polynomial::variable(n, 1) * Polynomial::variable(n, 1);
      return Polynomial::constant(n, 1.0) + x2.scaled(-1.0 / (dom.a * dom.a)) +
             y2.scaled(-1.0 / (dom.b * dom.b));
    }
    case Family::Torus:
      fail(ErrorCode::UnsupportedDomainForSearch,
           "the torus has no polynomial level function");
  }
  fail(ErrorCode::InvalidParams, "bad family");
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

void default_bump_geometry(const Domain& dom, Vec& center, double& radius) {
  switch (dom.family) {
    case Family::Ball:
      center = Vec::zero(dom.n);
      radius = 0.45 * dom.r;
      break;
    case Family::Annulus:
      center = Vec{(dom.r0 + dom.r1) / 2, 0.0};
      radius = 0.4 * (dom.r1 - dom.r0);
      break;
    case Family::Ellipse:
      center = Vec{0.0, 0.0};
      radius = 0.45 * dom.b;
      break;
    case Family::Torus:
      center = Vec{dom.R, 0.0, 0.0};
      radius = 0.45 * dom.r;
      break;
  }
}

}  // namespace

VectorField make_field(const std::string& name, const Domain& dom) {
  const int n = dom.n;
  if (name == "rotation_xy") return rotation_xy(n);
  if (name == "position") return position_field(n);
  if (name == "torus_gamma") {
    if (dom.family != Family::Torus)
      fail(ErrorCode::AxisTooClose, "torus_gamma needs positive distance to the "
                                    "z-axis; " + dom.id() + " touches it");
    return torus_gamma_field(dom.r, dom.R);
  }
  if (name == "torus_normal") {
    if (dom.family != Family::Torus)
      fail(ErrorCode::InvalidParams, "torus_normal is defined on the torus");
    return torus_normal_field(dom.r, dom.R);
  }
  if (name == "bump" || name == "bump_curl") {
    Vec c;
    double rb = 0;
    default_bump_geometry(dom, c, rb);
    if (name == "bump") {
      return bump_field(dom, c, rb, Vec::unit(n, 0));
    }
    Vec d3 = (n >= 3) ? Vec::unit(n, 2) : Vec::zero(n);
    return divfree_bump_field(dom, c, rb, d3);
  }
  if (name.rfind("radial:", 0) == 0) {
    int k = std::stoi(name.substr(7));
    if (k < 0 || k > 6) fail(ErrorCode::InvalidParams, "radial:<k> needs 0 <= k <= 6");
    Polynomial norm2 = Polynomial::constant(n, 0);
    for (int i = 0; i < n; ++i)
      norm2 = norm2 + Polynomial::variable(n, i) * Polynomial::variable(n, i);
    Polynomial pw = Polynomial::constant(n, 1);
    for (int j = 0; j < k; ++j) pw = pw * norm2;
    std::vector<Polynomial> comps;
    for (int i = 0; i < n; ++i) comps.push_back(pw * Polynomial::variable(n, i));
    return polynomial_field(name, std::move(comps));
  }
  if (name.rfind("poly:", 0) == 0) {
    auto parts = split(name.substr(5), '|');
    if (int(parts.size()) > n)
      fail(ErrorCode::ConfigError, "poly: more components than the dimension");
    std::vector<Polynomial> comps;
    for (const auto& p : parts) comps.push_back(Polynomial::parse(p, n));
    while (int(comps.size()) < n) comps.push_back(Polynomial::constant(n, 0));
    return polynomial_field(name, std::move(comps));
  }
  if (name.rfind("stream:", 0) == 0) {
    if (n != 2) fail(ErrorCode::InvalidDimension, "stream fields are 2-d");
    Polynomial p = level_function(dom) * Polynomial::parse(name.substr(7), n);
    return polynomial_field(name, {p.derivative(1).scaled(-1.0), p.derivative(0)});
  }
  if (name.rfind("potential:", 0) == 0) {
    Polynomial p = level_function(dom) * Polynomial::parse(name.substr(10), n);
    std::vector<Polynomial> comps;
    for (int i = 0; i < n; ++i) comps.push_back(p.derivative(i));
    return polynomial_field(name, std::move(comps));
  }
  if (name.rfind("curlfield:", 0) == 0) {
    if (n != 3) fail(ErrorCode::InvalidDimension, "curlfield is 3-d");
    auto parts = split(name.substr(10), '|');
    if (parts.size() != 3) fail(ErrorCode::ConfigError, "curlfield needs A0|A1|A2");
    Polynomial w = level_function(dom);
    std::array<Polynomial, 3> A;
    for (int i = 0; i < 3; ++i) A[i] = w * Polynomial::parse(parts[i], n);
    // B = curl(A)
    std::vector<Polynomial> comps = {
        A[2].derivative(1) + A[1].derivative(2).scaled(-1.0),
        A[0].derivative(2) + A[2].derivative(0).scaled(-1.0),
        A[1].derivative(0) + A[0].derivative(1).scaled(-1.0)};
    auto f = polynomial_field(name, std::move(comps));
    return f;
  }
  if (name.rfind("perp_of:", 0) == 0)
    return perp_rotate(make_field(name.substr(8), dom));
  fail(ErrorCode::ConfigError, "unknown field name '" + name + "'");
}

Mat fd_jacobian(const VectorField& f, const Vec& x, double h) {
  Mat J(f.n);
  for (int j = 0; j < f.n; ++j) {
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    Vec d = f.eval(xp) - f.eval(xm);
    for (int i = 0; i < f.n; ++i) J(i, j) = d[i] / (2 * h);
  }
  return J;
}

}  // namespace vfi
