#include "vfi/domains.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vfi {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::InvalidAspect: return "InvalidAspect";
    case ErrorCode::OutOfChart: return "OutOfChart";
    case ErrorCode::OutOfTube: return "OutOfTube";
    case ErrorCode::NotUnique: return "NotUnique";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::QuadratureUnderResolved: return "QuadratureUnderResolved";
    case ErrorCode::BCViolated: return "BCViolated";
    case ErrorCode::ZeroField: return "ZeroField";
    case ErrorCode::DomainNotConvex: return "DomainNotConvex";
    case ErrorCode::AxisTooClose: return "AxisTooClose";
    case ErrorCode::SupportTouchesBoundary: return "SupportTouchesBoundary";
    case ErrorCode::UnsupportedDomainForSearch: return "UnsupportedDomainForSearch";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::EigenNoConvergence: return "EigenNoConvergence";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Error";
}

const char* family_name(Family f) {
  switch (f) {
    case Family::Ball: return "ball";
    case Family::Annulus: return "annulus";
    case Family::Ellipse: return "ellipse";
    case Family::Torus: return "torus";
  }
  return "?";
}

std::string Domain::id() const {
  std::ostringstream os;
  os << family_name(family) << "(";
  switch (family) {
    case Family::Ball: os << "r=" << fmt12(r) << ";n=" << n; break;
    case Family::Annulus: os << "r0=" << fmt12(r0) << ";r1=" << fmt12(r1); break;
    case Family::Ellipse: os << "a=" << fmt12(a) << ";b=" << fmt12(b); break;
    case Family::Torus: os << "r=" << fmt12(r) << ";R=" << fmt12(R); break;
  }
  os << ")";
  return os.str();
}

double Domain::diameter() const {
  switch (family) {
    case Family::Ball: return 2 * r;
    case Family::Annulus: return 2 * r1;
    case Family::Ellipse: return 2 * a;
    case Family::Torus: return 2 * (R + r);
  }
  return 0;
}

double Domain::volume() const {
  switch (family) {
    case Family::Ball:
      return std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0 + 1.0) * std::pow(r, n);
    case Family::Annulus: return kPi * (r1 * r1 - r0 * r0);
    case Family::Ellipse: return kPi * a * b;
    case Family::Torus: return 2 * kPi * kPi * R * r * r;
  }
  return 0;
}

std::optional<double> Domain::boundary_area() const {
  switch (family) {
    case Family::Ball:
      return 2 * std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0) * std::pow(r, n - 1);
    case Family::Annulus: return 2 * kPi * (r0 + r1);
    case Family::Torus: return 4 * kPi * kPi * R * r;
    case Family::Ellipse: return std::nullopt;  // complete elliptic integral
  }
  return std::nullopt;
}

Domain make_ball(double r, int n) {
  if (n < 2 || n > kMaxDim) fail(ErrorCode::InvalidDimension, "ball needs 2 <= n <= 8");
  if (!(r > 0)) fail(ErrorCode::InvalidParams, "ball needs r > 0");
  Domain d;
  d.family = Family::Ball;
  d.n = n;
  d.r = r;
  return d;
}

Domain make_annulus(double r0, double r1) {
  if (!(r0 > 0) || !(r1 > r0)) fail(ErrorCode::InvalidParams, "annulus needs 0 < r0 < r1");
  Domain d;
  d.family = Family::Annulus;
  d.n = 2;
  d.r0 = r0;
  d.r1 = r1;
  return d;
}

Domain make_ellipse(double a, double b) {
  if (!(b > 0) || !(a >= b)) fail(ErrorCode::InvalidParams, "ellipse needs a >= b > 0");
  Domain d;
  d.family = Family::Ellipse;
  d.n = 2;
  d.a = a;
  d.b = b;
  return d;
}

Domain make_torus(double r, double R) {
  if (!(r > 0) || !(R > r))
    fail(ErrorCode::InvalidParams, "torus needs 0 < r < R (aspect ratio R/r > 1)");
  Domain d;
  d.family = Family::Torus;
  d.n = 3;
  d.r = r;
  d.R = R;
  return d;
}

Domain parse_domain(const std::string& config) {
  std::istringstream is(config);
  std::string tok, family;
  double r = 0, R = 0, r0 = 0, r1 = 0, a = 0, b = 0;
  bool has_r = false, has_R = false, has_r0 = false, has_r1 = false, has_a = false,
       has_b = false;
  int n = 0;
  while (is >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) {
      if (family.empty()) { family = tok; continue; }
      fail(ErrorCode::ConfigError, "expected key=value in domain config: '" + tok + "'");
    }
    std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    double x = 0;
    try {
      if (key != "family") x = std::stod(val);
    } catch (...) {
      fail(ErrorCode::ConfigError, "bad numeric value '" + val + "' for key " + key);
    }
    if (key == "family") family = val;
    else if (key == "n") n = int(x);
    else if (key == "r") { r = x; has_r = true; }
    else if (key == "R") { R = x; has_R = true; }
    else if (key == "r0") { r0 = x; has_r0 = true; }
    else if (key == "r1") { r1 = x; has_r1 = true; }
    else if (key == "a") { a = x; has_a = true; }
    else if (key == "b") { b = x; has_b = true; }
    else fail(ErrorCode::ConfigError, "unknown domain key '" + key + "'");
  }
  std::transform(family.begin(), family.end(), family.begin(), ::tolower);
  if (family == "ball" || family == "disk")
    return make_ball(has_r ? r : 1.0, n ? n : (family == "disk" ? 2 : 3));
  if (family == "annulus") return make_annulus(has_r0 ? r0 : 1.0, has_r1 ? r1 : 2.0);
  if (family == "ellipse" || family == "ellipse2d")
    return make_ellipse(has_a ? a : 2.0, has_b ? b : 1.0);
  if (family == "torus" || family == "solidtorus3d")
    return make_torus(has_r ? r : 1.0, has_R ? R : 2.0);
  fail(ErrorCode::ConfigError, "unknown family '" + family + "'");
}

// ---------------------------------------------------------------------------
// Charts
// ---------------------------------------------------------------------------

namespace {

// Orthonormal tangent frame completing a unit normal (used on umbilic
// spheres where any orthonormal frame is principal).
void tangent_frame(const Vec& normal, int n, std::array<Vec, kMaxDim - 1>& out) {
  // Gram-Schmidt of the coordinate axes against the normal, skipping the
  // axis most aligned with it.
  int skip = 0;
  double best = -1;
  for (int i = 0; i < n; ++i)
    if (std::abs(normal[i]) > best) { best = std::abs(normal[i]); skip = i; }
  int k = 0;
  std::array<Vec, kMaxDim> basis;
  basis[k++] = normal;
  for (int i = 0; i < n; ++i) {
    if (i == skip) continue;
    Vec v = Vec::unit(n, i);
    for (int j = 0; j < k; ++j) v -= basis[j] * basis[j].dot(v);
    double len = v.norm();
    v *= 1.0 / len;
    basis[k++] = v;
  }
  for (int j = 0; j + 1 < n; ++j) out[j] = basis[j + 1];
}

BoundaryPoint ball_boundary_point(const Domain& dom, const ChartPoint& u) {
  const int n = dom.n;
  BoundaryPoint bp;
  bp.chart = u;
  bp.k = n - 1;
  Vec dir(n);
  if (n == 2) {
    dir[0] = std::cos(u.u[0]);
    dir[1] = std::sin(u.u[0]);
  } else {
    // Hyperspherical: x1 = cos t1, x2 = sin t1 cos t2, ...,
    // x_{n-1} = sin t1 ... cos phi, x_n = sin t1 ... sin phi.
    double prod = 1.0;
    for (int i = 0; i < n - 2; ++i) {
      double th = u.u[i];
      if (th < 0 || th > kPi) fail(ErrorCode::OutOfChart, "theta outside [0,pi]");
      dir[i] = prod * std::cos(th);
      prod *= std::sin(th);
    }
    double phi = u.u[n - 2];
    dir[n - 2] = prod * std::cos(phi);
    dir[n - 1] = prod * std::sin(phi);
  }
  bp.position = dir * dom.r;
  bp.normal = dir;
  for (int i = 0; i < n - 1; ++i) bp.kappa[i] = -1.0 / dom.r;
  bp.mean_curvature = -1.0 / dom.r;
  tangent_frame(bp.normal, n, bp.principal_dir);
  return bp;
}

BoundaryPoint annulus_boundary_point(const Domain& dom, const ChartPoint& u) {
  int c = int(std::lround(u.u[0]));
  if (c != 0 && c != 1) fail(ErrorCode::OutOfChart, "annulus component must be 0 or 1");
  double th = u.u[1];
  double rc = (c == 0) ? dom.r1 : dom.r0;
  BoundaryPoint bp;
  bp.chart = u;
  bp.k = 1;
  Vec dir{std::cos(th), std::sin(th)};
  bp.position = dir * rc;
  // Outward normal of the domain: radially out on the outer circle,
  // radially in on the inner circle (towards the hole).
  bp.normal = (c == 0) ? dir : dir * -1.0;
  bp.kappa[0] = (c == 0) ? -1.0 / dom.r1 : +1.0 / dom.r0;
  bp.mean_curvature = bp.kappa[0];
  bp.principal_dir[0] = Vec{-std::sin(th), std::cos(th)};
  return bp;
}

BoundaryPoint ellipse_boundary_point(const Domain& dom, const ChartPoint& u) {
  double t = u.u[0];
  double ct = std::cos(t), st = std::sin(t);
  BoundaryPoint bp;
  bp.chart = u;
  bp.k = 1;
  bp.position = Vec{dom.a * ct, dom.b * st};
  double den = std::hypot(dom.b * ct, dom.a * st);
  bp.normal = Vec{dom.b * ct / den, dom.a * st / den};
  bp.kappa[0] = -dom.a * dom.b / (den * den * den);
  bp.mean_curvature = bp.kappa[0];
  double tl = std::hypot(dom.a * st, dom.b * ct);
  bp.principal_dir[0] = Vec{-dom.a * st / tl, dom.b * ct / tl};
  return bp;
}

BoundaryPoint torus_boundary_point(const Domain& dom, const ChartPoint& u) {
  double psi = u.u[0], phi = u.u[1];
  double cps = std::cos(psi), sps = std::sin(psi);
  double cph = std::cos(phi), sph = std::sin(phi);
  double ring = dom.R + dom.r * cps;
  BoundaryPoint bp;
  bp.chart = u;
  bp.k = 2;
  bp.position = Vec{ring * cph, ring * sph, dom.r * sps};
  bp.normal = Vec{cps * cph, cps * sph, sps};
  // Meridian direction and azimuthal direction are principal.
  bp.kappa[0] = -1.0 / dom.r;
  bp.principal_dir[0] = Vec{-sps * cph, -sps * sph, cps};
  bp.kappa[1] = -cps / ring;
  bp.principal_dir[1] = Vec{-sph, cph, 0.0};
  bp.mean_curvature = (bp.kappa[0] + bp.kappa[1]) / 2.0;
  return bp;
}

}  // namespace

BoundaryPoint boundary_point(const Domain& dom, const ChartPoint& u) {
  if (u.m != dom.chart_dim() && !(dom.family == Family::Annulus && u.m == 2))
    fail(ErrorCode::OutOfChart, "chart coordinate count mismatch");
  switch (dom.family) {
    case Family::Ball: return ball_boundary_point(dom, u);
    case Family::Annulus: return annulus_boundary_point(dom, u);
    case Family::Ellipse: return ellipse_boundary_point(dom, u);
    case Family::Torus: return torus_boundary_point(dom, u);
  }
  fail(ErrorCode::InvalidParams, "bad family");
}

ReachEstimate reach_analytic(const Domain& dom) {
  double rho = 0;
  switch (dom.family) {
    case Family::Ball: rho = dom.r; break;
    // Inner-circle medial point at the origin vs. mid-gap bottleneck.
    case Family::Annulus: rho = std::min(dom.r0, (dom.r1 - dom.r0) / 2); break;
    // Minimal radius of curvature, attained at the major vertices.
    case Family::Ellipse: rho = dom.b * dom.b / dom.a; break;
    case Family::Torus: rho = std::min(dom.r, dom.R - dom.r); break;
  }
  return {rho, ReachMethod::Analytic, 0.0};
}

// ---------------------------------------------------------------------------
// Signed distance / nearest point
// ---------------------------------------------------------------------------

namespace {

// Nearest point on the ellipse (e0 >= e1) to a first-quadrant query,
// robust root bisection on F(t) = (e0 y0/(t+e0^2))^2 + (e1 y1/(t+e1^2))^2 - 1.
void ellipse_nearest_quadrant(double e0, double e1, double y0, double y1,
                              double& x0, double& x1) {
  const double eps = 1e-17;
  if (y1 > eps) {
    if (y0 > eps) {
      double t_lo = -e1 * e1 + e1 * y1;
      double t_hi = -e1 * e1 + std::hypot(e0 * y0, e1 * y1);
      for (int it = 0; it < 200 && t_hi - t_lo > 1e-16 * std::max(1.0, std::abs(t_hi));
           ++it) {
        double t = 0.5 * (t_lo + t_hi);
        double f0 = e0 * y0 / (t + e0 * e0);
        double f1 = e1 * y1 / (t + e1 * e1);
        if (f0 * f0 + f1 * f1 > 1.0) t_lo = t; else t_hi = t;
      }
      double t = 0.5 * (t_lo + t_hi);
      x0 = e0 * e0 * y0 / (t + e0 * e0);
      x1 = e1 * e1 * y1 / (t + e1 * e1);
    } else {
      x0 = 0.0;
      x1 = e1;
    }
  } else {
    double denom = e0 * e0 - e1 * e1;
    if (denom > 0 && y0 < denom / e0) {
      // Interior of the evolute on the major axis: the nearest points are
      // the symmetric off-axis pair; return the +x1 one.
      double xe = e0 * e0 * y0 / denom;
      x0 = xe;
      double s = 1.0 - (xe / e0) * (xe / e0);
      x1 = e1 * std::sqrt(std::max(0.0, s));
    } else {
      x0 = e0;
      x1 = 0.0;
    }
  }
}

void torus_decompose(const Domain& dom, const Vec& x, double& rc, double& phi,
                     double& dmer) {
  rc = std::hypot(x[0], x[1]);
  phi = std::atan2(x[1], x[0]);
  dmer = std::hypot(rc - dom.R, x[2]);
}

}  // namespace

double signed_distance(const Domain& dom, const Vec& x) {
  switch (dom.family) {
    case Family::Ball: {
      double s = 0;
      for (int i = 0; i < dom.n; ++i) s += x[i] * x[i];
      return std::sqrt(s) - dom.r;
    }
    case Family::Annulus: {
      double s = std::hypot(x[0], x[1]);
      return std::max(dom.r0 - s, s - dom.r1);
    }
    case Family::Ellipse: {
      double x0, x1;
      ellipse_nearest_quadrant(dom.a, dom.b, std::abs(x[0]), std::abs(x[1]), x0, x1);
      double d = std::hypot(std::abs(x[0]) - x0, std::abs(x[1]) - x1);
      double q = (x[0] / dom.a) * (x[0] / dom.a) + (x[1] / dom.b) * (x[1] / dom.b);
      return q < 1.0 ? -d : d;
    }
    case Family::Torus: {
      double rc, phi, dmer;
      torus_decompose(dom, x, rc, phi, dmer);
      return dmer - dom.r;
    }
  }
  return 0;
}

BoundaryPoint nearest_point(const Domain& dom, const Vec& x) {
  double rho = reach_analytic(dom).value;
  double bdist = std::abs(signed_distance(dom, x));
  if (!(bdist < rho))
    fail(ErrorCode::NotUnique, "point outside the uniqueness tube of " + dom.id());
  switch (dom.family) {
    case Family::Ball: {
      const int n = dom.n;
      double len = 0;
      for (int i = 0; i < n; ++i) len += x[i] * x[i];
      len = std::sqrt(len);
      if (len == 0) fail(ErrorCode::NotUnique, "center of the ball");
      ChartPoint u;
      u.m = n - 1;
      if (n == 2) {
        u.u[0] = std::atan2(x[1], x[0]);
      } else {
        // Invert the hyperspherical chart via suffix norms.
        double tail = std::hypot(x[n - 2], x[n - 1]);
        for (int i = n - 3; i >= 0; --i) {
          u.u[i] = std::atan2(tail, x[i]);
          tail = std::hypot(tail, x[i]);
        }
        // note: loop above fills theta_1..theta_{n-2} from suffix norms
        u.u[n - 2] = std::atan2(x[n - 1], x[n - 2]);
      }
      return boundary_point(dom, u);
    }
    case Family::Annulus: {
      double s = std::hypot(x[0], x[1]);
      if (s == 0) fail(ErrorCode::NotUnique, "annulus center");
      double th = std::atan2(x[1], x[0]);
      double c = (std::abs(s - dom.r0) < std::abs(s - dom.r1)) ? 1.0 : 0.0;
      return boundary_point(dom, ChartPoint{c, th});
    }
    case Family::Ellipse: {
      double x0, x1;
      ellipse_nearest_quadrant(dom.a, dom.b, std::abs(x[0]), std::abs(x[1]), x0, x1);
      double px = std::copysign(x0, x[0] == 0 ? 1.0 : x[0]);
      double py = std::copysign(x1, x[1] == 0 ? 1.0 : x[1]);
      double t = std::atan2(py / dom.b, px / dom.a);
      return boundary_point(dom, ChartPoint{t});
    }
    case Family::Torus: {
      double rc, phi, dmer;
      torus_decompose(dom, x, rc, phi, dmer);
      if (rc == 0) fail(ErrorCode::NotUnique, "on the symmetry axis");
      if (dmer == 0) fail(ErrorCode::NotUnique, "on the center circle");
      double psi = std::atan2(x[2], rc - dom.R);
      return boundary_point(dom, ChartPoint{psi, phi});
    }
  }
  fail(ErrorCode::InvalidParams, "bad family");
}

// ---------------------------------------------------------------------------
// Collar chart
// ---------------------------------------------------------------------------

Vec tubular_map(const Domain& dom, double t, const ChartPoint& u) {
  double rho = reach_analytic(dom).value;
  if (!(std::abs(t) < rho)) fail(ErrorCode::OutOfTube, "|t| must be < reach");
  BoundaryPoint bp = boundary_point(dom, u);
  return bp.position - bp.normal * t;  // +t inward
}

double metric_determinant(const Domain& dom, double t, const ChartPoint& u) {
  double rho = reach_analytic(dom).value;
  if (!(std::abs(t) < rho)) fail(ErrorCode::OutOfTube, "|t| must be < reach");
  BoundaryPoint bp = boundary_point(dom, u);
  double det = 1.0;
  for (int j = 0; j < bp.k; ++j) {
    double f = 1.0 + t * bp.kappa[j];
    det *= f * f;
  }
  return det;
}

ExtensionField extension_field(const Domain& dom, double alpha) {
  if (!(alpha > 0 && alpha < 1)) fail(ErrorCode::InvalidParams, "alpha in (0,1)");
  return ExtensionField{dom, alpha, reach_analytic(dom).value};
}

double ExtensionField::psi(double t) const {
  return std::max(0.0, 1.0 - std::abs(t) / (alpha * rho));
}

Vec ExtensionField::eval(const Vec& x) const {
  double t = -signed_distance(dom, x);  // inward depth
  if (std::abs(t) >= alpha * rho) return Vec::zero(dom.n);
  BoundaryPoint bp = nearest_point(dom, x);
  return bp.normal * psi(t);
}

double ExtensionField::div_at(double t, const ChartPoint& u) const {
  if (t <= 0 || t >= alpha * rho) return 0.0;
  BoundaryPoint bp = boundary_point(dom, u);
  double ksum = 0;
  for (int j = 0; j < bp.k; ++j) ksum += bp.kappa[j] / (1.0 + t * bp.kappa[j]);
  double dpsi = -1.0 / (alpha * rho);
  return -dpsi - psi(t) * ksum;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

std::vector<BoundarySample> sample_boundary(const Domain& dom, double h) {
  std::vector<BoundarySample> out;
  auto push = [&](const ChartPoint& u) {
    BoundaryPoint bp = boundary_point(dom, u);
    out.push_back({bp.position, bp.normal});
  };
  switch (dom.family) {
    case Family::Ball: {
      if (dom.n == 2) {
        int m = std::max(8, int(std::ceil(2 * kPi * dom.r / h)));
        for (int i = 0; i < m; ++i) push(ChartPoint{2 * kPi * (i + 0.5) / m});
      } else if (dom.n == 3) {
        int mt = std::max(4, int(std::ceil(kPi * dom.r / h)));
        for (int i = 0; i < mt; ++i) {
          double th = kPi * (i + 0.5) / mt;
          int mp = std::max(4, int(std::ceil(2 * kPi * dom.r * std::sin(th) / h)));
          for (int j = 0; j < mp; ++j)
            push(ChartPoint{th, 2 * kPi * (j + 0.5) / mp});
        }
      } else {
        fail(ErrorCode::InvalidDimension, "boundary sampling supports n <= 3");
      }
      break;
    }
    case Family::Annulus: {
      for (int c = 0; c <= 1; ++c) {
        double rc = (c == 0) ? dom.r1 : dom.r0;
        int m = std::max(8, int(std::ceil(2 * kPi * rc / h)));
        for (int i = 0; i < m; ++i)
          push(ChartPoint{double(c), 2 * kPi * (i + 0.5) / m});
      }
      break;
    }
    case Family::Ellipse: {
      int m = std::max(8, int(std::ceil(2 * kPi * dom.a / h)));
      for (int i = 0; i < m; ++i) push(ChartPoint{2 * kPi * (i + 0.5) / m});
      break;
    }
    case Family::Torus: {
      int mpsi = std::max(8, int(std::ceil(2 * kPi * dom.r / h)));
      for (int i = 0; i < mpsi; ++i) {
        double psi = 2 * kPi * (i + 0.5) / mpsi;
        double ring = dom.R + dom.r * std::cos(psi);
        int mphi = std::max(8, int(std::ceil(2 * kPi * ring / h)));
        for (int j = 0; j < mphi; ++j)
          push(ChartPoint{psi, 2 * kPi * (j + 0.5) / mphi});
      }
      break;
    }
  }
  return out;
}

std::vector<ChartPoint> chart_samples(const Domain& dom, int count) {
  // Additive golden-ratio lattice; deterministic and seam-free.
  std::vector<ChartPoint> out;
  out.reserve(count);
  const double g1 = 0.6180339887498949;
  const double g2 = 0.7548776662466927;
  double s1 = 0.37, s2 = 0.61;
  for (int i = 0; i < count; ++i) {
    s1 += g1; if (s1 >= 1) s1 -= 1;
    s2 += g2; if (s2 >= 1) s2 -= 1;
    ChartPoint u;
    switch (dom.family) {
      case Family::Ball:
        u.m = dom.chart_dim();
        if (dom.n == 2) {
          u.u[0] = 2 * kPi * s1;
        } else {
          // theta from the s1 value mapped into (0,pi), slightly inset to
          // stay clear of the poles; extra thetas reuse scrambled lattices.
          double frac = s1;
          for (int k = 0; k < dom.n - 2; ++k) {
            u.u[k] = kPi * (0.02 + 0.96 * frac);
            frac = frac * g2 + g1; frac -= std::floor(frac);
          }
          u.u[dom.n - 2] = 2 * kPi * s2;
        }
        break;
      case Family::Annulus:
        u = ChartPoint{double(i % 2), 2 * kPi * s1};
        break;
      case Family::Ellipse:
        u = ChartPoint{2 * kPi * s1};
        break;
      case Family::Torus:
        u = ChartPoint{2 * kPi * s1, 2 * kPi * s2};
        break;
    }
    out.push_back(u);
  }
  return out;
}

}  // namespace vfi
