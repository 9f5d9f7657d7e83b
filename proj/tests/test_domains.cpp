#include <doctest.h>

#include <cmath>

#include "vfi/domains.hpp"

using namespace vfi;

namespace {

// Index of the first geometric chart coordinate (the annulus chart leads
// with its component flag).
int chart_offset(const Domain& dom) { return dom.family == Family::Annulus ? 1 : 0; }

// Finite-difference chart Gram determinant of the collar map at offset t,
// relative to t = 0.
double fd_metric_det_ratio(const Domain& dom, double t, const ChartPoint& u,
                           double h = 1e-6) {
  int m = dom.chart_dim();
  int off = chart_offset(dom);
  auto gram_det = [&](double tt) {
    std::array<Vec, kMaxDim - 1> cols;
    for (int j = 0; j < m; ++j) {
      ChartPoint up = u, um = u;
      up.u[off + j] += h;
      um.u[off + j] -= h;
      Vec d = tubular_map(dom, tt, up) - tubular_map(dom, tt, um);
      cols[j] = d * (1.0 / (2 * h));
    }
    // Gram matrix determinant (m <= 2 in the test families).
    if (m == 1) return cols[0].dot(cols[0]);
    double g00 = cols[0].dot(cols[0]);
    double g01 = cols[0].dot(cols[1]);
    double g11 = cols[1].dot(cols[1]);
    return g00 * g11 - g01 * g01;
  };
  return gram_det(t) / gram_det(0.0);
}

// Second fundamental form h_jk = N . d2 position / du_j du_k by central
// differences, compared against kappa * (chart metric) for umbilic charts or
// against the diagonal principal values for aligned charts.
Mat fd_second_fundamental(const Domain& dom, const ChartPoint& u, double h = 1e-5) {
  int m = dom.chart_dim();
  int off = chart_offset(dom);
  BoundaryPoint bp = boundary_point(dom, u);
  Mat out(m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      ChartPoint upp = u, upm = u, ump = u, umm = u;
      upp.u[off + j] += h; upp.u[off + k] += h;
      upm.u[off + j] += h; upm.u[off + k] -= h;
      ump.u[off + j] -= h; ump.u[off + k] += h;
      umm.u[off + j] -= h; umm.u[off + k] -= h;
      Vec dd = boundary_point(dom, upp).position - boundary_point(dom, upm).position -
               boundary_point(dom, ump).position + boundary_point(dom, umm).position;
      out(j, k) = bp.normal.dot(dd) * (1.0 / (4 * h * h));
    }
  return out;
}

Mat chart_metric(const Domain& dom, const ChartPoint& u, double h = 1e-5) {
  int m = dom.chart_dim();
  int off = chart_offset(dom);
  Mat g(m);
  std::array<Vec, kMaxDim - 1> cols;
  for (int j = 0; j < m; ++j) {
    ChartPoint up = u, um = u;
    up.u[off + j] += h;
    um.u[off + j] -= h;
    cols[j] = (boundary_point(dom, up).position - boundary_point(dom, um).position) *
              (1.0 / (2 * h));
  }
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) g(j, k) = cols[j].dot(cols[k]);
  return g;
}

}  // namespace

TEST_CASE("constructors validate family parameters") {
  CHECK_NOTHROW(make_ball(1.0, 3));
  CHECK_NOTHROW(make_torus(1.0, 2.0));
  CHECK_THROWS_AS(make_torus(2.0, 1.0), Error);
  CHECK_THROWS_AS(make_annulus(2.0, 1.0), Error);
  CHECK_THROWS_AS(make_ellipse(1.0, 2.0), Error);
  CHECK_THROWS_AS(make_ball(1.0, 1), Error);
  CHECK_THROWS_AS(make_ball(-1.0, 3), Error);
}

TEST_CASE("domain config blocks parse") {
  Domain d = parse_domain("family=torus r=1 R=2 n=3");
  CHECK(d.family == Family::Torus);
  CHECK(d.r == 1.0);
  CHECK(d.R == 2.0);
  CHECK(parse_domain("ball").n == 3);
  CHECK(parse_domain("family=ball n=2 r=1").n == 2);
  CHECK_THROWS_AS(parse_domain("family=cube r=1"), Error);
  CHECK_THROWS_AS(parse_domain("family=ball radius=1"), Error);
}

TEST_CASE("curvature values and signs per family") {
  // Sphere of radius 2: kappa = -1/2 in every direction.
  Domain ball = make_ball(2.0, 3);
  BoundaryPoint bp = boundary_point(ball, ChartPoint{1.1, 0.7});
  CHECK(bp.kappa[0] == doctest::Approx(-0.5));
  CHECK(bp.kappa[1] == doctest::Approx(-0.5));
  CHECK(bp.mean_curvature == doctest::Approx(-0.5));

  // Ellipse (2,1) at the major vertex: kappa = -a/b^2 = -2.
  Domain ell = make_ellipse(2.0, 1.0);
  CHECK(boundary_point(ell, ChartPoint{0.0}).kappa[0] == doctest::Approx(-2.0));
  // Minor vertex: kappa = -b/a^2.
  CHECK(boundary_point(ell, ChartPoint{kPi / 2}).kappa[0] ==
        doctest::Approx(-1.0 / 4.0));

  // Annulus inner circle r0=1 is concave from inside: kappa = +1.
  Domain ann = make_annulus(1.0, 2.0);
  CHECK(boundary_point(ann, ChartPoint{1.0, 0.3}).kappa[0] == doctest::Approx(1.0));
  CHECK(boundary_point(ann, ChartPoint{0.0, 0.3}).kappa[0] == doctest::Approx(-0.5));

  // Torus outer equator is convex (both curvatures negative), inner equator
  // is a saddle.
  Domain tor = make_torus(1.0, 2.0);
  BoundaryPoint outer = boundary_point(tor, ChartPoint{0.0, 0.5});
  CHECK(outer.kappa[0] == doctest::Approx(-1.0));
  CHECK(outer.kappa[1] == doctest::Approx(-1.0 / 3.0));
  BoundaryPoint inner = boundary_point(tor, ChartPoint{kPi, 0.5});
  CHECK(inner.kappa[1] == doctest::Approx(1.0));
}

TEST_CASE("normals are unit and curvatures respect the reach bound") {
  for (const Domain& dom :
       {make_ball(1.0, 3), make_ball(0.5, 2), make_annulus(1.0, 2.0),
        make_ellipse(2.0, 1.0), make_torus(1.0, 2.0), make_ball(1.5, 5)}) {
    double rho = reach_analytic(dom).value;
    for (const auto& u : chart_samples(dom, 500)) {
      BoundaryPoint bp = boundary_point(dom, u);
      CHECK(std::abs(bp.normal.norm() - 1.0) < 1e-12);
      for (int j = 0; j < bp.k; ++j)
        CHECK(std::abs(bp.kappa[j]) <= 1.0 / rho + 1e-9);
    }
  }
}

TEST_CASE("second fundamental form matches finite differences") {
  for (const Domain& dom : {make_ball(2.0, 3), make_ellipse(2.0, 1.0),
                            make_torus(1.0, 2.0), make_annulus(1.0, 2.0)}) {
    for (const auto& u : chart_samples(dom, 16)) {
      BoundaryPoint bp = boundary_point(dom, u);
      Mat h = fd_second_fundamental(dom, u);
      Mat g = chart_metric(dom, u);
      // The test charts are principal-aligned (or umbilic), so
      // h_jk ~ kappa_j g_jk.
      for (int j = 0; j < bp.k; ++j)
        for (int k = 0; k < bp.k; ++k) {
          double expect = (j == k) ? bp.kappa[j] * g(j, j) : 0.0;
          CHECK(h(j, k) == doctest::Approx(expect).epsilon(1e-4).scale(
                               std::abs(bp.kappa[j] * g(j, j)) + 1));
        }
    }
  }
}

TEST_CASE("analytic reach closed forms") {
  CHECK(reach_analytic(make_ball(3.0, 3)).value == doctest::Approx(3.0));
  CHECK(reach_analytic(make_torus(1.0, 2.0)).value == doctest::Approx(1.0));
  CHECK(reach_analytic(make_torus(1.0, 3.0)).value == doctest::Approx(1.0));
  CHECK(reach_analytic(make_torus(1.0, 1.5)).value == doctest::Approx(0.5));
  CHECK(reach_analytic(make_ellipse(2.0, 1.0)).value == doctest::Approx(0.5));
  CHECK(reach_analytic(make_annulus(1.0, 2.0)).value == doctest::Approx(0.5));
  CHECK(reach_analytic(make_annulus(0.2, 3.0)).value == doctest::Approx(0.2));
}

TEST_CASE("signed distance and nearest point") {
  Domain ball = make_ball(1.0, 3);
  CHECK(signed_distance(ball, Vec{0, 0, 0}) == doctest::Approx(-1.0));
  CHECK(signed_distance(ball, Vec{2, 0, 0}) == doctest::Approx(1.0));
  BoundaryPoint bp = nearest_point(ball, Vec{1.5, 0, 0});
  CHECK(bp.position[0] == doctest::Approx(1.0));
  CHECK(bp.position[1] == doctest::Approx(0.0).scale(1));

  Domain tor = make_torus(1.0, 2.0);
  CHECK(signed_distance(tor, Vec{2, 0, 0}) == doctest::Approx(-1.0));
  CHECK(signed_distance(tor, Vec{3.5, 0, 0}) == doctest::Approx(0.5));

  // Nearest point requires the uniqueness tube.
  CHECK_THROWS_AS(nearest_point(ball, Vec{0, 0, 0}), Error);
  CHECK_THROWS_AS(nearest_point(tor, Vec{2, 0, 0}), Error);

  Domain ell = make_ellipse(2.0, 1.0);
  CHECK(signed_distance(ell, Vec{0.0, 0.9}) == doctest::Approx(-0.1).epsilon(1e-9));
  CHECK(signed_distance(ell, Vec{2.4, 0.0}) == doctest::Approx(0.4).epsilon(1e-9));
  BoundaryPoint ebp = nearest_point(ell, Vec{2.2, 0.0});
  CHECK(ebp.position[0] == doctest::Approx(2.0));

  // |x - nearest(x)| = |signed_distance(x)| across families.
  for (const Domain& dom : {make_ball(1.0, 2), make_ellipse(2.0, 1.0),
                            make_annulus(1.0, 2.0), tor}) {
    double rho = reach_analytic(dom).value;
    for (const auto& u : chart_samples(dom, 60)) {
      for (double t : {-0.6 * rho, 0.3 * rho, 0.8 * rho}) {
        Vec x = tubular_map(dom, t, u);
        BoundaryPoint nb = nearest_point(dom, x);
        CHECK((x - nb.position).norm() ==
              doctest::Approx(std::abs(signed_distance(dom, x))).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("collar roundtrip recovers the boundary point") {
  for (const Domain& dom : {make_ball(1.0, 3), make_ball(1.0, 2),
                            make_annulus(1.0, 2.0), make_ellipse(2.0, 1.0),
                            make_torus(1.0, 2.0)}) {
    double rho = reach_analytic(dom).value;
    for (const auto& u : chart_samples(dom, 80)) {
      BoundaryPoint ref = boundary_point(dom, u);
      for (double t : {-0.9 * rho, -0.3 * rho, 0.45 * rho, 0.9 * rho}) {
        Vec x = tubular_map(dom, t, u);
        BoundaryPoint back = nearest_point(dom, x);
        CHECK((back.position - ref.position).norm() < 1e-8);
      }
    }
  }
}

TEST_CASE("collar roundtrip in higher dimensions") {
  Domain dom = make_ball(1.0, 5);
  for (const auto& u : chart_samples(dom, 40)) {
    BoundaryPoint ref = boundary_point(dom, u);
    for (double t : {-0.5, 0.5}) {
      BoundaryPoint back = nearest_point(dom, tubular_map(dom, t, u));
      CHECK((back.position - ref.position).norm() < 1e-10);
    }
  }
}

TEST_CASE("degenerate ellipse is a circle") {
  Domain circle = make_ellipse(1.0, 1.0);
  CHECK(reach_analytic(circle).value == doctest::Approx(1.0));
  CHECK(boundary_point(circle, ChartPoint{0.7}).kappa[0] == doctest::Approx(-1.0));
  CHECK(signed_distance(circle, Vec{0.25, 0.0}) == doctest::Approx(-0.75));
  BoundaryPoint bp = nearest_point(circle, Vec{0.4, 0.3});
  CHECK(bp.position[0] == doctest::Approx(0.8));
  CHECK(bp.position[1] == doctest::Approx(0.6));
}

TEST_CASE("collar chart is injective on sample grids") {
  Domain dom = make_torus(1.0, 2.0);
  auto us = chart_samples(dom, 120);
  std::vector<Vec> pts;
  std::vector<double> ts;
  double rho = reach_analytic(dom).value;
  for (std::size_t i = 0; i < us.size(); ++i) {
    double t = (-0.8 + 1.6 * (i % 9) / 8.0) * rho;
    pts.push_back(tubular_map(dom, t, us[i]));
    ts.push_back(t);
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double sep = (pts[i] - pts[j]).norm();
      double param_sep = std::abs(ts[i] - ts[j]) +
                         (boundary_point(dom, us[i]).position -
                          boundary_point(dom, us[j]).position)
                             .norm();
      if (param_sep > 1e-6) CHECK(sep > 1e-9);
    }
}

TEST_CASE("metric determinant formula: pinned values") {
  // Unit ball, outward offset 1/2 (t = -1/2): each factor (1+1/2)^2, two
  // tangent directions -> 5.0625.
  Domain ball = make_ball(1.0, 3);
  CHECK(metric_determinant(ball, -0.5, ChartPoint{1.2, 0.4}) ==
        doctest::Approx(5.0625));
  // Ellipse (2,1) at the major vertex, inward 0.4 with kappa=-2: (1-0.8)^2.
  Domain ell = make_ellipse(2.0, 1.0);
  CHECK(metric_determinant(ell, 0.4, ChartPoint{0.0}) == doctest::Approx(0.04));
  // t = 0 is the identity.
  CHECK(metric_determinant(ell, 0.0, ChartPoint{0.7}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(metric_determinant(ball, 1.5, ChartPoint{1.2, 0.4}), Error);
}

TEST_CASE("metric determinant matches finite-difference chart Jacobians") {
  for (const Domain& dom : {make_ball(1.0, 3), make_ball(1.0, 2),
                            make_annulus(1.0, 2.0), make_ellipse(2.0, 1.0),
                            make_torus(1.0, 2.0)}) {
    double rho = reach_analytic(dom).value;
    for (const auto& u : chart_samples(dom, 12)) {
      for (double t : {-0.5 * rho, 0.35 * rho, 0.7 * rho}) {
        double formula = metric_determinant(dom, t, u);
        double fd = fd_metric_det_ratio(dom, t, u);
        CHECK(formula == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("normal extension field: support, magnitude, divergence bound") {
  // 1e4 collar points per (domain, alpha): 2500 chart samples x 4 depths.
  for (const Domain& dom : {make_ball(1.0, 3), make_annulus(1.0, 2.0),
                            make_ellipse(2.0, 1.0), make_torus(1.0, 2.0)}) {
    for (double alpha : {0.25, 0.5, 0.9}) {
      ExtensionField X = extension_field(dom, alpha);
      double bound = X.div_bound();
      auto us = chart_samples(dom, 2500);
      int checked = 0;
      double worst_mag = 0, worst_div = 0;
      bool support_ok = true;
      for (const auto& u : us) {
        for (double frac : {0.1, 0.5, 0.95, 1.2}) {
          double t = frac * alpha * X.rho;
          if (t < X.rho) {
            Vec x = tubular_map(dom, t, u);
            worst_mag = std::max(worst_mag, X.eval(x).norm());
            if (frac >= 1.0 && X.eval(x).norm() != 0.0) support_ok = false;
          }
          worst_div = std::max(worst_div, std::abs(X.div_at(t, u)));
          ++checked;
        }
      }
      CHECK(checked == 10000);
      CHECK(worst_mag <= 1.0 + 1e-12);
      CHECK(worst_div <= bound * (1 + 1e-12));
      CHECK(support_ok);
      // On the boundary the extension equals the outward normal.
      for (int i = 0; i < 50; ++i) {
        BoundaryPoint bp = boundary_point(dom, us[i * 37]);
        CHECK((X.eval(bp.position) - bp.normal).norm() < 1e-9);
      }
    }
  }
}

TEST_CASE("extension divergence matches finite differences of the field") {
  for (const Domain& dom : {make_ball(1.0, 3), make_ellipse(2.0, 1.0),
                            make_torus(1.0, 2.0)}) {
    ExtensionField X = extension_field(dom, 0.5);
    double h = 1e-6;
    for (const auto& u : chart_samples(dom, 25)) {
      for (double frac : {0.2, 0.5, 0.8}) {
        double t = frac * 0.5 * X.rho;
        Vec x = tubular_map(dom, t, u);
        double div_fd = 0;
        for (int j = 0; j < dom.n; ++j) {
          Vec xp = x, xm = x;
          xp[j] += h;
          xm[j] -= h;
          div_fd += (X.eval(xp)[j] - X.eval(xm)[j]) / (2 * h);
        }
        CHECK(X.div_at(t, u) == doctest::Approx(div_fd).epsilon(5e-4).scale(1.0));
      }
    }
  }
}

TEST_CASE("ball extension divergence integrates to the sphere area") {
  // Gauss: the flux of the unit normal through the boundary equals the
  // volume integral of div X when X extends it.
  Domain dom = make_ball(1.0, 3);
  ExtensionField X = extension_field(dom, 0.5);
  // Radial closed form for the ball: integrate div over the collar shell.
  // div X(t) = 1/(alpha rho) + psi(t)(n-1)/(r-t).
  int m = 20000;
  double acc = 0;
  for (int i = 0; i < m; ++i) {
    double t = 0.5 * (i + 0.5) / m;
    double s = 1.0 - t;
    acc += X.div_at(t, ChartPoint{1.0, 1.0}) * 4 * kPi * s * s * (0.5 / m);
  }
  CHECK(acc == doctest::Approx(4 * kPi).epsilon(1e-6));
}
