#include <doctest.h>

#include <cmath>
#include <random>

#include "vfi/calculus.hpp"
#include "vfi/oracles.hpp"

using namespace vfi;

TEST_CASE("polynomial parsing and differentiation") {
  Polynomial p = Polynomial::parse("2*x0^2*x1 - x1 + 3", 3);
  CHECK(p.eval(Vec{1, 2, 0}) == doctest::Approx(2 * 2 - 2 + 3));
  Polynomial dp = p.derivative(0);
  CHECK(dp.eval(Vec{1, 2, 0}) == doctest::Approx(8.0));
  CHECK_THROWS_AS(Polynomial::parse("x7", 3), Error);
  CHECK_THROWS_AS(Polynomial::parse("x0 x1", 3), Error);
}

TEST_CASE("curl matrix: rotation, gradient field, 2-d rotation") {
  // 3-d rotation: classical curl (0,0,2), matrix Frobenius^2 = 4.
  VectorField rot3 = rotation_xy(3);
  Mat c = curl_matrix(rot3, Vec{0.3, -0.2, 0.9});
  CHECK(c.frobenius2() == doctest::Approx(4.0));
  CHECK(c(0, 1) == doctest::Approx(-std::sqrt(2.0)));
  CHECK(c(1, 0) == doctest::Approx(std::sqrt(2.0)));

  // Gradient fields are curl-free.
  Domain ball3 = make_ball(1.0, 3);
  VectorField grad = make_field("potential:x0*x1", ball3);
  CHECK(curl_matrix(grad, Vec{0.2, 0.4, -0.1}).frobenius2() ==
        doctest::Approx(0.0).scale(1));

  VectorField rot2 = rotation_xy(2);
  Mat c2 = curl_matrix(rot2, Vec{0.5, 0.5});
  CHECK(c2.frobenius2() == doctest::Approx(4.0));
  CHECK(c2(0, 1) == doctest::Approx(-std::sqrt(2.0)));
}

TEST_CASE("curl matrix Frobenius norm matches the 3-d curl vector") {
  Domain ball3 = make_ball(1.0, 3);
  VectorField f = make_field("poly:x1^2*x2-x0|x0*x2+1|x0^3-x1*x2", ball3);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    Vec x{d(rng), d(rng), d(rng)};
    Mat J = f.jacobian(x);
    double cx = J(2, 1) - J(1, 2);
    double cy = J(0, 2) - J(2, 0);
    double cz = J(1, 0) - J(0, 1);
    double classic = cx * cx + cy * cy + cz * cz;
    CHECK(curl_matrix(f, x).frobenius2() ==
          doctest::Approx(classic).epsilon(1e-12).scale(classic + 1));
  }
}

TEST_CASE("sym grad and divergence basics") {
  VectorField pos = position_field(4);
  Vec x{0.1, 0.2, 0.3, 0.4};
  Mat s = sym_grad(pos, x);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(s(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).scale(1));
  CHECK(divergence(pos, x) == doctest::Approx(4.0));

  // Rigid rotations have vanishing symmetric gradient.
  CHECK(sym_grad(rotation_xy(3), Vec{1, 2, 3}).frobenius2() ==
        doctest::Approx(0.0).scale(1));
}

TEST_CASE("trace of the symmetric gradient equals the divergence") {
  Domain ball3 = make_ball(1.0, 3);
  VectorField f = make_field("poly:x0^2-x1|x1*x2|x2^2+x0", ball3);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    Vec x{d(rng), d(rng), d(rng)};
    CHECK(std::abs(sym_grad(f, x).trace() - divergence(f, x)) < 1e-14);
  }
}

TEST_CASE("registered field Jacobians match finite differences") {
  for (const auto& [cfg, name] : std::vector<std::pair<std::string, std::string>>{
           {"family=ball n=3 r=1", "rotation_xy"},
           {"family=ball n=3 r=1", "position"},
           {"family=ball n=3 r=1", "bump"},
           {"family=ball n=3 r=1", "bump_curl"},
           {"family=ball n=3 r=1", "radial:2"},
           {"family=ball n=3 r=1", "curlfield:0|0|x0*x1"},
           {"family=ball n=2 r=1", "stream:x0"},
           {"family=ball n=2 r=1", "perp_of:stream:x0*x1"},
           {"family=ellipse a=2 b=1", "potential:x0"},
           {"family=torus r=1 R=2", "torus_gamma"},
           {"family=torus r=1 R=2", "torus_normal"},
       }) {
    Domain dom = parse_domain(cfg);
    VectorField f = make_field(name, dom);
    for (const auto& u : chart_samples(dom, 20)) {
      Vec x = tubular_map(dom, 0.4 * reach_analytic(dom).value, u);
      if (f.is_singular_at(x)) continue;
      Mat J = f.jacobian(x);
      Mat F = fd_jacobian(f, x);
      double scale = std::sqrt(J.frobenius2()) + 1.0;
      for (int i = 0; i < f.n; ++i)
        for (int j = 0; j < f.n; ++j)
          CHECK(J(i, j) == doctest::Approx(F(i, j)).epsilon(1e-6).scale(scale));
    }
  }
}

TEST_CASE("norms: closed forms on the unit 3-ball") {
  Domain dom = make_ball(1.0, 3);
  QuadratureRule rule = make_rule(dom, 24);
  double b1 = unit_ball_volume(3);

  Norms rot = compute_norms(rotation_xy(3), dom, rule);
  CHECK(rot.l2 == doctest::Approx(8 * kPi / 15).epsilon(1e-10));
  CHECK(rot.grad == doctest::Approx(2 * b1).epsilon(1e-10));
  CHECK(rot.curl == doctest::Approx(4 * b1).epsilon(1e-10));
  CHECK(rot.sym == doctest::Approx(0.0).scale(1));
  CHECK(rot.div == doctest::Approx(0.0).scale(1));
  CHECK(rot.boundary == doctest::Approx(8 * kPi / 3).epsilon(1e-10));

  // Constant field: no gradient, mass = |domain| * |value|^2.
  VectorField cst = make_field("poly:2|0|0", dom);
  Norms nc = compute_norms(cst, dom, rule);
  CHECK(nc.grad == doctest::Approx(0.0).scale(1));
  CHECK(nc.l2 == doctest::Approx(4.0 * dom.volume()).epsilon(1e-12));
}

TEST_CASE("norms resolution gate accepts smooth fields") {
  Domain dom = make_torus(1.0, 2.0);
  CHECK_NOTHROW(compute_norms_resolved(make_field("torus_gamma", dom), dom, 24));
}

TEST_CASE("boundary curvature terms on the unit 3-ball") {
  Domain dom = make_ball(1.0, 3);
  QuadratureRule rule = make_rule(dom, 24);
  double b1 = unit_ball_volume(3);
  CHECK(boundary_shape_term(rotation_xy(3), dom, rule) ==
        doctest::Approx(-2 * b1).epsilon(1e-10));
  CHECK(boundary_mean_term(position_field(3), dom, rule) ==
        doctest::Approx(-8 * kPi).epsilon(1e-10));
  // Both terms vanish for fields vanishing on the boundary.
  VectorField bump = make_field("bump", dom);
  CHECK(boundary_shape_term(bump, dom, rule) == doctest::Approx(0.0).scale(1));
  CHECK(boundary_mean_term(bump, dom, rule) == doctest::Approx(0.0).scale(1));
}

TEST_CASE("bc residuals") {
  Domain ball = make_ball(1.0, 3);
  QuadratureRule rule = make_rule(ball, 16);
  CHECK(bc_residual(rotation_xy(3), ball, rule, Bc::Tangent) < 1e-13);
  CHECK(bc_residual(position_field(3), ball, rule, Bc::Normal) < 1e-13);
  CHECK(bc_residual(position_field(3), ball, rule, Bc::Tangent) ==
        doctest::Approx(1.0).epsilon(1e-12));

  Domain tor = make_torus(1.0, 2.0);
  QuadratureRule trule = make_rule(tor, 16);
  CHECK(bc_residual(make_field("rotation_xy", tor), tor, trule, Bc::Tangent) < 1e-13);
  CHECK(bc_residual(make_field("torus_gamma", tor), tor, trule, Bc::Tangent) < 1e-13);
  CHECK(bc_residual(make_field("torus_normal", tor), tor, trule, Bc::Normal) < 1e-12);
}

TEST_CASE("interior identities for trace-zero fields") {
  // grad^2 = curl^2 + div^2 and grad^2 = 2 sym^2 - div^2 without boundary
  // terms.
  for (const std::string& cfg :
       {std::string("family=ball n=3 r=1"), std::string("family=annulus r0=1 r1=2"),
        std::string("family=ellipse a=2 b=1")}) {
    Domain dom = parse_domain(cfg);
    QuadratureRule rule = make_rule(dom, 16);
    for (const std::string& name : {std::string("bump"), std::string("bump_curl")}) {
      Norms nm = compute_norms(make_field(name, dom), dom, rule);
      CHECK(nm.grad ==
            doctest::Approx(nm.curl + nm.div).epsilon(1e-12).scale(nm.grad));
      CHECK(nm.grad ==
            doctest::Approx(2 * nm.sym - nm.div).epsilon(1e-12).scale(nm.grad));
      CHECK(nm.boundary == 0.0);
    }
  }
}

TEST_CASE("singular fields refuse evaluation near their singular set") {
  VectorField g = torus_gamma_field(1.0, 2.0);
  CHECK_THROWS_AS(divergence(g, Vec{0.1, 0.0, 0.0}), Error);
  Domain ball = make_ball(1.0, 3);  // contains the axis
  CHECK_THROWS_AS(make_field("torus_gamma", ball), Error);
}
