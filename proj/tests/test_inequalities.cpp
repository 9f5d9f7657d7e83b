#include <doctest.h>

#include <cmath>
#include <random>

#include "vfi/checks.hpp"
#include "vfi/oracles.hpp"

using namespace vfi;

TEST_CASE("dimensional constants") {
  CHECK(constant_c1(3) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(constant_c1(2) == doctest::Approx(1 + std::pow(1 + std::sqrt(3.0), 2)));
  CHECK(constant_c2(2) == doctest::Approx(constant_c1(2)).epsilon(1e-15));
  CHECK(constant_c2(3) ==
        doctest::Approx(1 + std::pow(2 + std::sqrt(10.0), 2)).epsilon(1e-15));
  CHECK(constant_c2(3) == doctest::Approx(27.6491106407).epsilon(1e-9));
  for (int n = 2; n <= 12; ++n)
    CHECK(std::abs(constant_c1(n) - (n + 3 + 2 * std::sqrt(1.0 + n))) < 1e-12);
  CHECK_THROWS_AS(constant_c1(1), Error);
}

TEST_CASE("epsilon choice identity and amplification") {
  EpsilonChoice t3 = optimal_epsilon(Bc::Tangent, 3);
  CHECK(t3.epsilon == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(t3.amplification == doctest::Approx(9.0).epsilon(1e-15));
  CHECK(t3.amplification == doctest::Approx(constant_c1(3) - 1).epsilon(1e-15));

  EpsilonChoice n3 = optimal_epsilon(Bc::Normal, 3);
  CHECK(n3.c_n == 2.0);
  CHECK(n3.epsilon == doctest::Approx(1.0 / (2 + std::sqrt(10.0))).epsilon(1e-15));
  CHECK(n3.amplification == doctest::Approx(constant_c2(3) - 1).epsilon(1e-14));

  CHECK(optimal_epsilon(Bc::Normal, 2).epsilon ==
        doctest::Approx(optimal_epsilon(Bc::Tangent, 2).epsilon).epsilon(1e-15));

  for (int n = 2; n <= 12; ++n)
    for (Bc bc : {Bc::Tangent, Bc::Normal}) {
      EpsilonChoice e = optimal_epsilon(bc, n);
      CHECK(e.epsilon > 0);
      CHECK(e.epsilon < 1.0 / e.c_n);
      double lhs = e.c_n / (1 - e.c_n * e.epsilon) * (n + 1.0 / e.epsilon);
      CHECK(std::abs(lhs - e.amplification) <= 1e-12 * e.amplification);
      CHECK(e.amplification ==
            doctest::Approx(theorem_constant(bc, n) - 1).epsilon(1e-14));
    }
}

TEST_CASE("constant transfer under reach scaling") {
  CHECK(corollary_transfer(10, 1) == doctest::Approx(10.0));
  CHECK(corollary_transfer(10, 2) == doctest::Approx(40.0));
  CHECK(corollary_transfer(10, 0.5) == doctest::Approx(40.0));
  CHECK_THROWS_AS(corollary_transfer(10, 0), Error);
}

TEST_CASE("integral identities hold across the verification registry") {
  for (const auto& t : verification_registry()) {
    CAPTURE(t.domain_config);
    CAPTURE(t.field);
    Domain dom = parse_domain(t.domain_config);
    QuadratureRule rule = make_rule(dom, 24);
    VectorField f = make_field(t.field, dom);
    IdentityResiduals ir = identity_residuals(f, dom, rule, t.bc);
    CHECK(ir.gaffney_rel <= 1e-7);
    CHECK(ir.korn_rel <= 1e-7);
  }
}

TEST_CASE("identity residual closed-form anchor on the ball") {
  // Rotation, tangent: grad^2 = 2|B|, curl^2 = 4|B|, shape term = -2|B|.
  Domain dom = make_ball(1.0, 3);
  QuadratureRule rule = make_rule(dom, 24);
  IdentityResiduals ir = identity_residuals(rotation_xy(3), dom, rule, Bc::Tangent);
  CHECK(ir.boundary_term == doctest::Approx(-2 * unit_ball_volume(3)).epsilon(1e-10));
  CHECK(ir.gaffney_rel < 1e-12);
  // Position, normal: n = 2n - n^2 + n(n-1).
  IdentityResiduals in = identity_residuals(position_field(3), dom, rule, Bc::Normal);
  CHECK(in.boundary_term == doctest::Approx(-8 * kPi).epsilon(1e-10));
  CHECK(in.korn_rel < 1e-12);
}

TEST_CASE("identity requires the boundary condition") {
  Domain dom = make_ball(1.0, 3);
  QuadratureRule rule = make_rule(dom, 8);
  CHECK_THROWS_AS(identity_residuals(position_field(3), dom, rule, Bc::Tangent),
                  Error);
}

TEST_CASE("trace inequality over the epsilon grid") {
  for (const auto& t : verification_registry()) {
    Domain dom = parse_domain(t.domain_config);
    QuadratureRule rule = make_rule(dom, 24);
    Norms nm = compute_norms(make_field(t.field, dom), dom, rule);
    double rho = reach_analytic(dom).value;
    for (double eps : epsilon_grid()) {
      double rhs = 0;
      double slack = trace_slack(nm, dom.n, rho, eps, &rhs);
      CHECK(slack >= -1e-8 * rhs);
    }
  }
  // Scalar tests on every registry domain.
  for (const std::string& cfg :
       {std::string("family=ball n=2 r=1"), std::string("family=ball n=3 r=1"),
        std::string("family=annulus r0=1 r1=2"), std::string("family=ellipse a=2 b=1"),
        std::string("family=torus r=1 R=2")}) {
    Domain dom = parse_domain(cfg);
    QuadratureRule rule = make_rule(dom, 24);
    for (const auto& name : scalar_test_names()) {
      Norms nm = compute_norms(make_field(name, dom), dom, rule);
      double rho = reach_analytic(dom).value;
      for (double eps : epsilon_grid()) {
        double rhs = 0;
        double slack = trace_slack(nm, dom.n, rho, eps, &rhs);
        CHECK(slack >= -1e-8 * rhs);
      }
    }
  }
}

TEST_CASE("zero field has exactly zero trace slack") {
  Domain dom = make_ball(1.0, 3);
  QuadratureRule rule = make_rule(dom, 8);
  Norms nm = compute_norms(make_field("poly:0", dom), dom, rule);
  double rhs = 0;
  CHECK(trace_slack(nm, 3, 1.0, 1.0, &rhs) == 0.0);
  CHECK(rhs == 0.0);
}

TEST_CASE("trace coefficient is attained by constants on balls") {
  Domain dom = make_ball(1.0, 3);
  QuadratureRule rule = make_rule(dom, 24);
  Norms nm = compute_norms(make_field("poly:1", dom), dom, rule);
  double prev = 1e300;
  for (double eps : epsilon_grid(1e-3, 1e3, 25)) {
    double rhs = 0;
    double slack = trace_slack(nm, 3, 1.0, eps, &rhs);
    double ratio = slack / rhs;
    CHECK(ratio <= prev + 1e-14);  // monotone decrease
    prev = ratio;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("homogeneous quotients: ball rotation anchors") {
  // Korn-tangent quotient = n+3, any radius.
  for (int n : {2, 3, 4}) {
    for (double r : {0.5, 1.0, 2.0}) {
      Domain dom = make_ball(r, n);
      QuadratureRule rule = make_rule(dom, n >= 4 ? 8 : 20);
      QuotientReport rep =
          homogeneous_quotients(rotation_xy(n), dom, rule, Bc::Tangent);
      CHECK(rep.quotient_korn == doctest::Approx(n + 3.0).epsilon(1e-8));
      CHECK(rep.slack_korn >= -1e-8 * rep.constant_bound);
      CHECK(rep.slack_gaffney >= -1e-8 * rep.constant_bound);
    }
  }
}

TEST_CASE("bump fields give quotient exactly one") {
  Domain dom = make_ball(1.0, 3);
  QuadratureRule rule = make_rule(dom, 12);
  QuotientReport rep =
      homogeneous_quotients(make_field("bump", dom), dom, rule, Bc::Tangent);
  CHECK(rep.quotient_gaffney == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("theorem bounds hold across the registry") {
  for (const auto& t : verification_registry()) {
    CAPTURE(t.domain_config);
    CAPTURE(t.field);
    Domain dom = parse_domain(t.domain_config);
    QuadratureRule rule = make_rule(dom, 24);
    QuotientReport rep =
        homogeneous_quotients(make_field(t.field, dom), dom, rule, t.bc);
    CHECK(rep.slack_gaffney >= -1e-8 * rep.constant_bound);
    CHECK(rep.slack_korn >= -1e-8 * rep.constant_bound);
  }
}

TEST_CASE("zero fields are rejected") {
  Domain dom = make_ball(1.0, 3);
  QuadratureRule rule = make_rule(dom, 8);
  CHECK_THROWS_AS(
      homogeneous_quotients(make_field("poly:0", dom), dom, rule, Bc::Tangent),
      Error);
}

TEST_CASE("convex and mean-convex special cases") {
  Domain ball = make_ball(1.0, 3);
  QuadratureRule rule = make_rule(ball, 24);
  // Rotation: slack = 4|B| - 2|B| = 2|B|.
  CHECK(convexity_special_case(rotation_xy(3), ball, rule, Bc::Tangent) ==
        doctest::Approx(2 * unit_ball_volume(3)).epsilon(1e-10));
  // Position: slack = n(n-1)|B|.
  CHECK(convexity_special_case(position_field(3), ball, rule, Bc::Normal) ==
        doctest::Approx(6 * unit_ball_volume(3)).epsilon(1e-10));
  // Bump: interior identity, slack 0.
  CHECK(convexity_special_case(make_field("bump", ball), ball, rule, Bc::Tangent) ==
        doctest::Approx(0.0).scale(1));

  Domain ell = make_ellipse(2.0, 1.0);
  QuadratureRule erule = make_rule(ell, 24);
  CHECK(convexity_special_case(make_field("stream:x0", ell), ell, erule,
                               Bc::Tangent) >= -1e-10);

  Domain ann = make_annulus(1.0, 2.0);
  QuadratureRule arule = make_rule(ann, 8);
  CHECK_THROWS_AS(
      convexity_special_case(make_field("rotation_xy", ann), ann, arule, Bc::Tangent),
      Error);
  Domain tor = make_torus(1.0, 2.0);
  QuadratureRule trule = make_rule(tor, 8);
  CHECK_THROWS_AS(convexity_special_case(make_field("torus_normal", tor), tor, trule,
                                         Bc::Normal),
                  Error);
}

TEST_CASE("2-d duality: quotient invariance under perp rotation") {
  for (const std::string& cfg :
       {std::string("family=ball n=2 r=1"), std::string("family=annulus r0=1 r1=2")}) {
    Domain dom = parse_domain(cfg);
    QuadratureRule rule = make_rule(dom, 24);
    std::vector<std::string> tangent_fields = {"stream:1", "stream:x0",
                                               "stream:x0*x1", "stream:x1^2",
                                               "rotation_xy"};
    if (dom.family == Family::Annulus) tangent_fields[0] = "stream:x0^2";
    for (const auto& name : tangent_fields) {
      CAPTURE(cfg);
      CAPTURE(name);
      VectorField b = make_field(name, dom);
      VectorField bp = perp_rotate(b);
      QuotientReport rt = homogeneous_quotients(b, dom, rule, Bc::Tangent);
      QuotientReport rn = homogeneous_quotients(bp, dom, rule, Bc::Normal);
      CHECK(rt.quotient_gaffney ==
            doctest::Approx(rn.quotient_gaffney).epsilon(1e-10));
    }
  }
}

TEST_CASE("constant transfer is symmetric under rho <-> 1/rho") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.05, 20.0);
  for (int k = 0; k < 200; ++k) {
    double rho = d(rng), c = d(rng);
    CHECK(corollary_transfer(c, rho) ==
          doctest::Approx(corollary_transfer(c, 1.0 / rho)).epsilon(1e-12));
    CHECK(corollary_transfer(c, rho) >= c);
  }
}

TEST_CASE("perp rotation is a quarter turn") {
  Domain dom = make_ball(1.0, 2);
  VectorField b = make_field("stream:x0*x1", dom);
  VectorField b4 = perp_rotate(perp_rotate(b));
  for (const auto& u : chart_samples(dom, 20)) {
    Vec x = tubular_map(dom, 0.3, u);
    CHECK((b4.eval(x) + b.eval(x)).norm() < 1e-15);
  }
}

TEST_CASE("perp rotation swaps curl and div norms pointwise") {
  Domain dom = make_ball(1.0, 2);
  VectorField b = make_field("stream:x0*x1", dom);
  VectorField bp = perp_rotate(b);
  for (const auto& u : chart_samples(dom, 30)) {
    Vec x = tubular_map(dom, 0.5, u);
    double div_b = divergence(b, x);
    double curl_bp = curl_matrix(bp, x).frobenius2();
    CHECK(curl_bp == doctest::Approx(div_b * div_b).epsilon(1e-12).scale(1));
    double curl_b = curl_matrix(b, x).frobenius2();
    double div_bp = divergence(bp, x);
    CHECK(div_bp * div_bp == doctest::Approx(curl_b).epsilon(1e-12).scale(1));
  }
}
