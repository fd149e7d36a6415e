#include <doctest.h>

#include <cmath>

#include "delaylp/oracles.hpp"
#include "delaylp/spectral.hpp"

using namespace delaylp;

namespace {

RigidBodyParams default_params() {
  RigidBodyParams p;
  p.I1 = 0.8;
  p.I2 = 0.5;
  p.I3 = 0.4;
  p.alpha = 0.3;
  p.m = 1.5;
  return p;
}

}  // namespace

TEST_CASE("linearization matrices") {
  SUBCASE("printed entries at the worked parameter point") {
    const Linearization lin = linearize(default_params());
    // A23 = (I3 - I1) m / (I1 I2) = -0.4 * 1.5 / 0.4.
    CHECK(lin.A(1, 2) == doctest::Approx(-1.5).epsilon(1e-14));
    CHECK(lin.A(2, 1) == doctest::Approx(0.3 * 1.5 / 0.32).epsilon(1e-14));
    CHECK(lin.G(1, 1) == doctest::Approx(-0.3 * 2.25 / 0.4).epsilon(1e-14));
    CHECK(lin.G(2, 2) == doctest::Approx(-0.4 * 2.25 / 0.32).epsilon(1e-14));
    for (int i = 0; i < 3; ++i) {
      CHECK(lin.A(0, i) == 0.0);
      CHECK(lin.A(i, 0) == 0.0);
      CHECK(lin.G(0, i) == 0.0);
      CHECK(lin.G(i, 0) == 0.0);
    }
  }
  SUBCASE("spherical inertia kills both matrices") {
    RigidBodyParams p = default_params();
    p.I1 = p.I2 = p.I3 = 0.7;
    const Linearization lin = linearize(p);
    CHECK(lin.A.norm() == 0.0);
    CHECK(lin.G.norm() == 0.0);
  }
  SUBCASE("finite-difference Jacobian oracle over an inertia grid") {
    for (double I1 : {0.8, 1.0, 1.2})
      for (double I2 : {0.4, 0.5, 0.6})
        for (double I3 : {0.3, 0.45, 0.55}) {
          RigidBodyParams p = default_params();
          p.I1 = I1;
          p.I2 = I2;
          p.I3 = I3;
          const Linearization lin = linearize(p);
          const auto [A_fd, G_fd] = oracles::fd_jacobians(p, 1e-5);
          CHECK((lin.A - A_fd).cwiseAbs().maxCoeff() <= 1e-6);
          CHECK((p.alpha * lin.G - G_fd).cwiseAbs().maxCoeff() <= 1e-6);
        }
  }
  SUBCASE("degenerate equilibrium family is rejected") {
    RigidBodyParams p = default_params();
    p.m = 0.0;
    CHECK_THROWS_AS(linearize(p), std::invalid_argument);
  }
}

TEST_CASE("characteristic coefficients") {
  const RigidBodyParams p = default_params();
  SUBCASE("worked values in both variants") {
    const SpectralCoefficients det = coefficients(p);
    CHECK(det.a == doctest::Approx(1.35).epsilon(1e-14));
    const SpectralCoefficients paper =
        coefficients(p, CoefficientVariant::PublishedForm);
    CHECK(paper.a == doctest::Approx(1.6875).epsilon(1e-14));
    CHECK(det.b == paper.b);  // the variants differ only in a
    CHECK(det.c == paper.c);
    CHECK(det.b == doctest::Approx(0.4271484375).epsilon(1e-14));
    CHECK(det.c == doctest::Approx(2.109375).epsilon(1e-14));
  }
  SUBCASE("b and c positive under the hypotheses, with b = c alpha^2 m^2") {
    for (double alpha : {0.1, 0.3, 0.7})
      for (double m : {0.5, 1.5, 2.5}) {
        RigidBodyParams q = p;
        q.alpha = alpha;
        q.m = m;
        const SpectralCoefficients co = coefficients(q);
        CHECK(co.b > 0.0);
        CHECK(co.c > 0.0);
        CHECK(co.b == doctest::Approx(co.c * alpha * alpha * m * m).epsilon(1e-12));
      }
  }
  SUBCASE("symmetric top reduction I2 = I3") {
    RigidBodyParams q = p;
    q.I2 = q.I3 = 0.5;
    const SpectralCoefficients co = coefficients(q);
    // a = alpha m^2 (I1 - I2)(1/I2 + 1/I3) / I1 with both minor axes equal.
    const double expected =
        q.alpha * q.m * q.m * (q.I1 - q.I2) * (1 / q.I2 + 1 / q.I3) / q.I1;
    CHECK(co.a == doctest::Approx(expected).epsilon(1e-13));
  }
  SUBCASE("hypotheses are enforced") {
    RigidBodyParams q = p;
    q.I1 = 0.4;  // no longer the major axis
    CHECK_THROWS_AS(coefficients(q), std::invalid_argument);
  }
}

TEST_CASE("critical delay") {
  const RigidBodyParams p = default_params();
  SUBCASE("worked value") {
    // I1 [I3(I1-I2) + I2(I1-I3)] / (3 |alpha| m^2 (I1-I2)(I1-I3))
    // = 0.8 * 0.32 / (3 * 0.3 * 2.25 * 0.12) = 0.256 / 0.243.
    CHECK(critical_delay(p) == doctest::Approx(0.256 / 0.243).epsilon(1e-14));
  }
  SUBCASE("scaling laws") {
    RigidBodyParams q = p;
    q.alpha *= 2.0;
    CHECK(critical_delay(q) == doctest::Approx(critical_delay(p) / 2.0));
    q = p;
    q.m *= 2.0;
    CHECK(critical_delay(q) == doctest::Approx(critical_delay(p) / 4.0));
  }
  SUBCASE("hypothesis violations throw") {
    RigidBodyParams q = p;
    q.alpha = 0.0;
    CHECK_THROWS_AS(critical_delay(q), std::invalid_argument);
    q = p;
    q.m = 0.0;
    CHECK_THROWS_AS(critical_delay(q), std::invalid_argument);
  }
}

TEST_CASE("characteristic residual") {
  const SpectralCoefficients co = coefficients(default_params());
  SUBCASE("tau = 0 quadratic roots in closed form") {
    const auto [r1, r2] = zero_delay_roots(co);
    CHECK(std::abs(char_residual(r1, 0.0, co)) <= 1e-12);
    CHECK(std::abs(char_residual(r2, 0.0, co)) <= 1e-12);
    // Dissipation stabilizes the zero-delay equilibrium.
    CHECK(r1.real() < 0.0);
    CHECK(r2.real() < 0.0);
  }
  SUBCASE("the full cubic form vanishes at lambda = 0 (conserved direction)") {
    CHECK(std::abs(char_residual_full(Complex(0.0, 0.0), 0.37, co)) == 0.0);
    CHECK(std::abs(char_residual_full(Complex(0.0, 0.0), 0.0, co)) == 0.0);
  }
  SUBCASE("residual vanishes at the constructed Hopf point") {
    const HopfPoint hp = hopf_point(co, 1.5, 0.3);
    CHECK(std::abs(char_residual(Complex(0.0, hp.omega0), hp.tau0, co)) <= 1e-10);
    const auto [eq1, eq2] = imaginary_axis_system(hp, co);
    CHECK(std::abs(eq1) <= 1e-10);
    CHECK(std::abs(eq2) <= 1e-10);
  }
}

TEST_CASE("Hopf point construction") {
  SUBCASE("default set validates on the prescribed branch") {
    const SpectralCoefficients co = coefficients(default_params());
    const HopfPoint hp = hopf_point(co, 1.5, 0.3);
    CHECK(hp.branch == HopfBranch::CaseI);
    CHECK_FALSE(hp.from_fallback);
    CHECK(hp.omega0 == doctest::Approx(2.1371393786161423).epsilon(1e-12));
    CHECK(hp.omega0 * hp.tau0 == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
  }
  SUBCASE("second published set also lands on case (i)") {
    RigidBodyParams p = default_params();
    p.m = 1.8;
    const SpectralCoefficients co = coefficients(p);
    const HopfPoint hp = hopf_point(co, p.m, p.alpha);
    CHECK(std::abs(char_residual(Complex(0.0, hp.omega0), hp.tau0, co)) <= 1e-10);
    // |m| = 1.8 < 1/|alpha| = 10/3, so the prescribed branch is case (i)
    // even though the published analysis applied the case (ii) formula.
    CHECK(hp.branch == HopfBranch::CaseI);
    const double expected = (co.a + std::sqrt(co.a * co.a - 4 * (co.b - co.c))) / 2;
    CHECK(hp.omega0 == doctest::Approx(expected).epsilon(1e-12));
    CHECK(hp.omega0 == doctest::Approx(2.73170).epsilon(1e-5));
  }
  SUBCASE("b = c boundary gives omega0 = a on case (i)") {
    // alpha^2 m^2 = 1 collapses the discriminant to a^2; the case (ii)
    // frequency is zero and rejected, so the point falls back to case (i).
    RigidBodyParams p = default_params();
    p.alpha = 0.5;
    p.m = 2.0;
    const SpectralCoefficients co = coefficients(p);
    CHECK(co.b == doctest::Approx(co.c).epsilon(1e-13));
    const HopfPoint hp = hopf_point(co, p.m, p.alpha);
    CHECK(hp.omega0 == doctest::Approx(co.a).epsilon(1e-10));
    CHECK(hp.branch == HopfBranch::CaseI);
  }
}

TEST_CASE("transversality") {
  const RigidBodyParams p = default_params();
  const SpectralCoefficients co = coefficients(p);
  const HopfPoint hp = hopf_point(co, p.m, p.alpha);
  const TransversalityResult tr = transversality(co, hp);

  SUBCASE("worked value from implicit differentiation") {
    CHECK(tr.dlambda_dtau.real() == doctest::Approx(1.1774175887723268).epsilon(1e-10));
    CHECK(tr.dlambda_dtau.real() > 0.0);  // the crossing destabilizes
  }
  SUBCASE("published closed form is evaluated and flagged on disagreement") {
    CHECK_FALSE(tr.closed_form_consistent);
    CHECK(tr.rel_gap_closed_form > 1e-9);
  }
  SUBCASE("the closed form vanishes when a = 2b") {
    SpectralCoefficients synthetic;
    synthetic.a = 0.8;
    synthetic.b = 0.4;
    synthetic.c = 1.0;
    HopfPoint fake;
    fake.omega0 = 1.0;
    fake.tau0 = 1.0;
    CHECK(transversality_closed_form(synthetic, fake) == doctest::Approx(0.0));
  }
  SUBCASE("numerical root-tracking slope agrees to 1e-3 relative") {
    const double delta = 1e-4;
    const Complex seed(0.0, hp.omega0);
    const Complex lo = track_root(co, seed, hp.tau0, hp.tau0 - delta, 4).back().lambda;
    const Complex hi = track_root(co, seed, hp.tau0, hp.tau0 + delta, 4).back().lambda;
    const Complex slope = (hi - lo) / (2.0 * delta);
    CHECK(std::abs(slope.real() - tr.dlambda_dtau.real()) <=
          1e-3 * std::abs(tr.dlambda_dtau.real()));
    CHECK(std::abs(slope.imag() - tr.dlambda_dtau.imag()) <=
          1e-3 * std::abs(tr.dlambda_dtau));
  }
}

TEST_CASE("root tracking") {
  SUBCASE("no delay terms: roots stay at +-i sqrt(c) for every tau") {
    SpectralCoefficients co;
    co.a = 0.0;
    co.b = 0.0;
    co.c = 2.25;
    const Complex seed(0.0, 1.5);
    for (const auto& [tau, lambda] : track_root(co, seed, 0.0, 3.0, 30)) {
      CHECK(std::abs(lambda - seed) <= 1e-10);
      CHECK(std::abs(char_residual(lambda, tau, co)) <= 1e-10);
    }
  }
  SUBCASE("continuation from tau = 0 crosses the axis at the Hopf delay") {
    const SpectralCoefficients co = coefficients(default_params());
    const HopfPoint hp = hopf_point(co, 1.5, 0.3);
    const auto [r1, r2] = zero_delay_roots(co);
    const Complex seed = r1.imag() > 0 ? r1 : r2;
    const int steps = 200;
    const double tau_to = 1.2;
    const auto path = track_root(co, seed, 0.0, tau_to, steps);
    double crossing = -1.0;
    for (size_t i = 1; i < path.size(); ++i) {
      CHECK(std::abs(char_residual(path[i].lambda, path[i].tau, co)) <= 1e-10);
      if (path[i - 1].lambda.real() < 0.0 && path[i].lambda.real() >= 0.0)
        crossing = path[i].tau;
    }
    REQUIRE(crossing > 0.0);
    CHECK(std::abs(crossing - hp.tau0) <= tau_to / steps + 1e-12);
  }
  SUBCASE("invalid seeds are rejected") {
    const SpectralCoefficients co = coefficients(default_params());
    CHECK_THROWS_AS(track_root(co, Complex(10.0, 10.0), 0.0, 1.0, 10),
                    std::invalid_argument);
  }
}

TEST_CASE("asymptotic stability below the first crossing") {
  const RigidBodyParams p = default_params();
  const SpectralCoefficients co = coefficients(p);
  const HopfPoint hp = hopf_point(co, p.m, p.alpha);
  const double tau = 0.8 * std::min(critical_delay(p), hp.tau0);
  const auto [r1, r2] = zero_delay_roots(co);
  const Complex lam = track_root(co, r1, 0.0, tau, 80).back().lambda;
  CHECK(lam.real() < 0.0);
}
