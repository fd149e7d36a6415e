#include <doctest.h>

#include <cmath>
#include <random>

#include "delaylp/oracles.hpp"
#include "delaylp/reports.hpp"

using namespace delaylp;

namespace {

std::mt19937 gen(11);

double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(gen);
}

RigidBodyParams default_params() {
  RigidBodyParams p;
  p.I1 = 0.8;
  p.I2 = 0.5;
  p.I3 = 0.4;
  p.alpha = 0.3;
  p.m = 1.5;
  return p;
}

struct Setup {
  RigidBodyParams p;
  HopfPoint hp;
  EigenData eigen;
};

Setup make_setup(double m = 1.5) {
  Setup s;
  s.p = default_params();
  s.p.m = m;
  const SpectralCoefficients co = coefficients(s.p);
  s.hp = hopf_point(co, s.p.m, s.p.alpha);
  s.eigen = normalize_adjoint(s.p, eigenvectors(s.p, s.hp));
  return s;
}

Eigen::Matrix2cd char_block(const RigidBodyParams& p, Complex lambda,
                            double tau0) {
  const Linearization lin = linearize(p);
  const Complex e1 = std::exp(-lambda * tau0);
  Eigen::Matrix2cd m;
  m(0, 0) = p.alpha * lin.G(1, 1) * e1 - lambda;
  m(0, 1) = lin.A(1, 2);
  m(1, 0) = lin.A(2, 1);
  m(1, 1) = p.alpha * lin.G(2, 2) * e1 - lambda;
  return m;
}

}  // namespace

TEST_CASE("eigenvector residuals against the linear operator") {
  const Setup s = make_setup();
  const Complex lambda1 = s.eigen.lambda1;

  SUBCASE("right eigenvector solves Delta(lambda1) v = 0") {
    Eigen::Vector2cd v(s.eigen.v2, s.eigen.v3);
    const double scale = v.norm() * char_block(s.p, lambda1, s.hp.tau0).norm();
    CHECK((char_block(s.p, lambda1, s.hp.tau0) * v).norm() <= 1e-10 * scale);
    CHECK(s.eigen.printed_eigenvector_consistent);
  }
  SUBCASE("adjoint eigenvector solves Delta(lambda2)^T w = 0") {
    Eigen::Vector2cd w(s.eigen.w2, s.eigen.w3);
    const auto block = char_block(s.p, -lambda1, s.hp.tau0);
    CHECK((block.transpose() * w).norm() <= 1e-10 * w.norm() * block.norm());
    // The printed component formula carries lambda1 where lambda2 belongs
    // and fails the residual check; the direct nullvector is used.
    CHECK_FALSE(s.eigen.printed_adjoint_consistent);
    CHECK(s.eigen.printed_adjoint_residual > 1e-8);
  }
  SUBCASE("conjugate eigenvector belongs to lambda2") {
    Eigen::Vector2cd v(std::conj(s.eigen.v2), std::conj(s.eigen.v3));
    const auto block = char_block(s.p, -lambda1, s.hp.tau0);
    CHECK((block * v).norm() <= 1e-10 * v.norm() * block.norm());
  }
}

TEST_CASE("bilinear form") {
  const Setup s = make_setup();
  const ExponentialSegment psi{Vec3c(0.0, s.eigen.w2, s.eigen.w3), s.eigen.lambda1};
  const ExponentialSegment phi{Vec3c(0.0, s.eigen.v2, s.eigen.v3), s.eigen.lambda1};

  SUBCASE("alpha = 0 reduces to the boundary product") {
    RigidBodyParams q = s.p;
    q.alpha = 0.0;
    const Complex value = bilinear_form(psi, phi, q, s.hp.tau0);
    const Complex boundary = std::conj(s.eigen.w2) * s.eigen.v2 +
                             std::conj(s.eigen.w3) * s.eigen.v3;
    CHECK(std::abs(value - boundary) <= 1e-13 * std::abs(boundary));
  }
  SUBCASE("vanishing G gives the same reduction") {
    RigidBodyParams q = s.p;
    q.I1 = q.I2 = q.I3 = 0.6;  // spherical body: G = 0 identically
    const Complex value = bilinear_form(psi, phi, q, s.hp.tau0);
    const Complex boundary = std::conj(s.eigen.w2) * s.eigen.v2 +
                             std::conj(s.eigen.w3) * s.eigen.v3;
    CHECK(std::abs(value - boundary) <= 1e-13 * std::abs(boundary));
  }
  SUBCASE("closed form equals adaptive quadrature on random exponents") {
    for (int i = 0; i < 8; ++i) {
      const ExponentialSegment a{
          Vec3c(0.0, Complex(uniform(-1, 1), uniform(-1, 1)),
                Complex(uniform(-1, 1), uniform(-1, 1))),
          Complex(uniform(-0.5, 0.5), uniform(-3, 3))};
      const ExponentialSegment b{
          Vec3c(0.0, Complex(uniform(-1, 1), uniform(-1, 1)),
                Complex(uniform(-1, 1), uniform(-1, 1))),
          Complex(uniform(-0.5, 0.5), uniform(-3, 3))};
      const Complex closed = bilinear_form(a, b, s.p, s.hp.tau0);
      const Complex quad = oracles::bilinear_form_quadrature(a, b, s.p, s.hp.tau0);
      CHECK(std::abs(closed - quad) <= 1e-9 * std::max(1.0, std::abs(closed)));
    }
  }
  SUBCASE("degenerate exponent combinations hit the series limits") {
    // mu + nu ~ 0 exercises the removable singularity of the inner
    // integral; compare against quadrature.
    const ExponentialSegment a{Vec3c(0.0, 1.0, 0.5), Complex(0.0, 2.0)};
    const ExponentialSegment b{Vec3c(0.0, 0.3, -1.0), Complex(1e-9, 2.0)};
    const Complex closed = bilinear_form(a, b, s.p, s.hp.tau0);
    const Complex quad = oracles::bilinear_form_quadrature(a, b, s.p, s.hp.tau0);
    CHECK(std::abs(closed - quad) <= 1e-9 * std::max(1.0, std::abs(closed)));
  }
}

TEST_CASE("adjoint normalization") {
  const Setup s = make_setup();
  SUBCASE("defining identities hold to 1e-10") {
    const ExponentialSegment psi{Vec3c(0.0, s.eigen.w2, s.eigen.w3),
                                 s.eigen.lambda1};
    const ExponentialSegment psi_bar{
        Vec3c(0.0, std::conj(s.eigen.w2), std::conj(s.eigen.w3)),
        -s.eigen.lambda1};
    const ExponentialSegment phi{Vec3c(0.0, s.eigen.v2, s.eigen.v3),
                                 s.eigen.lambda1};
    const ExponentialSegment phi_bar{
        Vec3c(0.0, std::conj(s.eigen.v2), std::conj(s.eigen.v3)),
        -s.eigen.lambda1};
    const Complex pair_phi =
        std::conj(s.eigen.b11) * bilinear_form(psi, phi, s.p, s.hp.tau0) +
        std::conj(s.eigen.b12) * bilinear_form(psi_bar, phi, s.p, s.hp.tau0);
    const Complex pair_phibar =
        std::conj(s.eigen.b11) * bilinear_form(psi, phi_bar, s.p, s.hp.tau0) +
        std::conj(s.eigen.b12) * bilinear_form(psi_bar, phi_bar, s.p, s.hp.tau0);
    CHECK(std::abs(pair_phi - 1.0) <= 1e-10);
    CHECK(std::abs(pair_phibar) <= 1e-10);
  }
  SUBCASE("solved b11 matches the printed a11/d closed form here") {
    const double d = std::norm(s.eigen.a11) - std::norm(s.eigen.a12);
    CHECK(std::abs(s.eigen.b11 - s.eigen.a11 / d) <=
          1e-10 * std::abs(s.eigen.b11));
    CHECK(s.eigen.printed_b11_consistent);
  }
  SUBCASE("tilde components assemble from b11, b12") {
    const Complex w2t =
        s.eigen.b11 * s.eigen.w2 + s.eigen.b12 * std::conj(s.eigen.w2);
    CHECK(std::abs(w2t - s.eigen.w2_tilde) <= 1e-13 * std::abs(w2t));
  }
}

TEST_CASE("cubic coefficients and g21") {
  const Setup s = make_setup();
  const NormalFormData nf = cubic_coefficients(s.p, s.hp, s.eigen);

  SUBCASE("quadratic forcing lives entirely in the first component") {
    CHECK(nf.F20[1] == Complex(0.0, 0.0));
    CHECK(nf.F20[2] == Complex(0.0, 0.0));
    CHECK(nf.F11[1] == Complex(0.0, 0.0));
    CHECK(nf.F11[2] == Complex(0.0, 0.0));
    CHECK(nf.F02[1] == Complex(0.0, 0.0));
    CHECK(nf.F02[2] == Complex(0.0, 0.0));
    CHECK((nf.F02 - nf.F20.conjugate()).norm() == 0.0);
  }
  SUBCASE("u ubar response vanishes at the Hopf point") {
    const double scale = nf.F20.cwiseAbs().maxCoeff();
    CHECK(nf.F11.cwiseAbs().maxCoeff() <= 1e-10 * scale);
    // The same vanishing through the finite-difference oracle.
    const Complex decay = std::exp(-s.eigen.lambda1 * s.hp.tau0);
    const Vec3c v(0.0, s.eigen.v2, s.eigen.v3);
    const Vec3c f11_fd =
        oracles::fd_quadratic(v + v.conjugate(),
                              v * decay + (v * decay).conjugate(), s.p) -
        oracles::fd_quadratic(v, v * decay, s.p) -
        oracles::fd_quadratic(v.conjugate(), (v * decay).conjugate(), s.p);
    CHECK(f11_fd.cwiseAbs().maxCoeff() <= 1e-6 * scale);
  }
  SUBCASE("w20 solve matches the closed form F20^1/(2 lambda1)") {
    CHECK(std::abs(nf.w20_1 - nf.F20[0] / (2.0 * s.eigen.lambda1)) <=
          1e-10 * std::abs(nf.w20_1));
  }
  SUBCASE("w11 zero-mode selection matches the Casimir level") {
    const double expected = -(s.p.I2 * s.p.I2 * std::norm(s.eigen.v2) +
                              s.p.I3 * s.p.I3 * std::norm(s.eigen.v3)) /
                            (s.p.m * s.p.I1);
    CHECK(nf.w11_1 == doctest::Approx(expected).epsilon(1e-14));
  }
  SUBCASE("g21 agrees with the finite-difference Taylor oracle") {
    const Complex fd = oracles::fd_g21(s.p, s.hp, s.eigen, nf);
    CHECK(std::abs(fd - nf.g21) <= 1e-5 * std::abs(nf.g21));
  }
  SUBCASE("quadratic contractions agree with the oracle term by term") {
    const Complex decay = std::exp(-s.eigen.lambda1 * s.hp.tau0);
    const Vec3c v(0.0, s.eigen.v2, s.eigen.v3);
    const Vec3c f20_fd = 2.0 * oracles::fd_quadratic(v, v * decay, s.p);
    CHECK((f20_fd - nf.F20).cwiseAbs().maxCoeff() <=
          1e-6 * nf.F20.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("bifurcation quantities") {
  SUBCASE("the printed identities are exact in code") {
    NormalFormData nf;
    nf.g21 = Complex(-0.12, 0.34);
    const Complex trans(0.8, -0.2);
    const HopfQuantities q = hopf_quantities(nf, trans, 2.0);
    CHECK(q.C1 == 0.5 * nf.g21);
    CHECK(q.beta2 == 2.0 * q.C1.real());
    CHECK(q.mu2 == -q.C1.real() / trans.real());
    CHECK(q.T2 == -(q.C1.imag() + q.mu2 * trans.imag()) / 2.0);
  }
  SUBCASE("purely imaginary g21 is a degenerate Hopf") {
    NormalFormData nf;
    nf.g21 = Complex(0.0, 0.5);
    const HopfQuantities q = hopf_quantities(nf, Complex(1.0, 0.0), 2.0);
    CHECK(q.beta2 == 0.0);
    CHECK(q.mu2 == 0.0);
  }
  SUBCASE("sign identity sign(mu2) sign(Re dl/dt) = -sign(Re C1)") {
    for (int i = 0; i < 20; ++i) {
      NormalFormData nf;
      nf.g21 = Complex(uniform(-1, 1), uniform(-1, 1));
      const Complex trans(uniform(-1, 1), uniform(-1, 1));
      if (std::abs(trans.real()) < 1e-3 || std::abs(nf.g21.real()) < 1e-3)
        continue;
      const HopfQuantities q = hopf_quantities(nf, trans, 1.0);
      const auto sgn = [](double x) { return x > 0 ? 1 : -1; };
      CHECK(sgn(q.mu2) * sgn(trans.real()) == -sgn(q.C1.real()));
    }
  }
  SUBCASE("zero transversality is rejected") {
    NormalFormData nf;
    nf.g21 = Complex(1.0, 0.0);
    CHECK_THROWS_AS(hopf_quantities(nf, Complex(0.0, 1.0), 1.0),
                    std::invalid_argument);
  }
}

TEST_CASE("center manifold trajectory") {
  const Setup s = make_setup();
  const NormalFormData nf = cubic_coefficients(s.p, s.hp, s.eigen);
  std::vector<double> grid;
  for (double t = 0.0; t <= 3.0; t += 0.01) grid.push_back(t);

  SUBCASE("u0 = 0 stays at the equilibrium") {
    const auto path =
        center_manifold_trajectory(s.p, s.hp, s.eigen, nf, Complex(0.0, 0.0), grid);
    for (const auto& omega : path)
      CHECK((omega - Vec3(s.p.m / s.p.I1, 0.0, 0.0)).norm() == 0.0);
  }
  SUBCASE("negative Re g21 contracts the amplitude monotonically") {
    REQUIRE(nf.g21.real() < 0.0);
    // The radial part of the amplitude equation integrates in closed form:
    // r(t)^2 = r0^2 / (1 - Re(g21) r0^2 t).
    const double r0 = 0.05;
    double prev = r0;
    for (double t = 0.1; t <= 20.0; t += 0.1) {
      const double r =
          r0 / std::sqrt(1.0 - nf.g21.real() * r0 * r0 * t);
      CHECK(r < prev);
      prev = r;
    }
  }
  SUBCASE("radial derivative sign matches Re g21 for random small u0") {
    for (int i = 0; i < 10; ++i) {
      const Complex u0(uniform(-0.08, 0.08), uniform(-0.08, 0.08));
      if (std::abs(u0) < 1e-3) continue;
      // d|u|^2/dt = Re(g21) |u|^4 at the bifurcation point.
      const Complex du = s.eigen.lambda1 * u0 + 0.5 * nf.g21 * u0 * u0 * std::conj(u0);
      const double radial = 2.0 * std::real(std::conj(u0) * du);
      CHECK(radial * nf.g21.real() > 0.0);
    }
  }
  SUBCASE("|u0| beyond the local window is rejected") {
    CHECK_THROWS_AS(center_manifold_trajectory(s.p, s.hp, s.eigen, nf,
                                               Complex(0.2, 0.0), grid),
                    std::invalid_argument);
  }
  SUBCASE("reconstructed path preserves the momentum sphere to O(|u0|^3)") {
    double k3_small = 0.0, k3_large = 0.0;
    for (const double u0 : {0.01, 0.04}) {
      const auto path = center_manifold_trajectory(s.p, s.hp, s.eigen, nf,
                                                   Complex(u0, 0.0), grid);
      double drift = 0.0;
      for (const auto& omega : path)
        drift = std::max(drift,
                         std::abs(s.p.momentum_of(omega).norm() - s.p.m));
      (u0 == 0.01 ? k3_small : k3_large) = drift / (u0 * u0 * u0);
    }
    CHECK(k3_small <= 1.25 * k3_large);
  }
}

TEST_CASE("full pipeline on both published parameter sets") {
  for (const double m : {1.5, 1.8}) {
    const AnalysisResult r = analyze_rigid_body([&] {
      RigidBodyParams p = default_params();
      p.m = m;
      return p;
    }());
    CHECK(std::abs(char_residual(Complex(0.0, r.hp.omega0), r.hp.tau0, r.co)) <=
          1e-10);
    CHECK(r.quantities.beta2 == 2.0 * r.quantities.C1.real());
    CHECK(r.trans.dlambda_dtau.real() > 0.0);
    // Supercritical, orbitally stable in both cases.
    CHECK(r.quantities.mu2 > 0.0);
    CHECK(r.quantities.beta2 < 0.0);
  }
}
