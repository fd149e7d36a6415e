#include "delaylp/oracles.hpp"

#include <cmath>

namespace delaylp {
namespace oracles {

namespace {

/// The full rigid-body angular-velocity field on complexified states,
/// written directly from M' = M x Omega + alpha M x (M~ x Omega~).
Vec3c omega_rhs_c(const Vec3c& omega, const Vec3c& omega_delayed,
                  const RigidBodyParams& p) {
  const Vec3c I(p.I1, p.I2, p.I3);
  const Vec3c M = I.cwiseProduct(omega);
  const Vec3c Md = I.cwiseProduct(omega_delayed);
  auto cross = [](const Vec3c& a, const Vec3c& b) {
    return Vec3c(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                 a[0] * b[1] - a[1] * b[0]);
  };
  const Vec3c dM = cross(M, omega) + p.alpha * cross(M, cross(Md, omega_delayed));
  return dM.cwiseQuotient(I);
}

}  // namespace

std::pair<Mat3, Mat3> fd_jacobians(const RigidBodyParams& p, double step) {
  const Vec3 omega1 = p.equilibrium_omega();
  Mat3 J_now = Mat3::Zero(), J_delayed = Mat3::Zero();
  for (int j = 0; j < 3; ++j) {
    Vec3 d = Vec3::Zero();
    d[j] = step;
    const Vec3c plus_now = omega_rhs_c((omega1 + d).cast<Complex>(),
                                       omega1.cast<Complex>(), p);
    const Vec3c minus_now = omega_rhs_c((omega1 - d).cast<Complex>(),
                                        omega1.cast<Complex>(), p);
    const Vec3c plus_del = omega_rhs_c(omega1.cast<Complex>(),
                                       (omega1 + d).cast<Complex>(), p);
    const Vec3c minus_del = omega_rhs_c(omega1.cast<Complex>(),
                                        (omega1 - d).cast<Complex>(), p);
    for (int i = 0; i < 3; ++i) {
      J_now(i, j) = std::real(plus_now[i] - minus_now[i]) / (2 * step);
      J_delayed(i, j) = std::real(plus_del[i] - minus_del[i]) / (2 * step);
    }
  }
  return {J_now, J_delayed};
}

Vec3c nonlinearity(const Vec3c& V, const Vec3c& Vd, const RigidBodyParams& p) {
  const Linearization lin = linearize(p);
  const Vec3c omega1 = p.equilibrium_omega().cast<Complex>();
  return omega_rhs_c(omega1 + V, omega1 + Vd, p) -
         lin.A.cast<Complex>() * V - p.alpha * lin.G.cast<Complex>() * Vd;
}

Vec3c fd_quadratic(const Vec3c& V, const Vec3c& Vd, const RigidBodyParams& p,
                   double eps) {
  return (nonlinearity(eps * V, eps * Vd, p) +
          nonlinearity(-eps * V, -eps * Vd, p)) /
         (2.0 * eps * eps);
}

Vec3c fd_cubic(const Vec3c& V, const Vec3c& Vd, const RigidBodyParams& p,
               double eps) {
  return (nonlinearity(eps * V, eps * Vd, p) -
          nonlinearity(-eps * V, -eps * Vd, p)) /
         (2.0 * eps * eps * eps);
}

Complex fd_g21(const RigidBodyParams& p, const HopfPoint& hp, const EigenData& e,
               const NormalFormData& nf, double eps) {
  const Complex lambda1 = e.lambda1;
  const Complex decay = std::exp(-lambda1 * hp.tau0);
  const Vec3c v(0.0, e.v2, e.v3);

  struct Dir {
    Vec3c now, delayed;
  };
  const Dir zeta1{v, v * decay};
  const Dir zeta2{v.conjugate(), (v * decay).conjugate()};

  auto N2 = [&](const Dir& z) { return fd_quadratic(z.now, z.delayed, p, eps); };
  auto N3 = [&](const Dir& z) { return fd_cubic(z.now, z.delayed, p, eps); };
  auto add = [](const Dir& a, const Dir& b) {
    return Dir{a.now + b.now, a.delayed + b.delayed};
  };
  auto B = [&](const Dir& a, const Dir& b) {
    return ((N2(add(a, b)) - N2(a) - N2(b)) / 2.0).eval();
  };
  auto T = [&](const Dir& a, const Dir& b, const Dir& c) {
    return ((N3(add(add(a, b), c)) - N3(add(a, b)) - N3(add(b, c)) -
             N3(add(a, c)) + N3(a) + N3(b) + N3(c)) /
            6.0)
        .eval();
  };

  const Complex decay2 = std::exp(-2.0 * lambda1 * hp.tau0);
  // Same w20 / w11 inputs as the closed-form pipeline; the oracle replaces
  // the nonlinearity contractions, not the manifold solves.
  const Vec3c w20_0(nf.w20_1, 0.0, 0.0);
  const Dir W20{w20_0, w20_0 * decay2};
  const Vec3c w11(nf.w11_1, 0.0, 0.0);
  const Dir W11{w11, w11};

  const Vec3c F21 =
      2.0 * (2.0 * B(zeta1, W11) + B(zeta2, W20) + 3.0 * T(zeta1, zeta1, zeta2));
  return std::conj(e.w2_tilde) * F21[1] + std::conj(e.w3_tilde) * F21[2];
}

namespace {

using Integrand = std::function<Complex(double)>;

Complex adaptive_simpson(const Integrand& f, double a, double b, Complex fa,
                         Complex fb, Complex fm, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const Complex flm = f(lm), frm = f(rm);
  const Complex whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const Complex left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const Complex right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const Complex delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, fm, flm, tol / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, fb, frm, tol / 2, depth - 1);
}

Complex integrate_adaptive(const Integrand& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  return adaptive_simpson(f, a, b, f(a), f(b), f(m), tol, 24);
}

}  // namespace

Complex bilinear_form_quadrature(const ExponentialSegment& psi,
                                 const ExponentialSegment& phi,
                                 const RigidBodyParams& p, double tau0,
                                 double tol) {
  const Linearization lin = linearize(p);
  const Vec3c wbar = psi.coefficients.conjugate();
  const Complex mu = std::conj(psi.exponent);

  Complex point = 0.0, wGv = 0.0;
  for (int i = 0; i < 3; ++i) {
    point += wbar[i] * phi.coefficients[i];
    wGv += wbar[i] * lin.G(i, i) * phi.coefficients[i];
  }

  auto outer = [&](double theta) {
    auto inner = [&](double xi) {
      return std::exp(mu * (xi - theta)) * std::exp(phi.exponent * xi);
    };
    return integrate_adaptive(inner, 0.0, theta, tol);
  };
  const Complex K = integrate_adaptive(outer, -tau0, 0.0, tol);
  return point - p.alpha * wGv * K;
}

}  // namespace oracles
}  // namespace delaylp
