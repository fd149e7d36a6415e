#include "delaylp/spectral.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace delaylp {

namespace {

constexpr double kResidualTol = 1e-10;

void require_hypotheses(const RigidBodyParams& p, bool need_alpha) {
  p.validate();
  if (p.m == 0.0)
    throw std::invalid_argument("spectral: m = 0 degenerates the equilibrium family");
  if (p.I1 <= p.I2 || p.I1 <= p.I3)
    throw std::invalid_argument("spectral: hypotheses I1 > I2 and I1 > I3 are required");
  if (need_alpha && p.alpha == 0.0)
    throw std::invalid_argument("spectral: alpha must be nonzero");
}

}  // namespace

Linearization linearize(const RigidBodyParams& p) {
  p.validate();
  if (p.m == 0.0)
    throw std::invalid_argument("linearize: m = 0 degenerates the equilibrium family");
  Linearization lin;
  lin.A(1, 2) = (p.I3 - p.I1) * p.m / (p.I1 * p.I2);
  lin.A(2, 1) = (p.I1 - p.I2) * p.m / (p.I1 * p.I3);
  lin.G(1, 1) = (p.I2 - p.I1) * p.m * p.m / (p.I1 * p.I2);
  lin.G(2, 2) = (p.I3 - p.I1) * p.m * p.m / (p.I1 * p.I3);
  return lin;
}

SpectralCoefficients coefficients(const RigidBodyParams& p,
                                  CoefficientVariant variant) {
  require_hypotheses(p, /*need_alpha=*/false);
  const double m2 = p.m * p.m;
  const double bracket = p.I3 * (p.I1 - p.I2) + p.I2 * (p.I1 - p.I3);
  const double denom = p.I1 * p.I2 * p.I3;

  SpectralCoefficients co;
  co.variant = variant;
  co.a = p.alpha * m2 * bracket / denom;
  if (variant == CoefficientVariant::PublishedForm) co.a /= p.I1;
  co.b = p.alpha * p.alpha * m2 * m2 * (p.I1 - p.I2) * (p.I1 - p.I3) /
         (p.I1 * denom);
  co.c = m2 * (p.I1 - p.I2) * (p.I1 - p.I3) / (p.I1 * denom);
  return co;
}

double critical_delay(const RigidBodyParams& p) {
  require_hypotheses(p, /*need_alpha=*/true);
  const double num = p.I1 * (p.I3 * (p.I1 - p.I2) + p.I2 * (p.I1 - p.I3));
  const double den =
      3.0 * std::abs(p.alpha) * p.m * p.m * (p.I1 - p.I2) * (p.I1 - p.I3);
  return num / den;
}

Complex char_residual(Complex lambda, double tau, const SpectralCoefficients& co) {
  const Complex e1 = std::exp(-tau * lambda);
  return lambda * lambda + co.a * lambda * e1 + co.b * e1 * e1 + co.c;
}

Complex char_residual_dlambda(Complex lambda, double tau,
                              const SpectralCoefficients& co) {
  const Complex e1 = std::exp(-tau * lambda);
  return 2.0 * lambda + co.a * (1.0 - tau * lambda) * e1 -
         2.0 * co.b * tau * e1 * e1;
}

Complex char_residual_full(Complex lambda, double tau,
                           const SpectralCoefficients& co) {
  return lambda * char_residual(lambda, tau, co);
}

std::pair<double, double> imaginary_axis_system(const HopfPoint& hp,
                                                const SpectralCoefficients& co) {
  const double w = hp.omega0, t = hp.tau0;
  const double eq1 =
      w * w - co.c - co.a * w * std::sin(w * t) - co.b * std::cos(2 * w * t);
  const double eq2 = co.a * w * std::cos(w * t) - co.b * std::sin(2 * w * t);
  return {eq1, eq2};
}

std::pair<Complex, Complex> zero_delay_roots(const SpectralCoefficients& co) {
  const Complex disc = Complex(co.a * co.a - 4.0 * (co.b + co.c), 0.0);
  const Complex root = std::sqrt(disc);
  return {(-co.a + root) / 2.0, (-co.a - root) / 2.0};
}

namespace {

Complex newton_root(const SpectralCoefficients& co, Complex seed, double tau,
                    int max_iter = 50, double tol = 1e-12) {
  Complex lambda = seed;
  for (int i = 0; i < max_iter; ++i) {
    const Complex r = char_residual(lambda, tau, co);
    if (std::abs(r) <= tol) return lambda;
    const Complex dr = char_residual_dlambda(lambda, tau, co);
    if (std::abs(dr) == 0.0)
      throw std::runtime_error("track_root: Newton derivative vanished");
    lambda -= r / dr;
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
      throw std::runtime_error("track_root: Newton iterate became non-finite");
  }
  throw std::runtime_error(
      "track_root: Newton exceeded 50 iterations (last iterate " +
      std::to_string(lambda.real()) + " + " + std::to_string(lambda.imag()) +
      "i)");
}

}  // namespace

std::vector<TrackedRoot> track_root(const SpectralCoefficients& co,
                                    Complex lambda_seed, double tau_from,
                                    double tau_to, int steps) {
  if (steps < 1) throw std::invalid_argument("track_root: steps must be >= 1");
  if (std::abs(char_residual(lambda_seed, tau_from, co)) > 1e-8)
    throw std::invalid_argument("track_root: seed residual exceeds 1e-8");

  std::vector<TrackedRoot> path;
  path.reserve(steps + 1);
  Complex lambda = newton_root(co, lambda_seed, tau_from);
  path.push_back({tau_from, lambda});
  for (int i = 1; i <= steps; ++i) {
    const double tau = tau_from + (tau_to - tau_from) * i / steps;
    lambda = newton_root(co, lambda, tau);
    path.push_back({tau, lambda});
  }
  return path;
}

HopfPoint find_crossing_by_tracking(const SpectralCoefficients& co,
                                    double tau_max, int steps) {
  const auto [r1, r2] = zero_delay_roots(co);
  // Follow the root with the larger imaginary part (its conjugate mirrors).
  Complex seed = r1.imag() >= r2.imag() ? r1 : r2;
  if (seed.imag() < 0.0) seed = std::conj(seed);

  const auto path = track_root(co, seed, 0.0, tau_max, steps);
  for (size_t i = 1; i < path.size(); ++i) {
    if (path[i - 1].lambda.real() < 0.0 && path[i].lambda.real() >= 0.0) {
      // Bisect on Re lambda over the bracketing interval.
      double lo = path[i - 1].tau, hi = path[i].tau;
      Complex lam_lo = path[i - 1].lambda;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const Complex lam = newton_root(co, lam_lo, mid);
        if (lam.real() < 0.0) {
          lo = mid;
          lam_lo = lam;
        } else {
          hi = mid;
        }
      }
      const Complex lam = newton_root(co, lam_lo, 0.5 * (lo + hi));
      HopfPoint hp;
      hp.omega0 = std::abs(lam.imag());
      hp.tau0 = 0.5 * (lo + hi);
      hp.branch = HopfBranch::CaseI;
      hp.from_fallback = true;
      return hp;
    }
  }
  throw NoCrossingError(
      "find_crossing_by_tracking: no imaginary-axis crossing up to tau = " +
      std::to_string(tau_max));
}

namespace {

bool residual_valid(const SpectralCoefficients& co, double omega0, double tau0) {
  if (!(omega0 > 0.0) || !(tau0 > 0.0)) return false;
  return std::abs(char_residual(Complex(0.0, omega0), tau0, co)) <= kResidualTol;
}

HopfPoint branch_point(const SpectralCoefficients& co, HopfBranch branch) {
  const double disc = co.a * co.a - 4.0 * (co.b - co.c);
  if (disc < 0.0)
    throw std::runtime_error("hopf_point: negative discriminant, no branch root");
  const double root = std::sqrt(disc);
  HopfPoint hp;
  hp.branch = branch;
  if (branch == HopfBranch::CaseI) {
    hp.omega0 = (co.a + root) / 2.0;
    hp.tau0 = M_PI / (2.0 * hp.omega0);
  } else {
    hp.omega0 = (-co.a + root) / 2.0;
    if (hp.omega0 <= 0.0)
      throw std::runtime_error("hopf_point: case (ii) frequency is not positive");
    hp.tau0 = 3.0 * M_PI / (2.0 * hp.omega0);
  }
  return hp;
}

}  // namespace

HopfPoint hopf_point(const SpectralCoefficients& co, double m, double alpha) {
  if (alpha == 0.0)
    throw std::invalid_argument("hopf_point: alpha must be nonzero");
  const HopfBranch prescribed = std::abs(m) < 1.0 / std::abs(alpha)
                                    ? HopfBranch::CaseI
                                    : HopfBranch::CaseII;

  auto try_branch = [&](HopfBranch branch) -> std::optional<HopfPoint> {
    try {
      HopfPoint hp = branch_point(co, branch);
      if (residual_valid(co, hp.omega0, hp.tau0)) return hp;
    } catch (const std::runtime_error&) {
    }
    return std::nullopt;
  };

  if (auto hp = try_branch(prescribed)) return *hp;
  const HopfBranch other = prescribed == HopfBranch::CaseI ? HopfBranch::CaseII
                                                           : HopfBranch::CaseI;
  if (auto hp = try_branch(other)) {
    hp->from_fallback = true;
    return *hp;
  }
  // Neither printed branch validates; fall back to numerical tracking.
  const double horizon = 20.0 * std::max(1.0, 1.0 / std::max(1e-6, co.a));
  return find_crossing_by_tracking(co, horizon);
}

double transversality_closed_form(const SpectralCoefficients& co,
                                  const HopfPoint& hp) {
  const double w = hp.omega0, t = hp.tau0, a = co.a, b = co.b;
  const double num = w * (w + a) * (a - 2.0 * b);
  const double den = t * (a * w - 2.0 * b) * (a * w - 2.0 * b) + (w + a) * (w + a);
  return num / den;
}

TransversalityResult transversality(const SpectralCoefficients& co,
                                    const HopfPoint& hp) {
  const Complex lambda(0.0, hp.omega0);
  const double tau = hp.tau0;
  const Complex e1 = std::exp(-tau * lambda);
  const Complex num =
      co.a * lambda * lambda * e1 + 2.0 * co.b * lambda * e1 * e1;
  const Complex den = char_residual_dlambda(lambda, tau, co);
  if (std::abs(den) < 1e-14)
    throw std::runtime_error("transversality: degenerate crossing (denominator ~ 0)");

  TransversalityResult out;
  out.dlambda_dtau = num / den;
  out.re_closed_form = transversality_closed_form(co, hp);
  const double scale = std::max(std::abs(out.dlambda_dtau.real()), 1e-300);
  out.rel_gap_closed_form =
      std::abs(out.dlambda_dtau.real() - out.re_closed_form) / scale;
  out.closed_form_consistent = out.rel_gap_closed_form <= 1e-9;
  return out;
}

}  // namespace delaylp
