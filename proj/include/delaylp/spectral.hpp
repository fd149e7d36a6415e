#pragma once

// Linear stability of the rigid-body equilibrium Omega_1 = (m/I1, 0, 0):
// linearization, reduced characteristic equation, critical delay, Hopf
// point and transversality, with a Newton root-tracking oracle.

#include <complex>
#include <vector>

#include "delaylp/models.hpp"

namespace delaylp {

using Complex = std::complex<double>;
using Mat3 = Eigen::Matrix3d;

/// d(dOmega)/dt = A dOmega + alpha G dOmega~ at Omega_1. First row and
/// column of both matrices vanish; the nontrivial dynamics lives in the
/// (2,3) block.
struct Linearization {
  Mat3 A = Mat3::Zero();
  Mat3 G = Mat3::Zero();
};

Linearization linearize(const RigidBodyParams& p);

enum class CoefficientVariant { DeterminantDerived, PublishedForm };

/// Coefficients of the reduced characteristic equation
///   lambda^2 + a lambda e^{-tau lambda} + b e^{-2 tau lambda} + c = 0.
/// The determinant-derived variant computes a from
/// det(lambda E - A - alpha G e^{-tau lambda}) of the lower 2x2 block and
/// is the default; the alternative variant keeps the published extra 1/I1
/// in a for comparison. Both agree on b and c.
struct SpectralCoefficients {
  double a = 0.0, b = 0.0, c = 0.0;
  CoefficientVariant variant = CoefficientVariant::DeterminantDerived;
};

SpectralCoefficients coefficients(
    const RigidBodyParams& p,
    CoefficientVariant variant = CoefficientVariant::DeterminantDerived);

/// tau_c = I1 [I3 (I1-I2) + I2 (I1-I3)] / (3 |alpha| m^2 (I1-I2)(I1-I3)).
/// Requires I1 > I2, I1 > I3, alpha != 0, m != 0.
double critical_delay(const RigidBodyParams& p);

/// Residual of the reduced characteristic equation at (lambda, tau).
Complex char_residual(Complex lambda, double tau, const SpectralCoefficients& co);

/// d/dlambda of char_residual (used by Newton and transversality).
Complex char_residual_dlambda(Complex lambda, double tau,
                              const SpectralCoefficients& co);

/// The full cubic form carries an extra factor lambda (the conserved
/// direction tangent to the Casimir level set).
Complex char_residual_full(Complex lambda, double tau,
                           const SpectralCoefficients& co);

enum class HopfBranch { CaseI, CaseII };

/// First root pair +-i omega0 on the imaginary axis at tau0. Branch
/// formulas: case (i) omega0 = (a + sqrt(a^2 - 4(b-c)))/2, tau0 =
/// pi/(2 omega0); case (ii) omega0 = (-a + sqrt(a^2 - 4(b-c)))/2, tau0 =
/// 3 pi/(2 omega0).
struct HopfPoint {
  double omega0 = 0.0;
  double tau0 = 0.0;
  HopfBranch branch = HopfBranch::CaseI;
  /// Set when the prescribed branch formula failed residual validation
  /// and the point was recovered by root tracking instead.
  bool from_fallback = false;
};

/// Branch selected by |m| versus 1/|alpha|; the returned point is always
/// re-validated through char_residual, with a root-tracking fallback.
HopfPoint hopf_point(const SpectralCoefficients& co, double m, double alpha);

/// Both equations of the imaginary-axis system at (omega0, tau0):
///   omega0^2 - c - a omega0 sin(omega0 tau0) - b cos(2 omega0 tau0),
///   a omega0 cos(omega0 tau0) - b sin(2 omega0 tau0).
std::pair<double, double> imaginary_axis_system(const HopfPoint& hp,
                                                const SpectralCoefficients& co);

struct TransversalityResult {
  Complex dlambda_dtau;          // implicit derivative at (i omega0, tau0)
  double re_closed_form = 0.0;   // the published closed form, for comparison
  double rel_gap_closed_form = 0.0;
  bool closed_form_consistent = false;
};

/// d lambda/d tau at the Hopf point by implicit differentiation of the
/// characteristic equation; the published closed form is evaluated
/// alongside and flagged when it disagrees (the implicit value is
/// normative).
TransversalityResult transversality(const SpectralCoefficients& co,
                                    const HopfPoint& hp);

/// The published closed-form expression for Re(d lambda/d tau).
double transversality_closed_form(const SpectralCoefficients& co,
                                  const HopfPoint& hp);

/// Thrown when no imaginary-axis crossing exists in the searched range.
struct NoCrossingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrackedRoot {
  double tau;
  Complex lambda;
};

/// Newton continuation of a characteristic root over a tau grid,
/// warm-started from the previous point. Every returned pair satisfies
/// |char_residual| <= 1e-10; Newton failure past 50 iterations throws.
std::vector<TrackedRoot> track_root(const SpectralCoefficients& co,
                                    Complex lambda_seed, double tau_from,
                                    double tau_to, int steps);

/// Roots of the tau = 0 quadratic lambda^2 + a lambda + (b + c) = 0, the
/// natural seeds for continuation.
std::pair<Complex, Complex> zero_delay_roots(const SpectralCoefficients& co);

/// Locates the first tau in (0, tau_max] where the root continued from the
/// tau = 0 seed crosses the imaginary axis; refined by bisection on
/// Re lambda. Returns the crossing as a HopfPoint with from_fallback set.
HopfPoint find_crossing_by_tracking(const SpectralCoefficients& co,
                                    double tau_max, int steps = 400);

}  // namespace delaylp
