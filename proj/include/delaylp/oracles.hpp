#pragma once

// Independent numerical oracles used by tests and the verification
// battery: finite-difference Jacobians and Taylor coefficients of the
// rigid-body nonlinearity, and a 2-D adaptive quadrature for the adjoint
// bilinear form. Nothing here shares code with the closed-form paths it
// checks.

#include "delaylp/hopf.hpp"

namespace delaylp {
namespace oracles {

/// Central finite-difference Jacobians of the angular-velocity rhs at the
/// equilibrium: (d rhs / d Omega, d rhs / d Omega~). The second matrix is
/// alpha G, not G.
std::pair<Mat3, Mat3> fd_jacobians(const RigidBodyParams& p, double step = 1e-5);

/// Nonlinear remainder N(V, V~) = rhs(Omega1 + V, Omega1 + V~) - A V -
/// alpha G V~ on complexified deviations, evaluated through the full
/// vector field (not through the hand-expanded quadratic/cubic parts).
Vec3c nonlinearity(const Vec3c& V, const Vec3c& V_delayed,
                   const RigidBodyParams& p);

/// Quadratic Taylor part by even differencing, N2(z) ~
/// [N(eps z) + N(-eps z)] / (2 eps^2).
Vec3c fd_quadratic(const Vec3c& V, const Vec3c& V_delayed,
                   const RigidBodyParams& p, double eps = 1e-4);

/// Cubic Taylor part by odd differencing.
Vec3c fd_cubic(const Vec3c& V, const Vec3c& V_delayed, const RigidBodyParams& p,
               double eps = 1e-4);

/// g21 assembled exactly as the closed-form pipeline does, but with every
/// nonlinearity contraction replaced by the finite-difference Taylor
/// coefficients above.
Complex fd_g21(const RigidBodyParams& p, const HopfPoint& hp, const EigenData& e,
               const NormalFormData& nf, double eps = 1e-4);

/// Adjoint bilinear form by 2-D adaptive Simpson quadrature (tolerance
/// 1e-12 by default); the closed form must agree to ~1e-9 relative.
Complex bilinear_form_quadrature(const ExponentialSegment& psi,
                                 const ExponentialSegment& phi,
                                 const RigidBodyParams& p, double tau0,
                                 double tol = 1e-12);

}  // namespace oracles
}  // namespace delaylp
