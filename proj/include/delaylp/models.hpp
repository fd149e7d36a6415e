#pragma once

// Right-hand sides for the concrete delayed systems handled by this
// toolkit, each packaged as a DDEProblem factory, plus the generic
// Lie-algebra delayed double-bracket engine.

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>

#include "delaylp/algebra.hpp"
#include "delaylp/integrator.hpp"

namespace delaylp {

using Vec3 = Eigen::Vector3d;

// ---------------------------------------------------------------------------
// Rigid body with delayed double-bracket forcing
// ---------------------------------------------------------------------------

struct RigidBodyParams {
  double I1 = 1.0, I2 = 1.0, I3 = 1.0;  // principal moments of inertia
  double alpha = 0.0;                   // dissipation coefficient
  double tau = 0.0;                     // delay
  double m = 1.0;                       // equilibrium angular-momentum magnitude
  // Optional |M|^2 scaling of the dissipative term (the double-bracket
  // derivation carries a 1/c^2; the stability analysis uses the bare
  // coefficient, which is the default).
  bool c2_scaling = false;

  void validate() const;
  Vec3 inertia() const { return Vec3(I1, I2, I3); }
  Vec3 omega_of(const Vec3& M) const { return Vec3(M[0] / I1, M[1] / I2, M[2] / I3); }
  Vec3 momentum_of(const Vec3& omega) const {
    return Vec3(I1 * omega[0], I2 * omega[1], I3 * omega[2]);
  }
  /// Equilibrium Omega_1 = (m/I1, 0, 0).
  Vec3 equilibrium_omega() const { return Vec3(m / I1, 0.0, 0.0); }
  Vec3 equilibrium_momentum() const { return Vec3(m, 0.0, 0.0); }
};

/// M' = M x Omega + alpha M x (M~ x Omega~) with Omega = I^{-1} M; the
/// result is orthogonal to M by construction.
Vec3 rigid_body_delay_rhs(const Vec3& M, const Vec3& M_delayed,
                          const RigidBodyParams& p);

/// The same dynamics in angular-velocity form,
/// Omega' = I^{-1} rigid_body_delay_rhs(I Omega, I Omega~).
Vec3 rigid_body_omega_rhs(const Vec3& omega, const Vec3& omega_delayed,
                          const RigidBodyParams& p);

/// Kinetic energy E = (1/2) Omega . M.
double rigid_body_energy(const Vec3& M, const RigidBodyParams& p);

/// DDEProblem in momentum coordinates.
DDEProblem make_rigid_body_problem(const RigidBodyParams& p,
                                   InitialFunction initial);

// ---------------------------------------------------------------------------
// Landau-Lifschitz with delay
// ---------------------------------------------------------------------------

struct LandauLifschitzParams {
  double gamma_ratio = 1.0;   // magneto-mechanical ratio
  double lambda_damp = 0.0;   // damping coefficient
  Vec3 B = Vec3(0, 0, 1);     // applied field
  double tau = 0.0;

  void validate() const;
};

/// Thrown when M and M~ are (numerically) orthogonal: the delayed metric
/// degenerates there, so this is an error rather than a clamp.
struct SingularConfigurationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// M' = gamma M x B + lambda / (|M|^2 cos theta) M x (M~ x B~), theta the
/// angle between M and M~. The field and its delayed value are passed
/// separately so time-varying fields plug in; the convenience overload
/// uses the constant field from the parameter record for both.
Vec3 landau_lifschitz_delay_rhs(const Vec3& M, const Vec3& M_delayed,
                                const Vec3& B, const Vec3& B_delayed,
                                const LandauLifschitzParams& p);
Vec3 landau_lifschitz_delay_rhs(const Vec3& M, const Vec3& M_delayed,
                                const LandauLifschitzParams& p);

/// Precession energy E = gamma M . B (the Hamiltonian whose Lie-Poisson
/// flow is the undamped term).
double landau_lifschitz_energy(const Vec3& M, const LandauLifschitzParams& p);

DDEProblem make_landau_lifschitz_problem(const LandauLifschitzParams& p,
                                         InitialFunction initial);

// ---------------------------------------------------------------------------
// Generic Lie-Poisson engines with delayed double-bracket dissipation
// ---------------------------------------------------------------------------

using GradientFn = std::function<Vec(const Vec&)>;

/// Compact-semisimple form (algebra identified with its dual):
///   mu' = -[grad_h(mu), mu]
///         + (1/C(mu~)) [mu, Gamma [mu~, grad_k(mu~)]]
///         - (1/(C(mu) C(mu~))) <Gamma grad_k(mu), [Gamma mu, Gamma mu~]>
///             [mu, [Gamma mu, Gamma mu~]^mu]
/// With C == 1 and Gamma = id the dissipative part is the Brockett double
/// bracket with delay.
Vec generic_dissipative_rhs(const Vec& mu, const Vec& mu_delayed,
                            const AlgebraSpec& spec, const GradientFn& grad_h,
                            const GradientFn& grad_k);

/// Dual-form variant built from coadjoint actions:
///   mu' = ad*_{grad_h(mu)} mu
///         + (1/C(mu~)) ad*_{Gamma(ad*_{grad_k(mu~)} mu~)} mu
///         - (1/(C(mu) C(mu~))) <Gamma grad_k(mu), [Gamma mu, Gamma mu~]>
///             ad*_{[Gamma mu, Gamma mu~]^mu} mu.
/// On so(3) with the standard identification it agrees with
/// generic_dissipative_rhs.
Vec lie_poisson_delay_rhs(const Vec& mu, const Vec& mu_delayed,
                          const AlgebraSpec& spec, const GradientFn& grad_h,
                          const GradientFn& grad_k);

/// The dissipative part alone: the gradient vector field of k on the
/// coadjoint orbit relative to the normal metric (with delay). At
/// mu~ = mu this is the pure double-bracket gradient flow and k is
/// non-increasing along trajectories.
Vec orbit_gradient_rhs(const Vec& mu, const Vec& mu_delayed,
                       const AlgebraSpec& spec, const GradientFn& grad_k);

// ---------------------------------------------------------------------------
// Small demonstration models
// ---------------------------------------------------------------------------

/// q'(t) = c sin(q(t-1)) on the circle (angle reduced mod 2 pi only at
/// output time, never inside integration).
DDEProblem make_circle_problem(double c, InitialFunction initial);

/// q1' = q2, q2' = c sin(q1(t-1)) - b q2 on the cylinder.
DDEProblem make_cylinder_problem(double b, double c, InitialFunction initial);

/// The three-component sphere system
///   q1' = -q1(t-tau) q2 - q3,
///   q2' =  q1(t-tau) q1 - q3,
///   q3' =  q1 + q2;
/// sum q^i q^i' vanishes identically, so unit-sphere data stays on the
/// sphere.
DDEProblem make_sphere_problem(double tau, InitialFunction initial);

struct NeuronParams {
  double a = 1.0, b = 1.0, c = 1.0, d = 1.0;
  double h_gain = 0.0;
  int n = 1;
  std::function<double(double)> f;  // activation, defaults to tanh

  void validate() const;
};

/// Inertial neuron population with time delay, rewritten first order with
/// state (q_1..q_n, v_1..v_n):
///   q_i' = v_i,
///   v_i' = -a v_i - b q_i + c f(q_i - h q~_i) + d sum_{j != i} f(q_j - h q~_j).
DDEProblem make_neuron_problem(const NeuronParams& p, InitialFunction initial);

struct MachineToolParams {
  double k_damp = 0.05;     // relative damping factor
  double omega_nat = 1.0;   // natural angular frequency sqrt(s/m)
  double mass = 1.0;
  double k1 = 1.0;          // cutting parameter
  double beta = 1.0;        // chip thickness
  double Omega_rot = 2 * M_PI;  // work-piece angular velocity; tau = 2 pi / Omega

  void validate() const;
  double delay() const { return 2.0 * M_PI / Omega_rot; }
};

/// Regenerative machine-tool vibration (orthogonal cutting), first-order
/// form with state (q, v):
///   q' = v,
///   v' = -2 k w v - w^2 q + f(q~, v, beta)/mass,
/// with the cutting force
///   f = -(2 pi k1 / (8 beta Omega mass)) [ (v - q~) + (5/beta)(q - q~)^3 ].
DDEProblem make_machine_tool_problem(const MachineToolParams& p,
                                     InitialFunction initial);

}  // namespace delaylp
