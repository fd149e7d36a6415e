#pragma once

// Fixed-step method-of-steps integration of constant-delay DDEs with a
// classical fourth-order Runge-Kutta scheme. Delayed stage values are read
// from the dense Hermite history (exactly from the initial function while
// t - tau <= 0), which keeps the method fourth order at interior stages.

#include <functional>
#include <stdexcept>

#include "delaylp/trajectory.hpp"

namespace delaylp {

/// x'(t) = rhs(t, x(t), x(t - tau)), x = initial.phi on [-tau, 0].
struct DDEProblem {
  int dimension = 0;
  std::function<Vec(double, const Vec&, const Vec&)> rhs;
  double tau = 0.0;
  InitialFunction initial;
};

struct IntegratorConfig {
  double step = 0.0;
  double t_end = 0.0;
  double divergence_guard = 1e6;
  bool prune_history = false;
};

/// Thrown when the state norm exceeds the divergence guard or the rhs
/// returns non-finite values; carries the failure time.
struct DivergenceError : std::runtime_error {
  DivergenceError(const std::string& what, double when)
      : std::runtime_error(what), t(when) {}
  double t;
};

/// Largest step h <= requested dividing tau exactly (h itself when
/// tau = 0). The CLI reports when this changes the requested step.
double adjust_step_to_delay(double requested, double tau);

/// Integrates over [0, t_end]; the returned trajectory covers
/// [-tau, t_end] with the initial segment tabulated from phi (derivatives
/// by finite differences of phi) and RK4 nodes beyond. Requires tau to be
/// an integer multiple of the step when tau > 0.
Trajectory integrate(const DDEProblem& problem, const IntegratorConfig& config);

struct OrbitRun {
  Trajectory trajectory;
  double casimir_drift = 0.0;
};

/// integrate() plus the maximum drift of casimir(x(t)) from its t = 0
/// value over all nodes t >= 0.
OrbitRun integrate_on_orbit(const DDEProblem& problem,
                            const IntegratorConfig& config,
                            const std::function<double(const Vec&)>& casimir);

}  // namespace delaylp
