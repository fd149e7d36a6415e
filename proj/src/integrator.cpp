#include "delaylp/integrator.hpp"

#include <cmath>
#include <string>

namespace delaylp {

namespace {

long delay_steps(double tau, double h) {
  const double ratio = tau / h;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument(
        "integrate: tau/h = " + std::to_string(ratio) +
        " is not an integer; adjust the step (see adjust_step_to_delay)");
  return static_cast<long>(rounded);
}

void check_config(const DDEProblem& p, const IntegratorConfig& c) {
  if (p.dimension <= 0) throw std::invalid_argument("problem dimension must be positive");
  if (!p.rhs) throw std::invalid_argument("problem has no rhs");
  if (p.tau < 0.0) throw std::invalid_argument("tau must be non-negative");
  if (p.tau > 0.0 && !p.initial.phi)
    throw std::invalid_argument("problem with tau > 0 needs an initial function");
  if (c.step <= 0.0) throw std::invalid_argument("step must be positive");
  if (c.t_end <= 0.0) throw std::invalid_argument("t_end must be positive");
}

}  // namespace

double adjust_step_to_delay(double requested, double tau) {
  if (requested <= 0.0) throw std::invalid_argument("step must be positive");
  if (tau <= 0.0) return requested;
  const double k = std::ceil(tau / requested - 1e-12);
  return tau / std::max(1.0, k);
}

Trajectory integrate(const DDEProblem& problem, const IntegratorConfig& config) {
  check_config(problem, config);
  const double h = config.step;
  const double tau = problem.tau;
  const long k_delay = tau > 0.0 ? delay_steps(tau, h) : 0;

  Trajectory traj;
  if (config.prune_history) traj.enable_pruning(tau + 2 * h);

  // History lookup: exact initial function for t <= 0, dense Hermite on
  // computed nodes afterwards.
  auto history = [&](double t) -> Vec {
    if (t <= 0.0) return problem.initial.phi(t);
    return traj.state(t);
  };

  Vec x0;
  if (problem.initial.phi) {
    x0 = problem.initial.phi(0.0);
  } else {
    throw std::invalid_argument("problem needs an initial function");
  }
  if (x0.size() != problem.dimension)
    throw std::invalid_argument("initial function dimension mismatch");

  // Tabulate the initial segment: states from phi, derivatives by central
  // finite differences (one-sided at the left endpoint). The t = 0 node is
  // the junction where the equation already holds, so it carries the
  // right-sided derivative rhs(0, x0, phi(-tau)); the solution generically
  // has a derivative jump there, and the [0, h] interpolant needs the
  // right-hand slope or the delayed stage reads degrade to O(h^2).
  if (tau > 0.0) {
    const auto& phi = problem.initial.phi;
    for (long j = 0; j < k_delay; ++j) {
      const double t = -tau + j * h;
      Vec dx;
      if (j == 0) {
        dx = (-3.0 * phi(t) + 4.0 * phi(t + h) - phi(t + 2 * h)) / (2 * h);
      } else {
        dx = (phi(t + h) - phi(t - h)) / (2 * h);
      }
      traj.append(t, phi(t), std::move(dx));
    }
    traj.append(0.0, x0, problem.rhs(0.0, x0, phi(-tau)));
  } else {
    traj.append(0.0, x0, problem.rhs(0.0, x0, x0));
  }

  const long n_steps = static_cast<long>(std::round(config.t_end / h));
  if (std::abs(n_steps * h - config.t_end) > 1e-9 * config.t_end + 1e-14)
    throw std::invalid_argument("integrate: t_end is not a multiple of the step");

  auto eval = [&](double t, const Vec& x) -> Vec {
    const Vec xd = tau > 0.0 ? history(t - tau) : x;
    Vec f = problem.rhs(t, x, xd);
    if (!f.allFinite())
      throw DivergenceError("rhs returned non-finite values at t = " +
                                std::to_string(t), t);
    return f;
  };

  Vec x = x0;
  Vec k1 = eval(0.0, x);
  for (long n = 0; n < n_steps; ++n) {
    const double t = n * h;
    const Vec k2 = eval(t + 0.5 * h, x + (0.5 * h) * k1);
    const Vec k3 = eval(t + 0.5 * h, x + (0.5 * h) * k2);
    const Vec k4 = eval(t + h, x + h * k3);
    x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double t_next = (n + 1) * h;
    if (x.lpNorm<Eigen::Infinity>() > config.divergence_guard)
      throw DivergenceError("divergence guard tripped at t = " +
                                std::to_string(t_next), t_next);
    k1 = eval(t_next, x);
    traj.append(t_next, x, k1);
  }
  return traj;
}

OrbitRun integrate_on_orbit(const DDEProblem& problem,
                            const IntegratorConfig& config,
                            const std::function<double(const Vec&)>& casimir) {
  OrbitRun run;
  run.trajectory = integrate(problem, config);
  double ref = 0.0;
  bool have_ref = false;
  for (const auto& node : run.trajectory.nodes()) {
    if (node.t < 0.0) continue;
    const double c = casimir(node.x);
    if (!have_ref) {
      ref = c;
      have_ref = true;
    }
    run.casimir_drift = std::max(run.casimir_drift, std::abs(c - ref));
  }
  return run;
}

}  // namespace delaylp
