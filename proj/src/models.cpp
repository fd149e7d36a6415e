#include "delaylp/models.hpp"

#include <cmath>

namespace delaylp {

namespace {

Vec to_dyn(const Vec3& v) {
  Vec out(3);
  out << v[0], v[1], v[2];
  return out;
}

Vec3 to_fixed(const Vec& v) { return Vec3(v[0], v[1], v[2]); }

}  // namespace

// ---------------------------------------------------------------------------
// Rigid body
// ---------------------------------------------------------------------------

void RigidBodyParams::validate() const {
  if (I1 <= 0.0 || I2 <= 0.0 || I3 <= 0.0)
    throw std::invalid_argument("rigid body: moments of inertia must be positive");
  if (tau < 0.0) throw std::invalid_argument("rigid body: tau must be non-negative");
}

Vec3 rigid_body_delay_rhs(const Vec3& M, const Vec3& M_delayed,
                          const RigidBodyParams& p) {
  const Vec3 omega = p.omega_of(M);
  const Vec3 omega_delayed = p.omega_of(M_delayed);
  double coeff = p.alpha;
  if (p.c2_scaling) coeff /= M.squaredNorm();
  return M.cross(omega) + coeff * M.cross(M_delayed.cross(omega_delayed));
}

Vec3 rigid_body_omega_rhs(const Vec3& omega, const Vec3& omega_delayed,
                          const RigidBodyParams& p) {
  const Vec3 dM = rigid_body_delay_rhs(p.momentum_of(omega),
                                       p.momentum_of(omega_delayed), p);
  return Vec3(dM[0] / p.I1, dM[1] / p.I2, dM[2] / p.I3);
}

double rigid_body_energy(const Vec3& M, const RigidBodyParams& p) {
  return 0.5 * M.dot(p.omega_of(M));
}

DDEProblem make_rigid_body_problem(const RigidBodyParams& p,
                                   InitialFunction initial) {
  p.validate();
  DDEProblem problem;
  problem.dimension = 3;
  problem.tau = p.tau;
  problem.initial = std::move(initial);
  problem.initial.tau = p.tau;
  problem.rhs = [p](double, const Vec& M, const Vec& Md) {
    return to_dyn(rigid_body_delay_rhs(to_fixed(M), to_fixed(Md), p));
  };
  return problem;
}

// ---------------------------------------------------------------------------
// Landau-Lifschitz
// ---------------------------------------------------------------------------

void LandauLifschitzParams::validate() const {
  if (!B.allFinite()) throw std::invalid_argument("landau_lifschitz: B must be finite");
  if (tau < 0.0) throw std::invalid_argument("landau_lifschitz: tau must be non-negative");
}

Vec3 landau_lifschitz_delay_rhs(const Vec3& M, const Vec3& M_delayed,
                                const Vec3& B, const Vec3& B_delayed,
                                const LandauLifschitzParams& p) {
  const Vec3 precession = p.gamma_ratio * M.cross(B);
  if (p.lambda_damp == 0.0) return precession;

  const double norm_m = M.norm();
  const double norm_md = M_delayed.norm();
  if (norm_m == 0.0 || norm_md == 0.0)
    throw SingularConfigurationError("landau_lifschitz: |M| = 0");
  const double cos_theta = M.dot(M_delayed) / (norm_m * norm_md);
  if (std::abs(cos_theta) < 1e-8)
    throw SingularConfigurationError(
        "landau_lifschitz: M nearly orthogonal to delayed M, metric degenerates");
  const double coeff = p.lambda_damp / (M.squaredNorm() * cos_theta);
  return precession + coeff * M.cross(M_delayed.cross(B_delayed));
}

Vec3 landau_lifschitz_delay_rhs(const Vec3& M, const Vec3& M_delayed,
                                const LandauLifschitzParams& p) {
  return landau_lifschitz_delay_rhs(M, M_delayed, p.B, p.B, p);
}

double landau_lifschitz_energy(const Vec3& M, const LandauLifschitzParams& p) {
  return p.gamma_ratio * M.dot(p.B);
}

DDEProblem make_landau_lifschitz_problem(const LandauLifschitzParams& p,
                                         InitialFunction initial) {
  p.validate();
  DDEProblem problem;
  problem.dimension = 3;
  problem.tau = p.tau;
  problem.initial = std::move(initial);
  problem.initial.tau = p.tau;
  problem.rhs = [p](double, const Vec& M, const Vec& Md) {
    return to_dyn(landau_lifschitz_delay_rhs(to_fixed(M), to_fixed(Md), p));
  };
  return problem;
}

// ---------------------------------------------------------------------------
// Generic Lie-Poisson engines
// ---------------------------------------------------------------------------

namespace {

double positive_casimir(const AlgebraSpec& spec, const Vec& mu) {
  const double c = spec.casimir().value(mu);
  if (c <= 0.0)
    throw std::domain_error("casimir must be positive for the delayed forcing");
  return c;
}

}  // namespace

Vec generic_dissipative_rhs(const Vec& mu, const Vec& mu_delayed,
                            const AlgebraSpec& spec, const GradientFn& grad_h,
                            const GradientFn& grad_k) {
  const double c_cur = positive_casimir(spec, mu);
  const double c_del = positive_casimir(spec, mu_delayed);

  const Vec conservative = -spec.bracket(grad_h(mu), mu);

  const Vec inner = spec.bracket(mu_delayed, grad_k(mu_delayed));
  const Vec dissipative = spec.bracket(mu, spec.gamma() * inner) / c_del;

  const Vec commutator = spec.bracket(spec.gamma() * mu, spec.gamma() * mu_delayed);
  const double weight =
      spec.pairing(spec.gamma() * grad_k(mu), commutator) / (c_cur * c_del);
  const Vec orbit_term =
      weight * spec.bracket(mu, spec.project_complement(commutator, mu));

  return conservative + dissipative - orbit_term;
}

Vec lie_poisson_delay_rhs(const Vec& mu, const Vec& mu_delayed,
                          const AlgebraSpec& spec, const GradientFn& grad_h,
                          const GradientFn& grad_k) {
  const double c_cur = positive_casimir(spec, mu);
  const double c_del = positive_casimir(spec, mu_delayed);

  const Vec hamiltonian = spec.coadjoint(grad_h(mu), mu);

  const Vec inner = spec.coadjoint(grad_k(mu_delayed), mu_delayed);
  const Vec dissipative = spec.coadjoint(spec.gamma() * inner, mu) / c_del;

  const Vec commutator = spec.bracket(spec.gamma() * mu, spec.gamma() * mu_delayed);
  const double weight =
      spec.pairing(spec.gamma() * grad_k(mu), commutator) / (c_cur * c_del);
  const Vec orbit_term =
      weight * spec.coadjoint(spec.project_complement(commutator, mu), mu);

  return hamiltonian + dissipative - orbit_term;
}

Vec orbit_gradient_rhs(const Vec& mu, const Vec& mu_delayed,
                       const AlgebraSpec& spec, const GradientFn& grad_k) {
  const GradientFn zero = [](const Vec& v) { return Vec(Vec::Zero(v.size())); };
  return lie_poisson_delay_rhs(mu, mu_delayed, spec, zero, grad_k);
}

// ---------------------------------------------------------------------------
// Demonstration models
// ---------------------------------------------------------------------------

DDEProblem make_circle_problem(double c, InitialFunction initial) {
  DDEProblem problem;
  problem.dimension = 1;
  problem.tau = 1.0;
  problem.initial = std::move(initial);
  problem.initial.tau = 1.0;
  problem.rhs = [c](double, const Vec&, const Vec& qd) {
    Vec out(1);
    out[0] = c * std::sin(qd[0]);
    return out;
  };
  return problem;
}

DDEProblem make_cylinder_problem(double b, double c, InitialFunction initial) {
  DDEProblem problem;
  problem.dimension = 2;
  problem.tau = 1.0;
  problem.initial = std::move(initial);
  problem.initial.tau = 1.0;
  problem.rhs = [b, c](double, const Vec& q, const Vec& qd) {
    Vec out(2);
    out[0] = q[1];
    out[1] = c * std::sin(qd[0]) - b * q[1];
    return out;
  };
  return problem;
}

DDEProblem make_sphere_problem(double tau, InitialFunction initial) {
  if (tau < 0.0) throw std::invalid_argument("sphere: tau must be non-negative");
  DDEProblem problem;
  problem.dimension = 3;
  problem.tau = tau;
  problem.initial = std::move(initial);
  problem.initial.tau = tau;
  problem.rhs = [](double, const Vec& q, const Vec& qd) {
    Vec out(3);
    out[0] = -qd[0] * q[1] - q[2];
    out[1] = qd[0] * q[0] - q[2];
    out[2] = q[0] + q[1];
    return out;
  };
  return problem;
}

void NeuronParams::validate() const {
  if (a <= 0.0 || b <= 0.0 || c <= 0.0 || d <= 0.0)
    throw std::invalid_argument("neuron: a, b, c, d must be positive");
  if (h_gain < 0.0) throw std::invalid_argument("neuron: h must be non-negative");
  if (n < 1) throw std::invalid_argument("neuron: population size must be >= 1");
}

DDEProblem make_neuron_problem(const NeuronParams& p, InitialFunction initial) {
  p.validate();
  NeuronParams params = p;
  if (!params.f) params.f = [](double x) { return std::tanh(x); };

  DDEProblem problem;
  problem.dimension = 2 * params.n;
  problem.tau = initial.tau;
  problem.initial = std::move(initial);
  problem.rhs = [params](double, const Vec& x, const Vec& xd) {
    const int n = params.n;
    Vec out(2 * n);
    std::vector<double> fired(n);
    for (int i = 0; i < n; ++i)
      fired[i] = params.f(x[i] - params.h_gain * xd[i]);
    double total = 0.0;
    for (double v : fired) total += v;
    for (int i = 0; i < n; ++i) {
      out[i] = x[n + i];
      out[n + i] = -params.a * x[n + i] - params.b * x[i] +
                   params.c * fired[i] + params.d * (total - fired[i]);
    }
    return out;
  };
  return problem;
}

void MachineToolParams::validate() const {
  if (k_damp <= 0.0 || omega_nat <= 0.0 || mass <= 0.0 || k1 <= 0.0 ||
      beta <= 0.0 || Omega_rot <= 0.0)
    throw std::invalid_argument("machine tool: parameters must be positive");
}

DDEProblem make_machine_tool_problem(const MachineToolParams& p,
                                     InitialFunction initial) {
  p.validate();
  DDEProblem problem;
  problem.dimension = 2;
  problem.tau = p.delay();
  problem.initial = std::move(initial);
  problem.initial.tau = problem.tau;
  problem.rhs = [p](double, const Vec& x, const Vec& xd) {
    const double q = x[0], v = x[1], q_del = xd[0];
    const double scale = 2.0 * M_PI * p.k1 / (8.0 * p.beta * p.Omega_rot * p.mass);
    const double dq = q - q_del;
    const double force = -scale * ((v - q_del) + (5.0 / p.beta) * dq * dq * dq);
    Vec out(2);
    out[0] = v;
    out[1] = -2.0 * p.k_damp * p.omega_nat * v - p.omega_nat * p.omega_nat * q +
             force / p.mass;
    return out;
  };
  return problem;
}

}  // namespace delaylp
