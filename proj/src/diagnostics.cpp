#include "delaylp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace delaylp {

namespace {

bool near_breakpoint(double t, double tau, double h) {
  if (tau <= 0.0) return false;
  const double r = std::remainder(t, tau);
  return std::abs(r) <= 1.5 * h;
}

template <typename EnergyFn, typename RateFn>
EnergyRateReport rate_check(const Trajectory& traj, double tau,
                            const EnergyFn& energy, const RateFn& exact_rate,
                            const RateFn& delayed_norm_rate) {
  const auto& nodes = traj.nodes();
  size_t beyond_tau = 0;
  for (const auto& n : nodes)
    if (n.t > tau) ++beyond_tau;
  if (beyond_tau < 10)
    throw std::invalid_argument("energy_rate_check: too few nodes beyond t = tau");

  EnergyRateReport report;
  for (size_t i = 1; i + 1 < nodes.size(); ++i) {
    const double t = nodes[i].t;
    if (t <= 0.0 || nodes[i - 1].t < 0.0) continue;
    if (near_breakpoint(t, tau, nodes[i + 1].t - t)) continue;
    const double h_left = t - nodes[i - 1].t;
    const double h_right = nodes[i + 1].t - t;
    if (std::abs(h_left - h_right) > 1e-12 * std::max(h_left, h_right)) continue;

    const double dE =
        (energy(nodes[i + 1].x) - energy(nodes[i - 1].x)) / (h_left + h_right);
    const Vec delayed = tau > 0.0 ? traj.state(t - tau) : nodes[i].x;
    report.max_discrepancy = std::max(
        report.max_discrepancy, std::abs(dE - exact_rate(nodes[i].x, delayed)));
    report.max_gap_delayed_norm_form =
        std::max(report.max_gap_delayed_norm_form,
                 std::abs(dE - delayed_norm_rate(nodes[i].x, delayed)));
    ++report.nodes_checked;
  }
  return report;
}

}  // namespace

EnergyRateReport energy_rate_check(const Trajectory& traj,
                                   const RigidBodyParams& p) {
  auto energy = [&p](const Vec& x) {
    return rigid_body_energy(Vec3(x[0], x[1], x[2]), p);
  };
  using Rate = std::function<double(const Vec&, const Vec&)>;
  const Rate exact = [&p](const Vec& x, const Vec& xd) {
    const Vec3 M(x[0], x[1], x[2]);
    const Vec3 Md(xd[0], xd[1], xd[2]);
    const Vec3 w = M.cross(p.omega_of(M));
    const Vec3 wd = Md.cross(p.omega_of(Md));
    return -p.alpha * wd.dot(w);
  };
  const Rate delayed_norm = [&p](const Vec&, const Vec& xd) {
    const Vec3 Md(xd[0], xd[1], xd[2]);
    return -p.alpha * Md.cross(p.omega_of(Md)).squaredNorm();
  };
  return rate_check(traj, p.tau, energy, exact, delayed_norm);
}

EnergyRateReport landau_lifschitz_rate_check(const Trajectory& traj,
                                             const LandauLifschitzParams& p) {
  auto energy = [&p](const Vec& x) {
    return landau_lifschitz_energy(Vec3(x[0], x[1], x[2]), p);
  };
  using Rate = std::function<double(const Vec&, const Vec&)>;
  const Rate exact = [&p](const Vec& x, const Vec& xd) {
    const Vec3 M(x[0], x[1], x[2]);
    const Vec3 Md(xd[0], xd[1], xd[2]);
    const double cos_theta = M.dot(Md) / (M.norm() * Md.norm());
    const double coeff =
        p.lambda_damp * p.gamma_ratio / (M.squaredNorm() * cos_theta);
    return -coeff * Md.cross(p.B).dot(M.cross(p.B));
  };
  const Rate delayed_norm = [&p](const Vec& x, const Vec& xd) {
    const Vec3 M(x[0], x[1], x[2]);
    const Vec3 Md(xd[0], xd[1], xd[2]);
    const double cos_theta = M.dot(Md) / (M.norm() * Md.norm());
    return -p.lambda_damp / (M.squaredNorm() * cos_theta) *
           Md.cross(p.B).squaredNorm();
  };
  return rate_check(traj, p.tau, energy, exact, delayed_norm);
}

double casimir_drift(const Trajectory& traj,
                     const std::function<double(const Vec&)>& casimir) {
  double drift = 0.0, ref = 0.0;
  bool have_ref = false;
  for (const auto& node : traj.nodes()) {
    if (node.t < 0.0) continue;
    const double c = casimir(node.x);
    if (!have_ref) {
      ref = c;
      have_ref = true;
    }
    drift = std::max(drift, std::abs(c - ref));
  }
  return drift;
}

CycleEstimate detect_limit_cycle(const Trajectory& traj, int component_index,
                                 double transient_fraction) {
  if (component_index < 0 || component_index >= traj.dimension())
    throw std::invalid_argument("detect_limit_cycle: component out of range");
  if (transient_fraction < 0.0 || transient_fraction >= 1.0)
    throw std::invalid_argument("detect_limit_cycle: transient fraction in [0,1)");

  const auto& nodes = traj.nodes();
  const double t0 = std::max(0.0, traj.t_min());
  const double cut = t0 + transient_fraction * (traj.t_max() - t0);

  CycleEstimate est;
  est.transient_cut = cut;

  struct Peak {
    double t, value;
  };
  std::vector<Peak> peaks;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (size_t i = 1; i + 1 < nodes.size(); ++i) {
    if (nodes[i].t < cut) continue;
    const double ym = nodes[i - 1].x[component_index];
    const double y0 = nodes[i].x[component_index];
    const double yp = nodes[i + 1].x[component_index];
    lo = std::min(lo, y0);
    hi = std::max(hi, y0);
    if (y0 >= ym && y0 > yp) {
      // Quadratic through the three nodes; vertex gives the peak.
      const double denom = ym - 2 * y0 + yp;
      double shift = 0.0, value = y0;
      if (denom != 0.0) {
        shift = 0.5 * (ym - yp) / denom;
        value = y0 - 0.25 * (ym - yp) * shift;
      }
      const double h = nodes[i + 1].t - nodes[i].t;
      peaks.push_back({nodes[i].t + shift * h, value});
    }
  }
  est.peaks_found = static_cast<int>(peaks.size());
  if (std::isfinite(lo) && std::isfinite(hi)) est.amplitude = 0.5 * (hi - lo);
  if (est.amplitude < 1e-6) est.equilibrium = true;

  if (peaks.size() < 6) return est;

  const size_t n = peaks.size();
  double mean_interval = 0.0;
  for (size_t i = n - 5; i < n; ++i)
    mean_interval += peaks[i].t - peaks[i - 1].t;
  mean_interval /= 5.0;

  bool intervals_ok = true, heights_ok = true;
  double mean_height = 0.0;
  for (size_t i = n - 5; i < n; ++i) mean_height += peaks[i].value;
  mean_height /= 5.0;
  const double height_scale = std::max(std::abs(mean_height), 1e-12);
  for (size_t i = n - 5; i < n; ++i) {
    if (std::abs((peaks[i].t - peaks[i - 1].t) - mean_interval) >
        0.01 * mean_interval)
      intervals_ok = false;
    if (std::abs(peaks[i].value - mean_height) > 0.02 * height_scale)
      heights_ok = false;
  }

  est.period = mean_interval;
  est.converged = intervals_ok && heights_ok && !est.equilibrium;

  // Amplitude over the final window (last five periods).
  const double window_start = peaks[n - 6].t;
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (const auto& node : nodes) {
    if (node.t < window_start) continue;
    lo = std::min(lo, node.x[component_index]);
    hi = std::max(hi, node.x[component_index]);
  }
  est.amplitude = 0.5 * (hi - lo);
  return est;
}

}  // namespace delaylp
