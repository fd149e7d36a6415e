#include "delaylp/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace delaylp {

InitialFunction InitialFunction::constant(Vec value, double tau) {
  return InitialFunction{[v = std::move(value)](double) { return v; }, tau};
}

double Trajectory::t_min() const {
  if (nodes_.empty()) throw std::logic_error("t_min of empty trajectory");
  return nodes_.front().t;
}

double Trajectory::t_max() const {
  if (nodes_.empty()) throw std::logic_error("t_max of empty trajectory");
  return nodes_.back().t;
}

int Trajectory::dimension() const {
  if (nodes_.empty()) throw std::logic_error("dimension of empty trajectory");
  return static_cast<int>(nodes_.front().x.size());
}

void Trajectory::append(double t, Vec x, Vec dx) {
  if (!std::isfinite(t) || !x.allFinite() || !dx.allFinite())
    throw std::invalid_argument("append: non-finite node data");
  if (x.size() != dx.size())
    throw std::invalid_argument("append: state/derivative size mismatch");
  if (!nodes_.empty()) {
    if (t <= nodes_.back().t)
      throw std::invalid_argument("append: node times must be strictly increasing");
    if (x.size() != nodes_.front().x.size())
      throw std::invalid_argument("append: dimension mismatch");
  }
  nodes_.push_back({t, std::move(x), std::move(dx)});
  if (prune_) {
    const double cutoff = nodes_.back().t - keep_window_;
    size_t drop = 0;
    while (drop + 2 < nodes_.size() && nodes_[drop + 1].t < cutoff) ++drop;
    if (drop > 0) nodes_.erase(nodes_.begin(), nodes_.begin() + drop);
  }
}

void Trajectory::enable_pruning(double keep_window) {
  if (keep_window < 0.0)
    throw std::invalid_argument("enable_pruning: negative window");
  prune_ = true;
  keep_window_ = keep_window;
}

size_t Trajectory::segment_index(double t) const {
  // Bracketing segment [t_i, t_{i+1}] with t inside; callers have already
  // range-checked.
  const auto it = std::upper_bound(
      nodes_.begin(), nodes_.end(), t,
      [](double value, const TrajectoryNode& n) { return value < n.t; });
  size_t hi = static_cast<size_t>(it - nodes_.begin());
  if (hi == 0) hi = 1;
  if (hi == nodes_.size()) hi = nodes_.size() - 1;
  return hi - 1;
}

std::pair<Vec, Vec> Trajectory::sample(double t) const {
  if (nodes_.empty()) throw std::logic_error("sample of empty trajectory");
  const double lo = nodes_.front().t, hi = nodes_.back().t;
  const double slack = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  if (t < lo - slack || t > hi + slack)
    throw std::out_of_range("sample: query outside stored history (integrator bug)");
  t = std::clamp(t, lo, hi);

  const size_t i = segment_index(t);
  const TrajectoryNode& n0 = nodes_[i];
  const TrajectoryNode& n1 = nodes_[i + 1];
  if (t == n0.t) return {n0.x, n0.dx};
  if (t == n1.t) return {n1.x, n1.dx};

  const double h = n1.t - n0.t;
  const double s = (t - n0.t) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  Vec x = h00 * n0.x + (h10 * h) * n0.dx + h01 * n1.x + (h11 * h) * n1.dx;

  const double d00 = (6 * s2 - 6 * s) / h;
  const double d10 = 3 * s2 - 4 * s + 1;
  const double d01 = (-6 * s2 + 6 * s) / h;
  const double d11 = 3 * s2 - 2 * s;
  Vec dx = d00 * n0.x + d10 * n0.dx + d01 * n1.x + d11 * n1.dx;
  return {std::move(x), std::move(dx)};
}

Vec Trajectory::state(double t) const { return sample(t).first; }

void Trajectory::write_csv(std::ostream& os) const {
  const int n = dimension();
  os << "t";
  for (int i = 1; i <= n; ++i) os << ",x" << i;
  for (int i = 1; i <= n; ++i) os << ",dx" << i;
  os << "\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (const auto& node : nodes_) {
    put(node.t);
    for (int i = 0; i < n; ++i) {
      os << ",";
      put(node.x[i]);
    }
    for (int i = 0; i < n; ++i) {
      os << ",";
      put(node.dx[i]);
    }
    os << "\n";
  }
}

}  // namespace delaylp
