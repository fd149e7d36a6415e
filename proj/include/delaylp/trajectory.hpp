#pragma once

// Dense, interpolable storage of a solution's past so the integrator can
// evaluate x(t - tau) between nodes.

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

namespace delaylp {

using Vec = Eigen::VectorXd;

/// The initial segment of a delay problem: an evaluable map
/// phi : [-tau, 0] -> R^n.
struct InitialFunction {
  std::function<Vec(double)> phi;
  double tau = 0.0;

  static InitialFunction constant(Vec value, double tau);
};

struct TrajectoryNode {
  double t;
  Vec x;
  Vec dx;
};

/// Node storage with cubic Hermite interpolation between nodes. Node times
/// are strictly increasing; a trajectory is mutated only by its owning
/// integration run and read-only afterwards.
class Trajectory {
 public:
  Trajectory() = default;

  bool empty() const { return nodes_.empty(); }
  size_t size() const { return nodes_.size(); }
  double t_min() const;
  double t_max() const;
  int dimension() const;

  const std::vector<TrajectoryNode>& nodes() const { return nodes_; }

  /// Appends a node; t must exceed t_max and dimensions must match.
  void append(double t, Vec x, Vec dx);

  /// Cubic Hermite interpolation of (state, derivative) at t, exact at
  /// nodes. An out-of-range query is a bug in the caller, not a
  /// recoverable condition, and throws.
  std::pair<Vec, Vec> sample(double t) const;

  /// State-only sample (the common path for delayed arguments).
  Vec state(double t) const;

  /// When enabled, nodes older than t_max - keep_window are discarded as
  /// new nodes arrive. Off by default so post-hoc diagnostics see the full
  /// history.
  void enable_pruning(double keep_window);

  /// CSV export: header `t,x1,...,xn,dx1,...,dxn`, one row per node, full
  /// double precision.
  void write_csv(std::ostream& os) const;

 private:
  size_t segment_index(double t) const;

  std::vector<TrajectoryNode> nodes_;
  bool prune_ = false;
  double keep_window_ = 0.0;
};

}  // namespace delaylp
