#include <doctest.h>

#include <cmath>
#include <sstream>

#include "delaylp/trajectory.hpp"

using namespace delaylp;

namespace {

Vec scalar(double v) {
  Vec x(1);
  x[0] = v;
  return x;
}

Trajectory sampled_sine(double h, double t_end) {
  Trajectory t;
  for (double x = 0.0; x <= t_end + 1e-12; x += h)
    t.append(x, scalar(std::sin(x)), scalar(std::cos(x)));
  return t;
}

double max_midpoint_error(const Trajectory& t) {
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = t.t_min() + (t.t_max() - t.t_min()) * (i + 0.5) / 1000.0;
    worst = std::max(worst, std::abs(t.state(x)[0] - std::sin(x)));
  }
  return worst;
}

}  // namespace

TEST_CASE("append") {
  Trajectory t;
  SUBCASE("first node sets both interval ends") {
    t.append(2.0, scalar(1.0), scalar(0.0));
    CHECK(t.t_min() == 2.0);
    CHECK(t.t_max() == 2.0);
    CHECK(t.size() == 1);
  }
  SUBCASE("non-monotone times are rejected") {
    t.append(0.0, scalar(0.0), scalar(0.0));
    CHECK_THROWS_AS(t.append(0.0, scalar(1.0), scalar(0.0)), std::invalid_argument);
    CHECK_THROWS_AS(t.append(-1.0, scalar(1.0), scalar(0.0)), std::invalid_argument);
  }
  SUBCASE("k nodes at spacing h cover (k-1) h") {
    const double h = 0.25;
    for (int k = 0; k < 9; ++k) t.append(k * h, scalar(k), scalar(1.0));
    CHECK(t.t_max() == doctest::Approx(8 * h));
  }
  SUBCASE("dimension mismatch is rejected") {
    t.append(0.0, scalar(0.0), scalar(0.0));
    Vec two(2);
    two << 0.0, 0.0;
    CHECK_THROWS_AS(t.append(1.0, two, two), std::invalid_argument);
  }
}

TEST_CASE("sampling") {
  SUBCASE("node times reproduce stored states exactly") {
    const Trajectory t = sampled_sine(0.1, 1.0);
    for (const auto& node : t.nodes()) {
      const auto [x, dx] = t.sample(node.t);
      CHECK(x[0] == node.x[0]);
      CHECK(dx[0] == node.dx[0]);
    }
  }
  SUBCASE("constant history is interpolated exactly") {
    Trajectory t;
    for (int k = 0; k < 5; ++k) t.append(0.5 * k, scalar(3.25), scalar(0.0));
    for (double x = 0.0; x <= 2.0; x += 0.01)
      CHECK(t.state(x)[0] == doctest::Approx(3.25).epsilon(1e-15));
  }
  SUBCASE("out-of-range queries throw") {
    const Trajectory t = sampled_sine(0.1, 1.0);
    CHECK_THROWS_AS(t.sample(-0.5), std::out_of_range);
    CHECK_THROWS_AS(t.sample(1.5), std::out_of_range);
  }
}

TEST_CASE("cubic Hermite accuracy on a smooth signal") {
  // h^4/384 max|x''''| with x = sin gives ~2.6e-7 at h = 0.1.
  const double e1 = max_midpoint_error(sampled_sine(0.1, M_PI));
  CHECK(e1 <= 5e-6);

  SUBCASE("halving the spacing is fourth order") {
    const double e2 = max_midpoint_error(sampled_sine(0.05, M_PI));
    const double ratio = e1 / e2;
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
  }
}

TEST_CASE("interpolation is continuous across interior nodes") {
  const Trajectory t = sampled_sine(0.17, 2.0);
  for (size_t i = 1; i + 1 < t.size(); ++i) {
    const double x = t.nodes()[i].t;
    const double eps = 1e-13 * std::max(1.0, std::abs(x));
    CHECK(std::abs(t.state(x - eps)[0] - t.state(x + eps)[0]) <= 1e-12);
  }
}

TEST_CASE("CSV export format") {
  Trajectory t;
  Vec x(2), dx(2);
  x << 1.0 / 3.0, -2.0;
  dx << 0.5, 1e-17;
  t.append(0.0, x, dx);
  t.append(0.125, 2.0 * x, dx);

  std::ostringstream os;
  t.write_csv(os);
  std::istringstream in(os.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,x1,x2,dx1,dx2");

  std::string row;
  std::getline(in, row);
  // Full double precision round trip of the awkward 1/3.
  const auto comma = row.find(',');
  const std::string x1 = row.substr(comma + 1, row.find(',', comma + 1) - comma - 1);
  CHECK(std::stod(x1) ==1.0 / 3.0);
}

TEST_CASE("pruning keeps a sliding window") {
  Trajectory t;
  t.enable_pruning(1.0);
  for (int k = 0; k <= 100; ++k) t.append(0.1 * k, scalar(k), scalar(1.0));
  CHECK(t.t_max() == doctest::Approx(10.0));
  CHECK(t.t_min() >= 10.0 - 1.0 - 0.2);
  CHECK(t.size() < 20);
  // The retained window still samples.
  CHECK(t.state(9.5)[0] == doctest::Approx(95.0).epsilon(1e-12));
}
