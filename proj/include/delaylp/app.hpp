#pragma once

// Command implementations behind the CLI: simulate, analyze, sweep,
// verify. Kept in the library so tests can drive them directly. Exit
// codes are a stable contract: 0 success, 1 config/hypothesis error, 2
// divergence, 3 no Hopf crossing, 4 verification failure.

#include <iosfwd>
#include <string>
#include <vector>

#include "delaylp/config.hpp"
#include "delaylp/diagnostics.hpp"
#include "delaylp/reports.hpp"

namespace delaylp {
namespace app {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitDivergence = 2;
inline constexpr int kExitNoCrossing = 3;
inline constexpr int kExitVerifyFailed = 4;

/// A configured run: the problem, integrator settings, optional invariant
/// and energy functionals, and output paths.
struct SimulationSetup {
  std::string model;
  DDEProblem problem;
  IntegratorConfig integrator;
  std::function<double(const Vec&)> casimir;  // empty when the model has none
  std::function<double(const Vec&)> energy;
  std::string output_csv = "trajectory.csv";
  std::string output_json = "summary.json";
  double initial_perturbation = 0.0;
};

/// Builds a run from a flat config; throws ConfigError naming the
/// offending key. Logs the step adjustment when h is changed to divide
/// tau.
SimulationSetup build_simulation(const Config& cfg, std::ostream& log);

int cmd_simulate(const Config& cfg, std::ostream& log);

int cmd_analyze(const RigidBodyParams& p, CoefficientVariant variant,
                const std::string& spectral_path, const std::string& hopf_path,
                std::ostream& log);

struct SweepRow {
  double tau = 0.0;
  bool ok = false;
  bool decayed = false;
  bool oscillating = false;
  double amplitude = 0.0;
  double period = 0.0;
  std::string error;
};

/// Simulates a fixed small perturbation of Omega_1 for each tau; rows are
/// independent and execute concurrently, output ordered by tau.
std::vector<SweepRow> run_sweep(const RigidBodyParams& base, double eps,
                                const std::vector<double>& taus, double h,
                                double t_end);

int cmd_sweep(const Config& cfg, double tau_min, double tau_max, int points,
              std::ostream& log);

int cmd_verify(const std::string& fault_key, const std::string& out_path,
               std::ostream& log);

}  // namespace app

/// One entry of the verification battery.
struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Runs every module's invariant battery. A non-empty fault key injects a
/// deliberate defect (supported: "structure_constant") so the harness
/// itself can be exercised.
std::vector<CheckResult> run_verification(const std::string& fault_key = "");

}  // namespace delaylp
