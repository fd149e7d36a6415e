// delaylp: simulate dissipative delay systems with geometric structure and
// run the rigid-body stability / Hopf analysis pipeline.
//
//   delaylp simulate --config run.cfg
//   delaylp analyze --I1 0.8 --I2 0.5 --I3 0.4 --alpha 0.3 --m 1.5
//   delaylp sweep --config run.cfg --tau-min 0.1 --tau-max 1.1 --points 15
//   delaylp verify [--fault-inject structure_constant]

#include <iostream>

#include <CLI11.hpp>

#include "delaylp/app.hpp"

int main(int argc, char** argv) {
  using namespace delaylp;

  CLI::App cli{"delay Lie-Poisson simulation and Hopf analysis"};
  cli.require_subcommand(1);

  std::string config_path;
  auto* simulate = cli.add_subcommand("simulate", "integrate a configured model");
  simulate->add_option("--config", config_path, "flat key = value config file")
      ->required();

  RigidBodyParams params;
  params.I1 = 0.8;
  params.I2 = 0.5;
  params.I3 = 0.4;
  params.alpha = 0.3;
  params.m = 1.5;
  std::string variant_name = "determinant";
  std::string spectral_path = "spectral_report.json";
  std::string hopf_path = "hopf_report.json";
  auto* analyze =
      cli.add_subcommand("analyze", "linear stability and Hopf pipeline");
  analyze->add_option("--I1", params.I1, "moment of inertia I1");
  analyze->add_option("--I2", params.I2, "moment of inertia I2");
  analyze->add_option("--I3", params.I3, "moment of inertia I3");
  analyze->add_option("--alpha", params.alpha, "dissipation coefficient");
  analyze->add_option("--m", params.m, "equilibrium momentum magnitude");
  analyze->add_option("--variant", variant_name,
                      "characteristic coefficients: determinant | paper");
  analyze->add_option("--spectral-out", spectral_path, "spectral report path");
  analyze->add_option("--hopf-out", hopf_path, "hopf report path");

  std::string sweep_config;
  double tau_min = 0.0, tau_max = 0.0;
  int points = 0;
  auto* sweep = cli.add_subcommand("sweep", "delay sweep around the Hopf point");
  sweep->add_option("--config", sweep_config, "flat key = value config file")
      ->required();
  sweep->add_option("--tau-min", tau_min, "smallest delay")->required();
  sweep->add_option("--tau-max", tau_max, "largest delay")->required();
  sweep->add_option("--points", points, "number of delays")->required();

  std::string fault_key;
  std::string verify_out = "verify_report.json";
  auto* verify = cli.add_subcommand("verify", "run the invariant battery");
  verify->add_option("--fault-inject", fault_key,
                     "deliberately break an invariant (structure_constant)");
  verify->add_option("--out", verify_out, "verification report path");

  CLI11_PARSE(cli, argc, argv);

  try {
    if (simulate->parsed())
      return app::cmd_simulate(Config::load(config_path), std::cout);
    if (analyze->parsed()) {
      CoefficientVariant variant;
      if (variant_name == "determinant")
        variant = CoefficientVariant::DeterminantDerived;
      else if (variant_name == "paper")
        variant = CoefficientVariant::PublishedForm;
      else {
        std::cout << "config error: --variant must be determinant or paper\n";
        return app::kExitConfigError;
      }
      return app::cmd_analyze(params, variant, spectral_path, hopf_path,
                              std::cout);
    }
    if (sweep->parsed())
      return app::cmd_sweep(Config::load(sweep_config), tau_min, tau_max, points,
                            std::cout);
    if (verify->parsed()) return app::cmd_verify(fault_key, verify_out, std::cout);
  } catch (const ConfigError& e) {
    std::cout << "config error: " << e.what() << "\n";
    return app::kExitConfigError;
  } catch (const std::exception& e) {
    std::cout << "error: " << e.what() << "\n";
    return app::kExitConfigError;
  }
  return app::kExitConfigError;
}
