#include "delaylp/app.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <thread>

namespace delaylp {
namespace app {

namespace {

using nlohmann::json;

Vec parse_vector(const Config& cfg, const std::string& key, int expected) {
  const std::vector<double> values = cfg.get_doubles(key);
  if (expected > 0 && static_cast<int>(values.size()) != expected)
    throw ConfigError("config key '" + key + "': expected " +
                      std::to_string(expected) + " values, got " +
                      std::to_string(values.size()));
  Vec out(values.size());
  for (size_t i = 0; i < values.size(); ++i) out[i] = values[i];
  return out;
}

InitialFunction build_initial(const Config& cfg, int dimension, double tau,
                              const Vec& equilibrium, double* eps_out) {
  const std::string kind = cfg.get_string("initial", "constant");
  if (kind == "constant") {
    return InitialFunction::constant(parse_vector(cfg, "initial_values", dimension),
                                     tau);
  }
  if (kind == "equilibrium_perturbation") {
    if (equilibrium.size() != dimension)
      throw ConfigError("initial = equilibrium_perturbation is only available "
                        "for models with a named equilibrium (rigid_body)");
    const double eps = cfg.get_double("perturbation_eps", 1e-3);
    Vec dir(dimension);
    if (cfg.has("perturbation_direction")) {
      dir = parse_vector(cfg, "perturbation_direction", dimension);
    } else {
      dir.setZero();
      dir[1] = 1.0;
    }
    if (eps_out) *eps_out = eps * dir.norm();
    return InitialFunction::constant(equilibrium + eps * dir, tau);
  }
  if (kind == "tabulated") {
    const std::vector<double> times = cfg.get_doubles("table_t");
    std::vector<Vec> states;
    for (size_t i = 0; i < times.size(); ++i) {
      if (i > 0 && times[i] <= times[i - 1])
        throw ConfigError("config key 'table_t': times must be increasing");
    }
    std::vector<std::vector<double>> columns;
    for (int c = 1; c <= dimension; ++c) {
      const std::string key = "table_x" + std::to_string(c);
      const std::vector<double> col = cfg.get_doubles(key);
      if (col.size() != times.size())
        throw ConfigError("config key '" + key + "': length differs from table_t");
      columns.push_back(col);
    }
    for (size_t i = 0; i < times.size(); ++i) {
      Vec x(dimension);
      for (int c = 0; c < dimension; ++c) x[c] = columns[c][i];
      states.push_back(x);
    }
    auto phi = [times, states](double t) -> Vec {
      if (t <= times.front()) return states.front();
      if (t >= times.back()) return states.back();
      size_t i = 1;
      while (times[i] < t) ++i;
      const double s = (t - times[i - 1]) / (times[i] - times[i - 1]);
      return (1.0 - s) * states[i - 1] + s * states[i];
    };
    return InitialFunction{phi, tau};
  }
  throw ConfigError("config key 'initial': unknown kind '" + kind +
                    "' (constant | equilibrium_perturbation | tabulated)");
}

RigidBodyParams rigid_params_from(const Config& cfg) {
  RigidBodyParams p;
  p.I1 = cfg.get_double("I1", 0.8);
  p.I2 = cfg.get_double("I2", 0.5);
  p.I3 = cfg.get_double("I3", 0.4);
  p.alpha = cfg.get_double("alpha", 0.3);
  p.tau = cfg.get_double("tau", 0.5);
  p.m = cfg.get_double("m", 1.5);
  p.c2_scaling = cfg.get_bool("c2_scaling", false);
  return p;
}

}  // namespace

SimulationSetup build_simulation(const Config& cfg, std::ostream& log) {
  SimulationSetup setup;
  setup.model = cfg.get_string("model");
  setup.output_csv = cfg.get_string("output_csv", "trajectory.csv");
  setup.output_json = cfg.get_string("output_json", "summary.json");

  double tau = 0.0;
  Vec equilibrium;

  if (setup.model == "rigid_body") {
    RigidBodyParams p = rigid_params_from(cfg);
    tau = p.tau;
    equilibrium = Vec(3);
    const Vec3 M1 = p.equilibrium_momentum();
    equilibrium << M1[0], M1[1], M1[2];
    setup.problem = make_rigid_body_problem(
        p, build_initial(cfg, 3, tau, equilibrium, &setup.initial_perturbation));
    setup.casimir = [](const Vec& x) { return x.norm(); };
    setup.energy = [p](const Vec& x) {
      return rigid_body_energy(Vec3(x[0], x[1], x[2]), p);
    };
  } else if (setup.model == "landau_lifschitz") {
    LandauLifschitzParams p;
    p.gamma_ratio = cfg.get_double("gamma_ratio", 1.0);
    p.lambda_damp = cfg.get_double("lambda_damp", 0.1);
    p.B = Vec3(cfg.get_double("B1", 0.0), cfg.get_double("B2", 0.0),
               cfg.get_double("B3", 1.0));
    p.tau = cfg.get_double("tau", 0.5);
    tau = p.tau;
    setup.problem = make_landau_lifschitz_problem(
        p, build_initial(cfg, 3, tau, Vec(), nullptr));
    setup.casimir = [](const Vec& x) { return x.norm(); };
    setup.energy = [p](const Vec& x) {
      return landau_lifschitz_energy(Vec3(x[0], x[1], x[2]), p);
    };
  } else if (setup.model == "circle") {
    tau = 1.0;
    setup.problem = make_circle_problem(cfg.get_double("c", 1.0),
                                        build_initial(cfg, 1, tau, Vec(), nullptr));
  } else if (setup.model == "cylinder") {
    tau = 1.0;
    setup.problem =
        make_cylinder_problem(cfg.get_double("b", 0.5), cfg.get_double("c", 1.0),
                              build_initial(cfg, 2, tau, Vec(), nullptr));
  } else if (setup.model == "sphere") {
    tau = cfg.get_double("tau", 1.0);
    setup.problem =
        make_sphere_problem(tau, build_initial(cfg, 3, tau, Vec(), nullptr));
    setup.casimir = [](const Vec& x) { return x.squaredNorm(); };
  } else if (setup.model == "neuron") {
    NeuronParams p;
    p.a = cfg.get_double("a", 1.0);
    p.b = cfg.get_double("b", 1.0);
    p.c = cfg.get_double("c", 1.0);
    p.d = cfg.get_double("d", 1.0);
    p.h_gain = cfg.get_double("h_gain", 0.5);
    p.n = cfg.get_int("n", 1);
    tau = cfg.get_double("tau", 1.0);
    InitialFunction init = build_initial(cfg, 2 * p.n, tau, Vec(), nullptr);
    setup.problem = make_neuron_problem(p, std::move(init));
  } else if (setup.model == "machine_tool") {
    MachineToolParams p;
    p.k_damp = cfg.get_double("k_damp", 0.05);
    p.omega_nat = cfg.get_double("omega_nat", 1.0);
    p.mass = cfg.get_double("mass", 1.0);
    p.k1 = cfg.get_double("k1", 1.0);
    p.beta = cfg.get_double("beta", 1.0);
    p.Omega_rot = cfg.get_double("Omega_rot", 2.0 * M_PI);
    tau = p.delay();
    setup.problem =
        make_machine_tool_problem(p, build_initial(cfg, 2, tau, Vec(), nullptr));
  } else {
    throw ConfigError("config key 'model': unknown model '" + setup.model + "'");
  }

  const double h_requested = cfg.get_double("h", 1e-3);
  if (h_requested <= 0.0) throw ConfigError("config key 'h': must be positive");
  const double h = adjust_step_to_delay(h_requested, tau);
  if (std::abs(h - h_requested) > 1e-15 * h_requested)
    log << "note: step adjusted from " << h_requested << " to " << h
        << " so tau/h is an integer\n";

  double t_end = cfg.get_double("t_end", 10.0);
  if (t_end <= 0.0) throw ConfigError("config key 't_end': must be positive");
  const double steps = std::ceil(t_end / h - 1e-9);
  if (std::abs(steps * h - t_end) > 1e-9 * t_end) {
    t_end = steps * h;
    log << "note: t_end adjusted to " << t_end << " (a whole number of steps)\n";
  }

  setup.integrator.step = h;
  setup.integrator.t_end = t_end;
  setup.integrator.divergence_guard = cfg.get_double("divergence_guard", 1e6);
  setup.integrator.prune_history = cfg.get_bool("prune_history", false);
  return setup;
}

int cmd_simulate(const Config& cfg, std::ostream& log) {
  SimulationSetup setup;
  try {
    setup = build_simulation(cfg, log);
  } catch (const std::exception& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  Trajectory traj;
  json summary;
  summary["schema_version"] = 1;
  summary["model"] = setup.model;
  try {
    traj = integrate(setup.problem, setup.integrator);
  } catch (const DivergenceError& e) {
    log << "divergence: " << e.what() << "\n";
    summary["status"] = "diverged";
    summary["failure_time"] = e.t;
    std::ofstream(setup.output_json) << summary.dump(2) << "\n";
    return kExitDivergence;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  std::ofstream csv(setup.output_csv);
  if (!csv) {
    log << "config error: cannot write '" << setup.output_csv << "'\n";
    return kExitConfigError;
  }
  traj.write_csv(csv);

  summary["status"] = "ok";
  summary["t_end"] = traj.t_max();
  summary["steps"] = traj.size();
  const Vec final_state = traj.nodes().back().x;
  summary["final_state"] = std::vector<double>(final_state.data(),
                                               final_state.data() + final_state.size());

  double motion = 0.0;
  const Vec start = traj.state(0.0);
  for (const auto& node : traj.nodes())
    if (node.t >= 0.0)
      motion = std::max(motion, (node.x - start).lpNorm<Eigen::Infinity>());
  summary["max_state_motion"] = motion;
  summary["zero_motion"] = motion <= 1e-12;

  if (setup.casimir) {
    summary["casimir_drift"] = casimir_drift(traj, setup.casimir);
  }
  if (setup.energy) {
    json profile = json::array();
    const size_t stride = std::max<size_t>(1, traj.size() / 200);
    for (size_t i = 0; i < traj.size(); i += stride) {
      const auto& node = traj.nodes()[i];
      if (node.t < 0.0) continue;
      profile.push_back({{"t", node.t}, {"E", setup.energy(node.x)}});
    }
    summary["energy_profile"] = profile;
    summary["energy_initial"] = setup.energy(traj.state(0.0));
    summary["energy_final"] = setup.energy(final_state);
  }

  std::ofstream(setup.output_json) << summary.dump(2) << "\n";
  log << "wrote " << setup.output_csv << " and " << setup.output_json << "\n";
  return kExitSuccess;
}

int cmd_analyze(const RigidBodyParams& p, CoefficientVariant variant,
                const std::string& spectral_path, const std::string& hopf_path,
                std::ostream& log) {
  AnalysisResult result;
  try {
    result = analyze_rigid_body(p, variant);
  } catch (const NoCrossingError& e) {
    log << "no Hopf crossing: " << e.what() << "\n";
    // Report what the linear analysis produced, with tracking evidence.
    try {
      json doc;
      doc["schema_version"] = 1;
      doc["status"] = "no_crossing";
      doc["detail"] = e.what();
      const SpectralCoefficients co = coefficients(p, variant);
      doc["a"] = co.a;
      doc["b"] = co.b;
      doc["c"] = co.c;
      doc["tau_c"] = critical_delay(p);
      const auto [r1, r2] = zero_delay_roots(co);
      json path = json::array();
      for (const auto& pt : track_root(co, r1, 0.0, 10.0, 100))
        path.push_back({{"tau", pt.tau},
                        {"re", pt.lambda.real()},
                        {"im", pt.lambda.imag()}});
      doc["tracked_root"] = path;
      std::ofstream(spectral_path) << doc.dump(2) << "\n";
    } catch (const std::exception&) {
    }
    return kExitNoCrossing;
  } catch (const std::invalid_argument& e) {
    log << "hypothesis violation: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  std::ofstream(spectral_path) << build_spectral_report(result).dump(2) << "\n";
  if (result.hopf_stage) {
    std::ofstream(hopf_path) << build_hopf_report(result).dump(2) << "\n";
    log << "omega0 = " << result.hp.omega0 << ", tau0 = " << result.hp.tau0
        << ", tau_c = " << result.tau_c << ", mu2 = " << result.quantities.mu2
        << ", beta2 = " << result.quantities.beta2 << "\n";
  } else {
    json stub;
    stub["schema_version"] = 1;
    stub["status"] = "not_computed";
    stub["detail"] =
        "the published-coefficient variant serves the characteristic-equation "
        "comparison; the center-manifold stage runs on the determinant-derived "
        "coefficients";
    std::ofstream(hopf_path) << stub.dump(2) << "\n";
    log << "omega0 = " << result.hp.omega0 << ", tau0 = " << result.hp.tau0
        << ", tau_c = " << result.tau_c << " (comparison variant, no normal form)\n";
  }
  log << "wrote " << spectral_path << " and " << hopf_path << "\n";
  return kExitSuccess;
}

std::vector<SweepRow> run_sweep(const RigidBodyParams& base, double eps,
                                const std::vector<double>& taus, double h,
                                double t_end) {
  std::vector<SweepRow> rows(taus.size());
  std::atomic<size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= taus.size()) return;
      SweepRow& row = rows[i];
      row.tau = taus[i];
      try {
        RigidBodyParams p = base;
        p.tau = taus[i];
        const double h_run = adjust_step_to_delay(h, p.tau);
        const double steps = std::ceil(t_end / h_run - 1e-9);

        Vec3 M0 = p.equilibrium_momentum();
        M0[1] += eps;
        Vec init(3);
        init << M0[0], M0[1], M0[2];

        IntegratorConfig icfg;
        icfg.step = h_run;
        icfg.t_end = steps * h_run;
        icfg.prune_history = false;

        const Trajectory traj = integrate(
            make_rigid_body_problem(p, InitialFunction::constant(init, p.tau)),
            icfg);
        const CycleEstimate est = detect_limit_cycle(traj, 1, 0.5);
        row.amplitude = est.amplitude;
        row.period = est.period;
        row.decayed = est.amplitude < 0.1 * eps;
        row.oscillating = est.converged && est.amplitude > eps;
        row.ok = true;
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
    }
  };

  const size_t n_workers =
      std::min<size_t>(std::max(1u, std::thread::hardware_concurrency()),
                       taus.size());
  std::vector<std::thread> pool;
  for (size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return rows;
}

int cmd_sweep(const Config& cfg, double tau_min, double tau_max, int points,
              std::ostream& log) {
  if (points < 1 || tau_max < tau_min) {
    log << "config error: invalid sweep range\n";
    return kExitConfigError;
  }
  RigidBodyParams base;
  double eps, h, t_end;
  std::string out_path;
  try {
    base = rigid_params_from(cfg);
    eps = cfg.get_double("perturbation_eps", 1e-3);
    h = cfg.get_double("h", 1e-3);
    t_end = cfg.get_double("t_end", 150.0);
    out_path = cfg.get_string("output_csv", "sweep.csv");
  } catch (const std::exception& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  std::vector<double> taus;
  for (int i = 0; i < points; ++i)
    taus.push_back(points == 1 ? tau_min
                               : tau_min + (tau_max - tau_min) * i / (points - 1));

  const auto rows = run_sweep(base, eps, taus, h, t_end);

  std::ofstream csv(out_path);
  if (!csv) {
    log << "config error: cannot write '" << out_path << "'\n";
    return kExitConfigError;
  }
  csv << "tau,ok,decayed,oscillating,amplitude,period\n";
  char buf[64];
  int failures = 0;
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", row.tau);
    csv << buf << "," << (row.ok ? 1 : 0) << "," << (row.decayed ? 1 : 0) << ","
        << (row.oscillating ? 1 : 0) << ",";
    std::snprintf(buf, sizeof buf, "%.17g", row.amplitude);
    csv << buf << ",";
    std::snprintf(buf, sizeof buf, "%.17g", row.period);
    csv << buf << "\n";
    if (!row.ok) {
      ++failures;
      log << "tau = " << row.tau << " failed: " << row.error << "\n";
    }
  }
  log << "wrote " << out_path << " (" << rows.size() << " rows, " << failures
      << " failures)\n";
  return kExitSuccess;
}

int cmd_verify(const std::string& fault_key, const std::string& out_path,
               std::ostream& log) {
  const auto results = run_verification(fault_key);
  json doc;
  doc["schema_version"] = 1;
  json checks = json::array();
  std::vector<std::string> failed;
  for (const auto& r : results) {
    checks.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    if (!r.pass) failed.push_back(r.name);
  }
  doc["checks"] = checks;
  doc["failed"] = failed;
  doc["pass"] = failed.empty();
  if (!out_path.empty()) std::ofstream(out_path) << doc.dump(2) << "\n";

  for (const auto& r : results)
    log << (r.pass ? "PASS " : "FAIL ") << r.name
        << (r.detail.empty() ? "" : "  (" + r.detail + ")") << "\n";
  if (!failed.empty()) {
    log << failed.size() << " invariant(s) failed\n";
    return kExitVerifyFailed;
  }
  return kExitSuccess;
}

}  // namespace app
}  // namespace delaylp
