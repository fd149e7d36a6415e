#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "delaylp/app.hpp"

using namespace delaylp;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("delaylp_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int counter;
};
int TempDir::counter = 0;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("flat config parsing") {
  const Config cfg = Config::parse(
      "# a comment\n"
      "model = rigid_body\n"
      "h = 1e-3   # trailing comment\n"
      "t_end = 50\n"
      "flags = 1, 2.5, -3\n"
      "quiet = true\n");
  CHECK(cfg.get_string("model") == "rigid_body");
  CHECK(cfg.get_double("h") == 1e-3);
  CHECK(cfg.get_int("t_end") == 50);
  CHECK(cfg.get_bool("quiet", false));
  CHECK(cfg.get_doubles("flags") == std::vector<double>{1.0, 2.5, -3.0});

  SUBCASE("missing keys are named") {
    try {
      cfg.get_double("step");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("step") != std::string::npos);
    }
  }
  SUBCASE("bad numbers are named") {
    const Config bad = Config::parse("h = fast\n");
    try {
      bad.get_double("h");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("'h'") != std::string::npos);
      CHECK(std::string(e.what()).find("fast") != std::string::npos);
    }
  }
  SUBCASE("lines without assignment are rejected") {
    CHECK_THROWS_AS(Config::parse("just words\n"), ConfigError);
  }
}

TEST_CASE("simulate: conservative equilibrium run") {
  TempDir tmp;
  std::ostringstream log;
  const Config cfg = Config::parse(
      "model = rigid_body\n"
      "alpha = 0\n"
      "tau = 0.5\n"
      "h = 1e-2\n"
      "t_end = 5\n"
      "initial = constant\n"
      "initial_values = 1.5, 0, 0\n"
      "output_csv = " + tmp.file("t.csv") + "\n"
      "output_json = " + tmp.file("s.json") + "\n");
  CHECK(app::cmd_simulate(cfg, log) == app::kExitSuccess);

  const auto summary = nlohmann::json::parse(slurp(tmp.file("s.json")));
  CHECK(summary["schema_version"] == 1);
  CHECK(summary["status"] == "ok");
  CHECK(summary["zero_motion"].get<bool>());
  CHECK(summary["casimir_drift"].get<double>() <= 1e-12);

  const std::string csv = slurp(tmp.file("t.csv"));
  CHECK(csv.rfind("t,x1,x2,x3,dx1,dx2,dx3\n", 0) == 0);
}

TEST_CASE("simulate: unknown model names the field and exits 1") {
  TempDir tmp;
  std::ostringstream log;
  const Config cfg = Config::parse("model = pendulum\n");
  CHECK(app::cmd_simulate(cfg, log) == app::kExitConfigError);
  CHECK(log.str().find("model") != std::string::npos);
  CHECK(log.str().find("pendulum") != std::string::npos);
}

TEST_CASE("simulate: byte-identical CSV across two invocations") {
  TempDir tmp;
  std::ostringstream log;
  auto run = [&](const std::string& name) {
    const Config cfg = Config::parse(
        "model = rigid_body\n"
        "h = 1e-2\n"
        "t_end = 10\n"
        "initial = equilibrium_perturbation\n"
        "perturbation_eps = 1e-3\n"
        "output_csv = " + tmp.file(name) + "\n"
        "output_json = " + tmp.file(name + ".json") + "\n");
    REQUIRE(app::cmd_simulate(cfg, log) == app::kExitSuccess);
    return slurp(tmp.file(name));
  };
  CHECK(run("a.csv") == run("b.csv"));
}

TEST_CASE("simulate: divergence guard exit code") {
  TempDir tmp;
  std::ostringstream log;
  const Config cfg = Config::parse(
      "model = rigid_body\n"
      "h = 1e-2\n"
      "t_end = 5\n"
      "divergence_guard = 1.0\n"  // |M(0)| already exceeds the guard
      "initial = equilibrium_perturbation\n"
      "output_csv = " + tmp.file("t.csv") + "\n"
      "output_json = " + tmp.file("s.json") + "\n");
  CHECK(app::cmd_simulate(cfg, log) == app::kExitDivergence);
  const auto summary = nlohmann::json::parse(slurp(tmp.file("s.json")));
  CHECK(summary["status"] == "diverged");
  CHECK(summary.contains("failure_time"));
}

TEST_CASE("simulate: step adjustment to divide tau is logged") {
  TempDir tmp;
  std::ostringstream log;
  const Config cfg = Config::parse(
      "model = rigid_body\n"
      "tau = 0.5\n"
      "h = 0.3\n"
      "t_end = 2\n"
      "initial = equilibrium_perturbation\n"
      "output_csv = " + tmp.file("t.csv") + "\n"
      "output_json = " + tmp.file("s.json") + "\n");
  CHECK(app::cmd_simulate(cfg, log) == app::kExitSuccess);
  CHECK(log.str().find("adjusted") != std::string::npos);
}

TEST_CASE("simulate: tabulated initial function") {
  TempDir tmp;
  std::ostringstream log;
  const Config cfg = Config::parse(
      "model = circle\n"
      "c = 0.5\n"
      "h = 0.01\n"
      "t_end = 2\n"
      "initial = tabulated\n"
      "table_t = -1, -0.5, 0\n"
      "table_x1 = 0.2, 0.3, 0.1\n"
      "output_csv = " + tmp.file("t.csv") + "\n"
      "output_json = " + tmp.file("s.json") + "\n");
  CHECK(app::cmd_simulate(cfg, log) == app::kExitSuccess);

  SUBCASE("column length mismatches are named") {
    const Config bad = Config::parse(
        "model = circle\n"
        "initial = tabulated\n"
        "table_t = -1, 0\n"
        "table_x1 = 0.2\n");
    std::ostringstream log2;
    CHECK(app::cmd_simulate(bad, log2) == app::kExitConfigError);
    CHECK(log2.str().find("table_x1") != std::string::npos);
  }
}

TEST_CASE("analyze: reports and exit codes") {
  TempDir tmp;
  std::ostringstream log;
  RigidBodyParams p;
  p.I1 = 0.8;
  p.I2 = 0.5;
  p.I3 = 0.4;
  p.alpha = 0.3;
  p.m = 1.5;

  SUBCASE("default set writes residual-validated reports") {
    CHECK(app::cmd_analyze(p, CoefficientVariant::DeterminantDerived,
                           tmp.file("spec.json"), tmp.file("hopf.json"),
                           log) == app::kExitSuccess);
    const auto spec = nlohmann::json::parse(slurp(tmp.file("spec.json")));
    const auto hopf = nlohmann::json::parse(slurp(tmp.file("hopf.json")));
    CHECK(spec["schema_version"] == 1);
    CHECK(spec["variant"] == "determinant");
    CHECK(spec["omega0"].get<double>() > 0.0);
    CHECK(spec["paper_reference_values"]["set1"]["omega0"].get<double>() ==
          doctest::Approx(3.20631));
    CHECK(spec["discrepancies"].size() >= 2);
    // beta2 = 2 Re C1 bit-exactly.
    CHECK(hopf["beta2"].get<double>() == 2.0 * hopf["C1"]["re"].get<double>());
    CHECK(hopf["discrepancy_notes"].size() >= 1);
  }
  SUBCASE("violated hypotheses exit 1") {
    RigidBodyParams bad = p;
    bad.I1 = 0.45;  // I1 < I2
    CHECK(app::cmd_analyze(bad, CoefficientVariant::DeterminantDerived,
                           tmp.file("spec.json"), tmp.file("hopf.json"),
                           log) == app::kExitConfigError);
  }
  SUBCASE("paper coefficient variant is available for comparison") {
    CHECK(app::cmd_analyze(p, CoefficientVariant::PublishedForm,
                           tmp.file("spec2.json"), tmp.file("hopf2.json"),
                           log) == app::kExitSuccess);
    const auto spec = nlohmann::json::parse(slurp(tmp.file("spec2.json")));
    CHECK(spec["variant"] == "published");
    CHECK(spec["a"].get<double>() == doctest::Approx(1.6875));
  }
}

TEST_CASE("sweep: single point degenerates to one simulation row") {
  TempDir tmp;
  std::ostringstream log;
  const Config cfg = Config::parse(
      "h = 2e-3\n"
      "t_end = 40\n"
      "perturbation_eps = 1e-3\n"
      "output_csv = " + tmp.file("sweep.csv") + "\n");
  CHECK(app::cmd_sweep(cfg, 0.35, 0.35, 1, log) == app::kExitSuccess);
  const std::string csv = slurp(tmp.file("sweep.csv"));
  CHECK(csv.rfind("tau,ok,decayed,oscillating,amplitude,period\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);  // header + one row
}

TEST_CASE("sweep: delays below the first instability all decay") {
  TempDir tmp;
  std::ostringstream log;
  const Config cfg = Config::parse(
      "h = 2e-3\n"
      "t_end = 80\n"
      "perturbation_eps = 1e-3\n"
      "output_csv = " + tmp.file("sweep.csv") + "\n");
  // tau0 ~ 0.735 and tau_c ~ 1.053 at the default parameters; the binding
  // bound is min(tau_c, tau0).
  CHECK(app::cmd_sweep(cfg, 0.07, 0.58, 4, log) == app::kExitSuccess);
  std::istringstream csv(slurp(tmp.file("sweep.csv")));
  std::string line;
  std::getline(csv, line);  // header
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    std::istringstream fields(line);
    std::string tau, ok, decayed;
    std::getline(fields, tau, ',');
    std::getline(fields, ok, ',');
    std::getline(fields, decayed, ',');
    CHECK(ok == "1");
    CHECK(decayed == "1");
  }
  CHECK(rows == 4);
}

TEST_CASE("verify: clean battery exits 0, fault injection exits 4") {
  TempDir tmp;
  std::ostringstream log;
  CHECK(app::cmd_verify("", tmp.file("verify.json"), log) == app::kExitSuccess);
  const auto report = nlohmann::json::parse(slurp(tmp.file("verify.json")));
  CHECK(report["pass"].get<bool>());
  CHECK(report["failed"].empty());

  std::ostringstream log2;
  CHECK(app::cmd_verify("structure_constant", tmp.file("verify2.json"), log2) ==
        app::kExitVerifyFailed);
  const auto broken = nlohmann::json::parse(slurp(tmp.file("verify2.json")));
  CHECK_FALSE(broken["pass"].get<bool>());
  bool jacobi_named = false;
  for (const auto& name : broken["failed"])
    if (name.get<std::string>().find("jacobi") != std::string::npos)
      jacobi_named = true;
  CHECK(jacobi_named);
}

TEST_CASE("exit codes are a stable contract") {
  CHECK(app::kExitSuccess == 0);
  CHECK(app::kExitConfigError == 1);
  CHECK(app::kExitDivergence == 2);
  CHECK(app::kExitNoCrossing == 3);
  CHECK(app::kExitVerifyFailed == 4);
}
