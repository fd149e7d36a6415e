#include <cmath>
#include <random>
#include <sstream>

#include "delaylp/app.hpp"
#include "delaylp/oracles.hpp"

namespace delaylp {

namespace {

using app::SweepRow;

std::mt19937& rng() {
  static std::mt19937 gen(0x5eed);
  return gen;
}

double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

Vec random_vec(int n, double scale = 1.0) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform(-scale, scale);
  return v;
}

/// so(3) structure constants transported through a random invertible basis
/// change: a cheap source of valid (Jacobi-satisfying) random specs.
std::vector<double> transformed_so3_tensor(const Mat& P) {
  const AlgebraSpec so3 = AlgebraSpec::so3();
  const int n = 3;
  const Mat Pinv = P.inverse();
  std::vector<double> c(n * n * n, 0.0);
  for (int d = 0; d < n; ++d)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double sum = 0.0;
        for (int k = 0; k < n; ++k)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              sum += Pinv(d, k) * so3.structure(k, i, j) * P(i, a) * P(j, b);
        c[(d * n + a) * n + b] = sum;
      }
  return c;
}

Mat random_invertible3() {
  for (;;) {
    Mat P = Mat::Random(3, 3) + 2.0 * Mat::Identity(3, 3);
    if (std::abs(P.determinant()) > 0.3) return P;
  }
}

RigidBodyParams default_params() {
  RigidBodyParams p;
  p.I1 = 0.8;
  p.I2 = 0.5;
  p.I3 = 0.4;
  p.alpha = 0.3;
  p.m = 1.5;
  p.tau = 0.5;
  return p;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

struct Battery {
  std::vector<CheckResult>& out;

  void add(const std::string& name, bool pass, const std::string& detail = {}) {
    out.push_back({name, pass, detail});
  }

  template <typename Fn>
  void guarded(const std::string& name, Fn&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      add(name, false, std::string("exception: ") + e.what());
    }
  }
};

}  // namespace

std::vector<CheckResult> run_verification(const std::string& fault_key) {
  std::vector<CheckResult> results;
  Battery battery{results};

  // --- algebra ------------------------------------------------------------
  {
    const AlgebraSpec so3 = AlgebraSpec::so3();
    std::vector<double> tensor(3 * 3 * 3);
    for (int d = 0; d < 3; ++d)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          tensor[(d * 3 + a) * 3 + b] = so3.structure(d, a, b);
    if (fault_key == "structure_constant") {
      // Antisymmetric perturbation giving [e1,e2] an e1 component:
      // antisymmetry survives, Jacobi breaks. (Merely rescaling one
      // bracket would be a basis change and still a Lie algebra.)
      tensor[(0 * 3 + 0) * 3 + 1] += 1e-3;
      tensor[(0 * 3 + 1) * 3 + 0] -= 1e-3;
    } else if (!fault_key.empty()) {
      battery.add("fault_injection", false, "unknown fault key '" + fault_key + "'");
    }
    const std::string tensor_fail = check_structure_tensor(3, tensor);
    battery.add("algebra.antisymmetry", tensor_fail != "antisymmetry");
    battery.add("algebra.jacobi", tensor_fail != "jacobi",
                tensor_fail == "jacobi" ? "Jacobi identity violated" : "");

    battery.guarded("algebra.bracket_properties", [&] {
      const AlgebraSpec spec(3, transformed_so3_tensor(random_invertible3()),
                             Mat::Identity(3, 3), Casimir::constant_one());
      double worst = 0.0;
      for (int i = 0; i < 100; ++i) {
        const Vec xi = random_vec(3), eta = random_vec(3), zeta = random_vec(3);
        worst = std::max(worst,
                         (spec.bracket(xi, eta) + spec.bracket(eta, xi)).norm());
        const Vec jac = spec.bracket(spec.bracket(xi, eta), zeta) +
                        spec.bracket(spec.bracket(eta, zeta), xi) +
                        spec.bracket(spec.bracket(zeta, xi), eta);
        worst = std::max(worst, jac.norm());
      }
      battery.add("algebra.bracket_properties", worst <= 1e-12 * 100,
                  "worst residual " + fmt(worst));
    });

    battery.guarded("algebra.coadjoint_pairing", [&] {
      double worst = 0.0;
      for (int i = 0; i < 100; ++i) {
        const Vec xi = random_vec(3), eta = random_vec(3), mu = random_vec(3);
        const double lhs = so3.pairing(so3.coadjoint(xi, mu), eta);
        const double rhs = so3.pairing(mu, so3.bracket(xi, eta));
        worst = std::max(worst, std::abs(lhs - rhs));
      }
      battery.add("algebra.coadjoint_pairing", worst <= 1e-12,
                  "worst gap " + fmt(worst));
    });

    battery.guarded("algebra.projection_idempotent", [&] {
      Mat gamma(3, 3);
      gamma << 2.0, 0.2, 0.0, 0.2, 1.0, 0.1, 0.0, 0.1, 1.5;
      const AlgebraSpec spec(3, transformed_so3_tensor(Mat::Identity(3, 3)),
                             gamma, Casimir::norm_squared());
      double worst = 0.0;
      for (int i = 0; i < 50; ++i) {
        const Vec xi = random_vec(3), mu = random_vec(3);
        const Vec once = spec.project_complement(xi, mu);
        const Vec twice = spec.project_complement(once, mu);
        worst = std::max(worst, (once - twice).norm());
      }
      battery.add("algebra.projection_idempotent", worst <= 1e-12,
                  "worst gap " + fmt(worst));
    });

    battery.guarded("algebra.so3_cross_table", [&] {
      bool exact = true;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          Vec ea = Vec::Zero(3), eb = Vec::Zero(3);
          ea[a] = 1.0;
          eb[b] = 1.0;
          const Vec br = so3.bracket(ea, eb);
          const Vec3 cr = Vec3(ea[0], ea[1], ea[2]).cross(Vec3(eb[0], eb[1], eb[2]));
          for (int d = 0; d < 3; ++d)
            if (br[d] != cr[d]) exact = false;
        }
      battery.add("algebra.so3_cross_table", exact);
    });
  }

  // --- history --------------------------------------------------------------
  battery.guarded("history.interpolation_order", [&] {
    auto build = [](double h) {
      Trajectory t;
      for (double x = 0.0; x <= M_PI + 1e-12; x += h) {
        Vec s(1), d(1);
        s[0] = std::sin(x);
        d[0] = std::cos(x);
        t.append(x, s, d);
      }
      return t;
    };
    auto max_err = [](const Trajectory& t) {
      double worst = 0.0;
      for (int i = 0; i < 1000; ++i) {
        const double x = t.t_min() + (t.t_max() - t.t_min()) * (i + 0.5) / 1000;
        worst = std::max(worst, std::abs(t.state(x)[0] - std::sin(x)));
      }
      return worst;
    };
    const double e1 = max_err(build(0.1));
    const double e2 = max_err(build(0.05));
    const double ratio = e1 / e2;
    battery.add("history.interpolation_order",
                e1 <= 5e-6 && ratio >= 12.0 && ratio <= 20.0,
                "err(h=0.1) = " + fmt(e1) + ", ratio = " + fmt(ratio));
  });

  battery.guarded("history.node_continuity", [&] {
    Trajectory t;
    for (double x = 0.0; x <= 2.0 + 1e-12; x += 0.25) {
      Vec s(1), d(1);
      s[0] = std::exp(-x) * std::cos(3 * x);
      d[0] = -std::exp(-x) * (std::cos(3 * x) + 3 * std::sin(3 * x));
      t.append(x, s, d);
    }
    double worst = 0.0;
    for (size_t i = 1; i + 1 < t.size(); ++i) {
      const double x = t.nodes()[i].t;
      const double left = t.state(x - 1e-13)[0];
      const double right = t.state(x + 1e-13)[0];
      worst = std::max(worst, std::abs(left - right));
    }
    battery.add("history.node_continuity", worst <= 1e-12,
                "worst jump " + fmt(worst));
  });

  // --- integrator -----------------------------------------------------------
  battery.guarded("integrator.zero_delay_energy", [&] {
    DDEProblem problem;
    problem.dimension = 2;
    problem.tau = 0.0;
    Vec x0(2);
    x0 << 1.0, 0.0;
    problem.initial = InitialFunction::constant(x0, 0.0);
    problem.rhs = [](double, const Vec& x, const Vec&) {
      Vec f(2);
      f << x[1], -x[0];
      return f;
    };
    IntegratorConfig cfg{0.01, 10.0};
    const Trajectory t = integrate(problem, cfg);
    double drift = 0.0;
    for (const auto& n : t.nodes())
      drift = std::max(drift, std::abs(n.x.squaredNorm() - 1.0));
    battery.add("integrator.zero_delay_energy", drift <= 1e-8,
                "drift " + fmt(drift));
  });

  battery.guarded("integrator.piecewise_analytic", [&] {
    DDEProblem problem;
    problem.dimension = 1;
    problem.tau = 1.0;
    Vec one(1);
    one << 1.0;
    problem.initial = InitialFunction::constant(one, 1.0);
    problem.rhs = [](double, const Vec&, const Vec& xd) { return Vec(-xd); };
    IntegratorConfig cfg{1e-3, 2.0};
    const Trajectory t = integrate(problem, cfg);
    const double x1 = t.state(1.0)[0];
    const double x2 = t.state(2.0)[0];
    battery.add("integrator.piecewise_analytic",
                std::abs(x1) <= 1e-12 && std::abs(x2 + 0.5) <= 1e-10,
                "x(1) = " + fmt(x1) + ", x(2) = " + fmt(x2));
  });

  battery.guarded("integrator.determinism", [&] {
    const RigidBodyParams p = default_params();
    Vec init(3);
    init << p.m, 1e-3, -2e-3;
    const auto run = [&] {
      IntegratorConfig cfg{1e-2, 5.0};
      return integrate(
          make_rigid_body_problem(p, InitialFunction::constant(init, p.tau)), cfg);
    };
    const Trajectory a = run(), b = run();
    bool identical = a.size() == b.size();
    for (size_t i = 0; identical && i < a.size(); ++i)
      identical = a.nodes()[i].x == b.nodes()[i].x &&
                  a.nodes()[i].dx == b.nodes()[i].dx;
    battery.add("integrator.determinism", identical);
  });

  battery.guarded("integrator.fourth_order", [&] {
    const RigidBodyParams p = default_params();
    Vec init(3);
    init << 2.0, 1.0, 0.5;
    auto error_at_one = [&](double h) {
      auto run = [&](double step) {
        IntegratorConfig cfg{step, 1.0};
        return integrate(
            make_rigid_body_problem(p, InitialFunction::constant(init, p.tau)),
            cfg);
      };
      const Vec coarse = run(h).state(1.0);
      const Vec fine = run(h / 16.0).state(1.0);
      return (coarse - fine).norm();
    };
    const double e1 = error_at_one(p.tau / 32.0);
    const double e2 = error_at_one(p.tau / 64.0);
    const double ratio = e1 / e2;
    battery.add("integrator.fourth_order", ratio >= 12.0 && ratio <= 20.0,
                "ratio " + fmt(ratio));
  });

  // --- models ---------------------------------------------------------------
  battery.guarded("models.rigid_orthogonality", [&] {
    const RigidBodyParams p = default_params();
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Vec3 M = Vec3::Random() * 2.0, Md = Vec3::Random() * 2.0;
      worst = std::max(worst, std::abs(rigid_body_delay_rhs(M, Md, p).dot(M)));
    }
    battery.add("models.rigid_orthogonality", worst <= 1e-13,
                "worst M . rhs = " + fmt(worst));
  });

  battery.guarded("models.generic_matches_rigid", [&] {
    const AlgebraSpec so3 = AlgebraSpec::so3();
    const AlgebraSpec unit_casimir(
        3, transformed_so3_tensor(Mat::Identity(3, 3)), Mat::Identity(3, 3),
        Casimir::constant_one());
    RigidBodyParams p;
    p.I1 = p.I2 = p.I3 = 1.0;
    p.alpha = 1.0;
    const GradientFn grad = [](const Vec& mu) { return mu; };
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      Vec mu = random_vec(3), mud = random_vec(3);
      const Vec generic = generic_dissipative_rhs(mu, mud, unit_casimir, grad, grad);
      const Vec3 rigid = rigid_body_delay_rhs(Vec3(mu[0], mu[1], mu[2]),
                                              Vec3(mud[0], mud[1], mud[2]), p);
      const Vec gap = generic - (Vec(3) << rigid[0], rigid[1], rigid[2]).finished();
      worst = std::max(worst, gap.norm());
    }
    battery.add("models.generic_matches_rigid", worst <= 1e-12,
                "worst gap " + fmt(worst));
  });

  battery.guarded("models.lie_poisson_matches_generic", [&] {
    Mat gamma(3, 3);
    gamma << 1.4, 0.1, 0.0, 0.1, 0.9, -0.05, 0.0, -0.05, 1.1;
    const AlgebraSpec spec(3, transformed_so3_tensor(Mat::Identity(3, 3)), gamma,
                           Casimir::norm_squared());
    Mat H = Mat::Random(3, 3), K = Mat::Random(3, 3);
    H = (0.5 * (H + H.transpose())).eval();
    K = (0.5 * (K + K.transpose())).eval();
    const GradientFn grad_h = [H](const Vec& mu) { return Vec(H * mu); };
    const GradientFn grad_k = [K](const Vec& mu) { return Vec(K * mu); };
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      Vec mu = random_vec(3), mud = random_vec(3);
      if (mu.norm() < 0.2 || mud.norm() < 0.2) continue;
      const Vec a = generic_dissipative_rhs(mu, mud, spec, grad_h, grad_k);
      const Vec b = lie_poisson_delay_rhs(mu, mud, spec, grad_h, grad_k);
      worst = std::max(worst, (a - b).norm());
    }
    battery.add("models.lie_poisson_matches_generic", worst <= 1e-12,
                "worst gap " + fmt(worst));
  });

  battery.guarded("models.sphere_tangency", [&] {
    DDEProblem sphere = make_sphere_problem(
        1.0, InitialFunction::constant((Vec(3) << 1.0, 0.0, 0.0).finished(), 1.0));
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Vec q = random_vec(3), qd = random_vec(3);
      worst = std::max(worst, std::abs(q.dot(sphere.rhs(0.0, q, qd))));
    }
    battery.add("models.sphere_tangency", worst <= 1e-14,
                "worst q . q' = " + fmt(worst));
  });

  battery.guarded("models.energy_rate_law", [&] {
    RigidBodyParams p = default_params();
    Vec init(3);
    init << p.m, 1e-4, -1e-4;
    IntegratorConfig cfg{1e-3, 20.0};
    const Trajectory t = integrate(
        make_rigid_body_problem(p, InitialFunction::constant(init, p.tau)), cfg);
    const EnergyRateReport r = energy_rate_check(t, p);
    battery.add("models.energy_rate_law", r.max_discrepancy <= 1e-5,
                "max discrepancy " + fmt(r.max_discrepancy));
  });

  battery.guarded("models.landau_lifschitz_rate_law", [&] {
    LandauLifschitzParams p;
    p.gamma_ratio = 1.0;
    p.lambda_damp = 0.1;
    p.B = Vec3(0.0, 0.0, 1.0);
    p.tau = 0.5;
    Vec init(3);
    init << 0.6, 0.0, 0.8;
    IntegratorConfig cfg{1e-3, 20.0};
    const Trajectory t = integrate(
        make_landau_lifschitz_problem(p, InitialFunction::constant(init, p.tau)),
        cfg);
    const EnergyRateReport r = landau_lifschitz_rate_check(t, p);
    battery.add("models.landau_lifschitz_rate_law", r.max_discrepancy <= 1e-5,
                "max discrepancy " + fmt(r.max_discrepancy));
  });

  // --- spectral ---------------------------------------------------------------
  battery.guarded("spectral.linearization_fd", [&] {
    double worst = 0.0;
    for (double I1 : {0.8, 1.0, 1.2})
      for (double I2 : {0.4, 0.5, 0.6})
        for (double I3 : {0.3, 0.45, 0.55}) {
          RigidBodyParams p = default_params();
          p.I1 = I1;
          p.I2 = I2;
          p.I3 = I3;
          const Linearization lin = linearize(p);
          const auto [A_fd, G_fd] = oracles::fd_jacobians(p);
          worst = std::max(worst, (lin.A - A_fd).cwiseAbs().maxCoeff());
          worst = std::max(worst,
                           (p.alpha * lin.G - G_fd).cwiseAbs().maxCoeff());
        }
    battery.add("spectral.linearization_fd", worst <= 1e-6,
                "worst entry gap " + fmt(worst));
  });

  battery.guarded("spectral.hopf_residuals", [&] {
    double worst = 0.0;
    const double grid[10][5] = {
        {0.8, 0.5, 0.4, 0.3, 1.5}, {0.8, 0.5, 0.4, 0.3, 1.8},
        {1.0, 0.6, 0.5, 0.2, 1.2}, {1.2, 0.7, 0.4, 0.5, 0.9},
        {0.9, 0.5, 0.3, 0.4, 2.0}, {1.1, 0.8, 0.6, 0.25, 1.4},
        {0.8, 0.6, 0.5, 0.35, 1.1}, {1.5, 0.9, 0.7, 0.15, 2.5},
        {0.7, 0.4, 0.35, 0.45, 1.0}, {1.0, 0.5, 0.45, 0.3, 1.6}};
    for (const auto& row : grid) {
      RigidBodyParams p;
      p.I1 = row[0];
      p.I2 = row[1];
      p.I3 = row[2];
      p.alpha = row[3];
      p.m = row[4];
      const SpectralCoefficients co = coefficients(p);
      const HopfPoint hp = hopf_point(co, p.m, p.alpha);
      worst = std::max(worst, std::abs(char_residual(
                                   Complex(0.0, hp.omega0), hp.tau0, co)));
      const auto [eq1, eq2] = imaginary_axis_system(hp, co);
      worst = std::max(worst, std::max(std::abs(eq1), std::abs(eq2)));
    }
    battery.add("spectral.hopf_residuals", worst <= 1e-10,
                "worst residual " + fmt(worst));
  });

  battery.guarded("spectral.transversality_tracking", [&] {
    const RigidBodyParams p = default_params();
    const SpectralCoefficients co = coefficients(p);
    const HopfPoint hp = hopf_point(co, p.m, p.alpha);
    const TransversalityResult tr = transversality(co, hp);
    const double delta = 1e-4;
    const Complex lam0(0.0, hp.omega0);
    const Complex minus =
        track_root(co, lam0, hp.tau0, hp.tau0 - delta, 4).back().lambda;
    const Complex plus =
        track_root(co, lam0, hp.tau0, hp.tau0 + delta, 4).back().lambda;
    const Complex slope = (plus - minus) / (2.0 * delta);
    const double rel =
        std::abs(slope.real() - tr.dlambda_dtau.real()) /
        std::abs(tr.dlambda_dtau.real());
    battery.add("spectral.transversality_tracking",
                rel <= 1e-3 && slope.real() * tr.dlambda_dtau.real() > 0.0,
                "rel gap " + fmt(rel));
  });

  battery.guarded("spectral.stability_below_crossing", [&] {
    RigidBodyParams p = default_params();
    const SpectralCoefficients co = coefficients(p);
    const HopfPoint hp = hopf_point(co, p.m, p.alpha);
    p.tau = 0.8 * std::min(critical_delay(p), hp.tau0);
    const auto [r1, r2] = zero_delay_roots(co);
    const Complex lam = track_root(co, r1, 0.0, p.tau, 100).back().lambda;

    const double h = adjust_step_to_delay(1e-3, p.tau);
    Vec init(3);
    init << p.m, 1e-3, 0.0;
    const double t_end = std::ceil(60.0 / h) * h;
    const Trajectory t = integrate(
        make_rigid_body_problem(p, InitialFunction::constant(init, p.tau)),
        IntegratorConfig{h, t_end});
    const CycleEstimate est = detect_limit_cycle(t, 1, 0.5);
    battery.add("spectral.stability_below_crossing",
                lam.real() < 0.0 && est.amplitude < 1e-4,
                "Re lambda = " + fmt(lam.real()) + ", final amplitude = " +
                    fmt(est.amplitude));
  });

  // --- hopf -------------------------------------------------------------------
  battery.guarded("hopf.normalization_identities", [&] {
    const RigidBodyParams p = default_params();
    const AnalysisResult r = analyze_rigid_body(p);
    const ExponentialSegment psi{Vec3c(0.0, r.eigen.w2, r.eigen.w3),
                                 r.eigen.lambda1};
    const ExponentialSegment psi_bar{
        Vec3c(0.0, std::conj(r.eigen.w2), std::conj(r.eigen.w3)),
        -r.eigen.lambda1};
    const ExponentialSegment phi{Vec3c(0.0, r.eigen.v2, r.eigen.v3),
                                 r.eigen.lambda1};
    const ExponentialSegment phi_bar{
        Vec3c(0.0, std::conj(r.eigen.v2), std::conj(r.eigen.v3)),
        -r.eigen.lambda1};
    const Complex one =
        std::conj(r.eigen.b11) * bilinear_form(psi, phi, p, r.hp.tau0) +
        std::conj(r.eigen.b12) * bilinear_form(psi_bar, phi, p, r.hp.tau0);
    const Complex zero =
        std::conj(r.eigen.b11) * bilinear_form(psi, phi_bar, p, r.hp.tau0) +
        std::conj(r.eigen.b12) * bilinear_form(psi_bar, phi_bar, p, r.hp.tau0);
    battery.add("hopf.normalization_identities",
                std::abs(one - 1.0) <= 1e-10 && std::abs(zero) <= 1e-10,
                "<psi~,phi> - 1 = " + fmt(std::abs(one - 1.0)) +
                    ", <psi~,phi_bar> = " + fmt(std::abs(zero)));
  });

  battery.guarded("hopf.bilinear_quadrature", [&] {
    const RigidBodyParams p = default_params();
    const AnalysisResult r = analyze_rigid_body(p);
    const ExponentialSegment psi{Vec3c(0.0, r.eigen.w2, r.eigen.w3),
                                 r.eigen.lambda1};
    const ExponentialSegment phi{Vec3c(0.0, r.eigen.v2, r.eigen.v3),
                                 r.eigen.lambda1};
    const Complex closed = bilinear_form(psi, phi, p, r.hp.tau0);
    const Complex quad =
        oracles::bilinear_form_quadrature(psi, phi, p, r.hp.tau0);
    const double rel = std::abs(closed - quad) / std::abs(closed);
    battery.add("hopf.bilinear_quadrature", rel <= 1e-9, "rel gap " + fmt(rel));
  });

  battery.guarded("hopf.g21_fd_oracle", [&] {
    const RigidBodyParams p = default_params();
    const AnalysisResult r = analyze_rigid_body(p);
    const Complex fd = oracles::fd_g21(p, r.hp, r.eigen, r.nf);
    const double rel = std::abs(fd - r.nf.g21) / std::abs(r.nf.g21);
    battery.add("hopf.g21_fd_oracle", rel <= 1e-5, "rel gap " + fmt(rel));
  });

  battery.guarded("hopf.casimir_center_manifold", [&] {
    const RigidBodyParams p = default_params();
    const AnalysisResult r = analyze_rigid_body(p);
    std::vector<double> grid;
    for (double t = 0.0; t <= 5.0; t += 0.01) grid.push_back(t);
    // drift <= K u0^3 for a bounded fitted K: the ratio drift/u0^3 must not
    // grow as u0 shrinks (a quadratic leak would scale like 1/u0).
    std::vector<double> k_of_u0;
    for (double u0 : {0.01, 0.02, 0.04}) {
      const auto path = center_manifold_trajectory(p, r.hp, r.eigen, r.nf,
                                                   Complex(u0, 0.0), grid);
      double drift = 0.0;
      for (const auto& omega : path) {
        const Vec3 M = p.momentum_of(omega);
        drift = std::max(drift, std::abs(M.norm() - std::abs(p.m)));
      }
      k_of_u0.push_back(drift / (u0 * u0 * u0));
    }
    battery.add("hopf.casimir_center_manifold",
                k_of_u0.front() <= 1.25 * k_of_u0.back(),
                "drift/u0^3 = " + fmt(k_of_u0[0]) + ", " + fmt(k_of_u0[1]) +
                    ", " + fmt(k_of_u0[2]) + " for u0 = 0.01, 0.02, 0.04");
  });

  // --- diagnostics -------------------------------------------------------------
  battery.guarded("diagnostics.sinusoid_cycle", [&] {
    Trajectory t;
    const double h = 0.005;
    for (double x = 0.0; x <= 60.0 + 1e-12; x += h) {
      Vec s(1), d(1);
      s[0] = 0.1 * std::sin(2.0 * x);
      d[0] = 0.2 * std::cos(2.0 * x);
      t.append(x, s, d);
    }
    const CycleEstimate est = detect_limit_cycle(t, 0, 0.5);
    battery.add("diagnostics.sinusoid_cycle",
                est.converged && std::abs(est.period - M_PI) <= 1e-4 &&
                    std::abs(est.amplitude - 0.1) <= 1e-4,
                "period " + fmt(est.period) + ", amplitude " + fmt(est.amplitude));
  });

  battery.guarded("diagnostics.decay_flagged", [&] {
    Trajectory t;
    for (double x = 0.0; x <= 40.0 + 1e-12; x += 0.01) {
      Vec s(1), d(1);
      s[0] = 1e-5 * std::exp(-x);
      d[0] = -s[0];
      t.append(x, s, d);
    }
    const CycleEstimate est = detect_limit_cycle(t, 0, 0.5);
    battery.add("diagnostics.decay_flagged", !est.converged && est.equilibrium);
  });

  return results;
}

}  // namespace delaylp
