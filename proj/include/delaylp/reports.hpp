#pragma once

// End-to-end analysis pipeline for the rigid body with delay and the JSON
// reports it produces, including the published reference values and a
// quantified discrepancy ledger (the published endpoints are reported
// against, never reproduced blindly).

#include <json.hpp>

#include "delaylp/hopf.hpp"

namespace delaylp {

/// The published example endpoints (section 6 of the source analysis),
/// kept solely for the comparison report.
struct PublishedValues {
  double m;
  double omega0, tau0, mu2, T2, beta2;
};

inline constexpr PublishedValues kPublishedSet1{1.5, 3.20631, 0.88154,
                                                 0.00958, 0.00057, -0.00139};
inline constexpr PublishedValues kPublishedSet2{1.8, 0.68547, 0.88154,
                                                 0.00344, 0.00050, 0.00097};

struct AnalysisResult {
  RigidBodyParams params;
  CoefficientVariant variant = CoefficientVariant::DeterminantDerived;
  Linearization lin;
  SpectralCoefficients co;
  double tau_c = 0.0;
  HopfPoint hp;
  TransversalityResult trans;
  EigenData eigen;
  NormalFormData nf;
  HopfQuantities quantities;
  /// The center-manifold stage runs only on the determinant-derived
  /// coefficients; the published-coefficient variant exists for the
  /// characteristic-equation comparison and stops after transversality.
  bool hopf_stage = true;
};

/// Runs linearization, coefficients, critical delay, Hopf point,
/// transversality, eigen data, normal form and bifurcation quantities.
AnalysisResult analyze_rigid_body(
    const RigidBodyParams& p,
    CoefficientVariant variant = CoefficientVariant::DeterminantDerived);

nlohmann::json complex_json(Complex z);

/// {A, G, a, b, c, variant, tau_c, omega0, tau0, branch, re_dlambda_dtau,
///  paper_reference_values, discrepancies[]}.
nlohmann::json build_spectral_report(const AnalysisResult& r);

/// {eigen {...}, g21, C1, mu2, T2, beta2, paper_reference,
///  discrepancy_notes[]}.
nlohmann::json build_hopf_report(const AnalysisResult& r);

}  // namespace delaylp
