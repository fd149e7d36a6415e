#include "delaylp/reports.hpp"

#include <cmath>

namespace delaylp {

namespace {

using nlohmann::json;

json matrix_json(const Mat3& m) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) {
    json row = json::array();
    for (int j = 0; j < 3; ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json gap_entry(const std::string& quantity, double computed, double published) {
  json e;
  e["quantity"] = quantity;
  e["computed"] = computed;
  e["paper"] = published;
  e["abs_gap"] = std::abs(computed - published);
  e["rel_gap"] = std::abs(computed - published) /
                 std::max({std::abs(published), std::abs(computed), 1e-300});
  return e;
}

const PublishedValues* matching_published_set(const RigidBodyParams& p) {
  const bool default_body = std::abs(p.I1 - 0.8) < 1e-12 &&
                            std::abs(p.I2 - 0.5) < 1e-12 &&
                            std::abs(p.I3 - 0.4) < 1e-12 &&
                            std::abs(p.alpha - 0.3) < 1e-12;
  if (!default_body) return nullptr;
  if (std::abs(p.m - kPublishedSet1.m) < 1e-12) return &kPublishedSet1;
  if (std::abs(p.m - kPublishedSet2.m) < 1e-12) return &kPublishedSet2;
  return nullptr;
}

json published_set_json(const PublishedValues& s) {
  return json{{"m", s.m},   {"omega0", s.omega0}, {"tau0", s.tau0},
              {"mu2", s.mu2}, {"T2", s.T2},       {"beta2", s.beta2}};
}

}  // namespace

json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

AnalysisResult analyze_rigid_body(const RigidBodyParams& p,
                                  CoefficientVariant variant) {
  AnalysisResult r;
  r.params = p;
  r.variant = variant;
  r.lin = linearize(p);
  r.co = coefficients(p, variant);
  r.tau_c = critical_delay(p);
  r.hp = hopf_point(r.co, p.m, p.alpha);
  r.trans = transversality(r.co, r.hp);
  if (variant != CoefficientVariant::DeterminantDerived) {
    // The alternative coefficients solve their own characteristic
    // equation, but their crossing is not an eigenvalue of the physical
    // linearization, so the eigenvector machinery has nothing to act on.
    r.hopf_stage = false;
    return r;
  }
  r.eigen = normalize_adjoint(p, eigenvectors(p, r.hp));
  r.nf = cubic_coefficients(p, r.hp, r.eigen);
  r.quantities = hopf_quantities(r.nf, r.trans.dlambda_dtau, r.hp.omega0);
  return r;
}

json build_spectral_report(const AnalysisResult& r) {
  json doc;
  doc["schema_version"] = 1;
  doc["params"] = {{"I1", r.params.I1}, {"I2", r.params.I2},
                   {"I3", r.params.I3}, {"alpha", r.params.alpha},
                   {"m", r.params.m}};
  doc["A"] = matrix_json(r.lin.A);
  doc["G"] = matrix_json(r.lin.G);
  doc["a"] = r.co.a;
  doc["b"] = r.co.b;
  doc["c"] = r.co.c;
  doc["variant"] = r.variant == CoefficientVariant::DeterminantDerived
                       ? "determinant"
                       : "published";
  doc["tau_c"] = r.tau_c;
  doc["omega0"] = r.hp.omega0;
  doc["tau0"] = r.hp.tau0;
  doc["branch"] = r.hp.branch == HopfBranch::CaseI ? "case-i" : "case-ii";
  doc["branch_from_fallback"] = r.hp.from_fallback;
  doc["re_dlambda_dtau"] = r.trans.dlambda_dtau.real();
  doc["im_dlambda_dtau"] = r.trans.dlambda_dtau.imag();
  doc["re_dlambda_dtau_closed_form"] = r.trans.re_closed_form;
  doc["closed_form_consistent"] = r.trans.closed_form_consistent;

  doc["paper_reference_values"] = {{"set1", published_set_json(kPublishedSet1)},
                                   {"set2", published_set_json(kPublishedSet2)}};

  json gaps = json::array();
  if (const auto* set = matching_published_set(r.params)) {
    gaps.push_back(gap_entry("omega0", r.hp.omega0, set->omega0));
    gaps.push_back(gap_entry("tau0", r.hp.tau0, set->tau0));
    json pr = gap_entry("tau0_times_omega0", r.hp.tau0 * r.hp.omega0,
                        set->tau0 * set->omega0);
    pr["note"] =
        "the branch formula requires tau0*omega0 = pi/2 (case i) or 3pi/2 "
        "(case ii); the published pair gives 2.826";
    gaps.push_back(pr);
    json tc = gap_entry("tau0_minus_tau_c", r.hp.tau0 - r.tau_c,
                        set->tau0 - r.tau_c);
    tc["note"] =
        "the published claim tau0 > tau_c fails for both the published and "
        "the computed point at these parameters";
    gaps.push_back(tc);
  } else {
    gaps.push_back(
        {{"note", "parameters do not match either published example set"}});
  }
  doc["discrepancies"] = gaps;
  return doc;
}

json build_hopf_report(const AnalysisResult& r) {
  json doc;
  doc["schema_version"] = 1;
  json eigen;
  eigen["v2"] = complex_json(r.eigen.v2);
  eigen["v3"] = complex_json(r.eigen.v3);
  eigen["w2"] = complex_json(r.eigen.w2);
  eigen["w3"] = complex_json(r.eigen.w3);
  eigen["w2_tilde"] = complex_json(r.eigen.w2_tilde);
  eigen["w3_tilde"] = complex_json(r.eigen.w3_tilde);
  eigen["a11"] = complex_json(r.eigen.a11);
  eigen["a12"] = complex_json(r.eigen.a12);
  eigen["printed_eigenvector_consistent"] = r.eigen.printed_eigenvector_consistent;
  eigen["printed_adjoint_consistent"] = r.eigen.printed_adjoint_consistent;
  eigen["printed_adjoint_residual"] = r.eigen.printed_adjoint_residual;
  eigen["printed_b11_consistent"] = r.eigen.printed_b11_consistent;
  eigen["printed_b12_consistent"] = r.eigen.printed_b12_consistent;
  doc["eigen"] = eigen;

  doc["g21"] = complex_json(r.nf.g21);
  doc["C1"] = complex_json(r.quantities.C1);
  doc["mu2"] = r.quantities.mu2;
  doc["T2"] = r.quantities.T2;
  doc["beta2"] = r.quantities.beta2;
  doc["w20_1"] = complex_json(r.nf.w20_1);
  doc["w11_1"] = r.nf.w11_1;

  json notes = json::array();
  if (!r.eigen.printed_adjoint_consistent)
    notes.push_back(
        "printed adjoint eigenvector fails the transposed-system residual "
        "(lambda1 where lambda2 belongs); the direct nullspace vector is used");
  if (!r.trans.closed_form_consistent)
    notes.push_back(
        "published closed form for Re(dlambda/dtau) disagrees with implicit "
        "differentiation; the implicit value is used");
  if (!r.eigen.printed_b12_consistent)
    notes.push_back(
        "printed b12 = -a12/d differs from the solved normalization "
        "(conjugation); the solved values satisfy the defining identities");
  notes.push_back(
      "w11 carries the Casimir-level zero-mode component w11_1 (the printed "
      "analysis sets it to zero, which makes Re g21 vanish identically and "
      "the cubic truncation degenerate)");

  if (const auto* set = matching_published_set(r.params)) {
    doc["paper_reference"] = published_set_json(*set);
    json gaps = json::array();
    gaps.push_back(gap_entry("mu2", r.quantities.mu2, set->mu2));
    gaps.push_back(gap_entry("T2", r.quantities.T2, set->T2));
    gaps.push_back(gap_entry("beta2", r.quantities.beta2, set->beta2));
    doc["paper_gaps"] = gaps;
  } else {
    doc["paper_reference"] = {{"set1", published_set_json(kPublishedSet1)},
                              {"set2", published_set_json(kPublishedSet2)}};
  }
  doc["discrepancy_notes"] = notes;
  return doc;
}

}  // namespace delaylp
