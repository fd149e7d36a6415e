#pragma once

// Finite-dimensional Lie algebra arithmetic parameterized by structure
// constants: brackets, coadjoint actions, the Gamma^{-1} inner product,
// isotropy subalgebras and orthogonal projections onto their complements.

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace delaylp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A Casimir function on the coalgebra, supplied as value plus gradient.
/// Two named choices cover the models in this toolkit: C(mu) = |mu|^2 and
/// C == 1.
struct Casimir {
  enum class Kind { NormSquared, ConstantOne };

  Kind kind = Kind::ConstantOne;

  double value(const Vec& mu) const;
  Vec gradient(const Vec& mu) const;

  static Casimir norm_squared() { return Casimir{Kind::NormSquared}; }
  static Casimir constant_one() { return Casimir{Kind::ConstantOne}; }

  std::string name() const;
  static Casimir from_name(const std::string& name);
};

/// Immutable description of a finite-dimensional Lie algebra: structure
/// constants C[d][a][b] (so that [e_a, e_b] = sum_d C[d][a][b] e_d), a
/// symmetric positive-definite form Gamma, and a Casimir function.
///
/// Construction validates antisymmetry, the Jacobi identity and positive
/// definiteness of Gamma; invalid specs are rejected with an exception.
/// After construction the object is immutable and safe to share across
/// threads; all operations are pure.
class AlgebraSpec {
 public:
  AlgebraSpec(int dimension, std::vector<double> structure_constants,
              Mat gamma, Casimir casimir);

  /// so(3) with the cross-product bracket, Gamma = identity and
  /// C(mu) = |mu|^2.
  static AlgebraSpec so3();

  /// Load from a JSON document
  ///   {"dimension": n, "structure_constants": [[[...]]],
  ///    "gamma": [[...]], "casimir": "norm_squared" | "constant_one"}.
  static AlgebraSpec from_json(const nlohmann::json& doc);

  int dimension() const { return dim_; }

  /// Structure constant C[d][a][b].
  double structure(int d, int a, int b) const {
    return c_[(d * dim_ + a) * dim_ + b];
  }

  const Mat& gamma() const { return gamma_; }
  const Casimir& casimir() const { return casimir_; }

  /// Canonical pairing <mu, xi> of a coalgebra element on an algebra
  /// element; in coordinates the dot product.
  double pairing(const Vec& mu, const Vec& xi) const;

  /// [xi, eta]^d = sum_{a,b} C[d][a][b] xi^a eta^b.
  Vec bracket(const Vec& xi, const Vec& eta) const;

  /// ad*_xi mu, fixed by <ad*_xi mu, eta> = <mu, [xi, eta]>. On so(3) with
  /// the dot-product identification this is mu x xi, so the Lie-Poisson
  /// equation d mu/dt = ad*_{dh/dmu} mu reproduces M' = M x Omega.
  Vec coadjoint(const Vec& xi, const Vec& mu) const;

  /// Gamma^{-1} applied to an algebra element.
  Vec gamma_inverse_apply(const Vec& xi) const;

  /// <xi, eta>_{Gamma^{-1}} = <Gamma^{-1} eta, xi>.
  double gamma_inverse_inner(const Vec& xi, const Vec& eta) const;

  /// Gamma^{-1}-orthonormal basis of the coadjoint isotropy subalgebra
  /// g_mu = { xi : ad*_xi mu = 0 }, computed from the nullspace of the
  /// matrix of xi -> ad*_xi mu. Singular values below tol (relative to the
  /// largest) are treated as zero.
  std::vector<Vec> isotropy_basis(const Vec& mu,
                                  double tol = kIsotropyTol) const;

  /// Component xi^mu of xi in the Gamma^{-1}-orthogonal complement of
  /// g_mu.
  Vec project_complement(const Vec& xi, const Vec& mu) const;

  /// Matrix K with K * xi = ad*_xi mu (columns are ad*_{e_a} mu).
  Mat coadjoint_matrix(const Vec& mu) const;

  static constexpr double kIsotropyTol = 1e-9;

 private:
  void validate() const;

  int dim_;
  std::vector<double> c_;  // packed as [(d * n + a) * n + b]
  Mat gamma_;
  Eigen::LLT<Mat> gamma_llt_;
  Casimir casimir_;
};

/// Validates antisymmetry and the Jacobi identity of a raw structure
/// tensor without constructing a spec. Returns an empty string on success,
/// otherwise the name of the violated identity. Used by the verification
/// battery (which must be able to name the failing invariant rather than
/// catch a constructor throw).
std::string check_structure_tensor(int dimension,
                                   const std::vector<double>& c,
                                   double tol = 1e-12);

}  // namespace delaylp
