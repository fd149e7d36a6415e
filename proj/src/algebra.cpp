#include "delaylp/algebra.hpp"

#include <cmath>
#include <stdexcept>

namespace delaylp {

double Casimir::value(const Vec& mu) const {
  switch (kind) {
    case Kind::NormSquared:
      return mu.squaredNorm();
    case Kind::ConstantOne:
      return 1.0;
  }
  return 1.0;
}

Vec Casimir::gradient(const Vec& mu) const {
  switch (kind) {
    case Kind::NormSquared:
      return 2.0 * mu;
    case Kind::ConstantOne:
      return Vec::Zero(mu.size());
  }
  return Vec::Zero(mu.size());
}

std::string Casimir::name() const {
  return kind == Kind::NormSquared ? "norm_squared" : "constant_one";
}

Casimir Casimir::from_name(const std::string& name) {
  if (name == "norm_squared") return norm_squared();
  if (name == "constant_one") return constant_one();
  throw std::invalid_argument("unknown casimir '" + name +
                              "' (expected norm_squared or constant_one)");
}

AlgebraSpec::AlgebraSpec(int dimension, std::vector<double> structure_constants,
                         Mat gamma, Casimir casimir)
    : dim_(dimension),
      c_(std::move(structure_constants)),
      gamma_(std::move(gamma)),
      casimir_(casimir) {
  if (dim_ <= 0) throw std::invalid_argument("dimension must be positive");
  if (static_cast<int>(c_.size()) != dim_ * dim_ * dim_)
    throw std::invalid_argument("structure constant tensor has wrong size");
  if (gamma_.rows() != dim_ || gamma_.cols() != dim_)
    throw std::invalid_argument("gamma has wrong shape");
  validate();
  gamma_llt_.compute(gamma_);
}

void AlgebraSpec::validate() const {
  const std::string fail = check_structure_tensor(dim_, c_);
  if (!fail.empty())
    throw std::invalid_argument("invalid structure constants: " + fail);

  if (!gamma_.isApprox(gamma_.transpose(), 1e-12))
    throw std::invalid_argument("gamma is not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(gamma_);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("gamma is not positive definite");
}

std::string check_structure_tensor(int n, const std::vector<double>& c,
                                   double tol) {
  auto C = [&](int d, int a, int b) { return c[(d * n + a) * n + b]; };
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  const double bound = tol * std::max(1.0, scale);

  for (int d = 0; d < n; ++d)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (std::abs(C(d, a, b) + C(d, b, a)) > bound) return "antisymmetry";

  // sum_e C[e][a][b] C[f][e][c] + cyclic in (a,b,c) = 0
  const double jbound = tol * std::max(1.0, scale * scale) * n;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc)
        for (int f = 0; f < n; ++f) {
          double sum = 0.0;
          for (int e = 0; e < n; ++e) {
            sum += C(e, a, b) * C(f, e, cc);
            sum += C(e, b, cc) * C(f, e, a);
            sum += C(e, cc, a) * C(f, e, b);
          }
          if (std::abs(sum) > jbound) return "jacobi";
        }
  return {};
}

AlgebraSpec AlgebraSpec::so3() {
  const int n = 3;
  std::vector<double> c(n * n * n, 0.0);
  auto set = [&](int d, int a, int b, double v) {
    c[(d * n + a) * n + b] = v;
    c[(d * n + b) * n + a] = -v;
  };
  // [e1,e2] = e3 and cyclic: the cross product.
  set(2, 0, 1, 1.0);
  set(0, 1, 2, 1.0);
  set(1, 2, 0, 1.0);
  return AlgebraSpec(n, std::move(c), Mat::Identity(n, n),
                     Casimir::norm_squared());
}

AlgebraSpec AlgebraSpec::from_json(const nlohmann::json& doc) {
  if (!doc.contains("dimension"))
    throw std::invalid_argument("algebra spec: missing 'dimension'");
  const int n = doc.at("dimension").get<int>();
  if (n <= 0) throw std::invalid_argument("algebra spec: dimension must be positive");

  const auto& sc = doc.at("structure_constants");
  if (static_cast<int>(sc.size()) != n)
    throw std::invalid_argument("algebra spec: structure_constants outer size != dimension");
  std::vector<double> c(static_cast<size_t>(n) * n * n, 0.0);
  for (int d = 0; d < n; ++d)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        c[(d * n + a) * n + b] = sc.at(d).at(a).at(b).get<double>();

  Mat gamma(n, n);
  const auto& g = doc.at("gamma");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gamma(i, j) = g.at(i).at(j).get<double>();

  Casimir cas = Casimir::from_name(doc.value("casimir", "constant_one"));
  return AlgebraSpec(n, std::move(c), std::move(gamma), cas);
}

double AlgebraSpec::pairing(const Vec& mu, const Vec& xi) const {
  if (mu.size() != dim_ || xi.size() != dim_)
    throw std::invalid_argument("pairing: dimension mismatch");
  return mu.dot(xi);
}

Vec AlgebraSpec::bracket(const Vec& xi, const Vec& eta) const {
  if (xi.size() != dim_ || eta.size() != dim_)
    throw std::invalid_argument("bracket: dimension mismatch");
  Vec out = Vec::Zero(dim_);
  for (int d = 0; d < dim_; ++d) {
    double s = 0.0;
    for (int a = 0; a < dim_; ++a) {
      if (xi[a] == 0.0) continue;
      for (int b = 0; b < dim_; ++b) s += structure(d, a, b) * xi[a] * eta[b];
    }
    out[d] = s;
  }
  return out;
}

Vec AlgebraSpec::coadjoint(const Vec& xi, const Vec& mu) const {
  if (xi.size() != dim_ || mu.size() != dim_)
    throw std::invalid_argument("coadjoint: dimension mismatch");
  Vec out = Vec::Zero(dim_);
  for (int b = 0; b < dim_; ++b) {
    double s = 0.0;
    for (int a = 0; a < dim_; ++a)
      for (int d = 0; d < dim_; ++d) s += structure(d, a, b) * xi[a] * mu[d];
    out[b] = s;
  }
  return out;
}

Vec AlgebraSpec::gamma_inverse_apply(const Vec& xi) const {
  return gamma_llt_.solve(xi);
}

double AlgebraSpec::gamma_inverse_inner(const Vec& xi, const Vec& eta) const {
  if (xi.size() != dim_ || eta.size() != dim_)
    throw std::invalid_argument("gamma_inverse_inner: dimension mismatch");
  return xi.dot(gamma_llt_.solve(eta));
}

Mat AlgebraSpec::coadjoint_matrix(const Vec& mu) const {
  Mat K(dim_, dim_);
  for (int a = 0; a < dim_; ++a) {
    Vec e = Vec::Zero(dim_);
    e[a] = 1.0;
    K.col(a) = coadjoint(e, mu);
  }
  return K;
}

std::vector<Vec> AlgebraSpec::isotropy_basis(const Vec& mu, double tol) const {
  if (mu.size() != dim_)
    throw std::invalid_argument("isotropy_basis: dimension mismatch");
  const Mat K = coadjoint_matrix(mu);
  Eigen::JacobiSVD<Mat> svd(K, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() ? tol * sv(0) : 0.0;

  std::vector<Vec> raw;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) <= cutoff) raw.push_back(svd.matrixV().col(i));
  // mu = 0 (or an abelian algebra) makes K identically zero; every
  // direction is isotropy and the SVD cutoff keeps none out.
  if (K.norm() == 0.0) {
    raw.clear();
    for (int i = 0; i < dim_; ++i) {
      Vec e = Vec::Zero(dim_);
      e[i] = 1.0;
      raw.push_back(e);
    }
  }

  // Gram-Schmidt in the Gamma^{-1} inner product.
  std::vector<Vec> basis;
  for (Vec v : raw) {
    for (const Vec& b : basis) v -= gamma_inverse_inner(v, b) * b;
    const double norm2 = gamma_inverse_inner(v, v);
    if (norm2 > 1e-24) basis.push_back(v / std::sqrt(norm2));
  }
  return basis;
}

Vec AlgebraSpec::project_complement(const Vec& xi, const Vec& mu) const {
  Vec out = xi;
  for (const Vec& b : isotropy_basis(mu))
    out -= gamma_inverse_inner(out, b) * b;
  return out;
}

}  // namespace delaylp
