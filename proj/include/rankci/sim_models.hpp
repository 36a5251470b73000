#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rankci/matrix.hpp"
#include "rankci/rng.hpp"

namespace rankci {

enum class ModelKind { fa, pca };

// Generative description of a synthetic dataset: a factor model
// X = Z Theta^{1/2} Lambda^T + E (kind fa) or a spiked principal
// component model with population covariance V diag(theta, 1, ...) V^T
// (kind pca). noise_factor multiplies the residual standard deviation.
struct SpikedModelSpec {
  ModelKind kind = ModelKind::fa;
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<double> scales;  // theta_1 .. theta_r, possibly empty
  double noise_factor = 1.0;
  std::string label;

  std::size_t rank() const { return scales.size(); }

  void validate() const {
    if (n_rows == 0 || n_cols == 0)
      throw std::invalid_argument("SpikedModelSpec: dimensions must be positive");
    const std::size_t cap =
        kind == ModelKind::fa ? std::min(n_rows, n_cols) : n_cols;
    if (scales.size() > cap)
      throw std::invalid_argument("SpikedModelSpec: more scales than dimensions allow");
    for (double s : scales)
      if (!(s > 0.0))
        throw std::invalid_argument("SpikedModelSpec: scales must be positive");
    if (!(noise_factor > 0.0))
      throw std::invalid_argument("SpikedModelSpec: noise_factor must be positive");
  }
};

namespace detail {

// Signal and noise draw from disjoint substreams so that the two
// components are independent by construction.
enum : std::uint64_t { kStreamLoadings = 1, kStreamScores = 2, kStreamNoise = 3 };

inline std::uint64_t model_root(const SpikedModelSpec& spec, std::uint64_t seed) {
  return derive_seed(seed, hash_label(spec.label));
}

inline Eigen::MatrixXd gaussian_matrix(std::size_t n, std::size_t p, Rng& rng) {
  Eigen::MatrixXd g(n, p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j)
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rng.normal();
  return g;
}

// Q factor of a seeded Gaussian matrix with the R-diagonal sign fix,
// giving Haar-distributed orthonormal columns.
inline Eigen::MatrixXd haar_orthonormal(std::size_t p, std::size_t r, Rng& rng) {
  const Eigen::MatrixXd g = gaussian_matrix(p, r, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() *
                      Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p),
                                                static_cast<Eigen::Index>(r));
  const auto& rdiag = qr.matrixQR().diagonal();
  for (Eigen::Index j = 0; j < q.cols(); ++j)
    if (rdiag[j] < 0.0) q.col(j) = -q.col(j);
  return q;
}

inline DataMatrix from_eigen(const Eigen::MatrixXd& x) {
  const auto n = static_cast<std::size_t>(x.rows());
  const auto p = static_cast<std::size_t>(x.cols());
  std::vector<double> vals(n * p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j)
      vals[i * p + j] = x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return DataMatrix(n, p, std::move(vals));
}

}  // namespace detail

// X = Z Theta^{1/2} Lambda^T + noise_factor * E, with Z standard normal
// n x r, Lambda the Q factor of a Gaussian p x r matrix, E standard
// normal n x p. Identical (spec, seed) yields a bit-identical matrix.
inline DataMatrix generate_fa(const SpikedModelSpec& spec, std::uint64_t seed) {
  if (spec.kind != ModelKind::fa)
    throw std::invalid_argument("generate_fa: spec.kind must be fa");
  spec.validate();
  const std::size_t n = spec.n_rows, p = spec.n_cols, r = spec.rank();
  const std::uint64_t root = detail::model_root(spec, seed);

  Rng noise_rng(derive_seed(root, detail::kStreamNoise));
  Eigen::MatrixXd x = detail::gaussian_matrix(n, p, noise_rng);
  if (spec.noise_factor != 1.0) x *= spec.noise_factor;

  if (r > 0) {
    Rng loading_rng(derive_seed(root, detail::kStreamLoadings));
    Rng score_rng(derive_seed(root, detail::kStreamScores));
    const Eigen::MatrixXd lambda = detail::haar_orthonormal(p, r, loading_rng);
    Eigen::MatrixXd z = detail::gaussian_matrix(n, r, score_rng);
    for (std::size_t j = 0; j < r; ++j)
      z.col(static_cast<Eigen::Index>(j)) *= std::sqrt(spec.scales[j]);
    x.noalias() += z * lambda.transpose();
  }
  return detail::from_eigen(x);
}

// The exact covariance square root used by generate_pca:
// V diag(sqrt(theta_1..theta_r), noise_factor, ...) V^T with V a seeded
// Haar orthogonal basis. Exposed so tests and diagnostics can inspect
// the population covariance.
inline DataMatrix pca_covariance_root(const SpikedModelSpec& spec, std::uint64_t seed) {
  if (spec.kind != ModelKind::pca)
    throw std::invalid_argument("pca_covariance_root: spec.kind must be pca");
  spec.validate();
  const std::size_t p = spec.n_cols, r = spec.rank();
  const std::uint64_t root = detail::model_root(spec, seed);
  Rng basis_rng(derive_seed(root, detail::kStreamLoadings));
  const Eigen::MatrixXd v = detail::haar_orthonormal(p, p, basis_rng);
  Eigen::VectorXd d(static_cast<Eigen::Index>(p));
  for (std::size_t j = 0; j < p; ++j)
    d[static_cast<Eigen::Index>(j)] =
        j < r ? std::sqrt(spec.scales[j]) : spec.noise_factor;
  const Eigen::MatrixXd sigma_root = v * d.asDiagonal() * v.transpose();
  return detail::from_eigen(sigma_root);
}

// Rows i.i.d. N(0, Sigma) with Sigma = V diag(theta, nf^2 I) V^T.
// With r = 0 this reduces to noise_factor * G.
inline DataMatrix generate_pca(const SpikedModelSpec& spec, std::uint64_t seed) {
  if (spec.kind != ModelKind::pca)
    throw std::invalid_argument("generate_pca: spec.kind must be pca");
  spec.validate();
  const std::size_t n = spec.n_rows, p = spec.n_cols, r = spec.rank();
  const std::uint64_t root = detail::model_root(spec, seed);

  Rng data_rng(derive_seed(root, detail::kStreamScores));
  Eigen::MatrixXd g = detail::gaussian_matrix(n, p, data_rng);
  if (r == 0) {
    if (spec.noise_factor != 1.0) g *= spec.noise_factor;
    return detail::from_eigen(g);
  }
  const DataMatrix root_m = pca_covariance_root(spec, seed);
  const Eigen::MatrixXd x = g * root_m.map();
  return detail::from_eigen(x);
}

inline DataMatrix generate(const SpikedModelSpec& spec, std::uint64_t seed) {
  return spec.kind == ModelKind::fa ? generate_fa(spec, seed)
                                    : generate_pca(spec, seed);
}

// ---------------------------------------------------------------------
// Built-in experiment catalog: the twelve scale-factor settings
// (r in 0..5, aspect ratio 0.2 and 0.5, n = 1500) in both model kinds,
// plus the six stress scenarios a-f.
// ---------------------------------------------------------------------

inline std::map<std::string, SpikedModelSpec> scenario_catalog() {
  std::map<std::string, SpikedModelSpec> out;
  const std::size_t n = 1500;
  const std::vector<double> all_scales = {10, 15, 20, 25, 30};

  for (const auto& [gname, p] : std::vector<std::pair<std::string, std::size_t>>{
           {"0.2", 300}, {"0.5", 750}}) {
    for (std::size_t r = 0; r <= 5; ++r) {
      std::vector<double> scales(all_scales.begin(), all_scales.begin() + r);
      for (ModelKind kind : {ModelKind::fa, ModelKind::pca}) {
        SpikedModelSpec spec;
        spec.kind = kind;
        spec.n_rows = n;
        spec.n_cols = p;
        spec.scales = scales;
        spec.noise_factor = 1.0;
        spec.label = std::string("T1-") + (kind == ModelKind::fa ? "FA" : "PCA") +
                     "-r" + std::to_string(r) + "-g" + gname;
        out.emplace(spec.label, spec);
      }
    }
  }

  struct Stress {
    const char* name;
    std::vector<double> scales;
    double nf;
    std::size_t p;
  };
  // Homoscedastic reading of the "noise factor" triple: one residual sd
  // multiplier, since all listed values are always equal.
  const std::vector<Stress> stress = {
      {"stress-a", {1, 1, 10}, 1.0, 300}, {"stress-b", {10, 10, 1}, 1.0, 300},
      {"stress-c", {1, 1, 1}, 6.0, 300},  {"stress-d", {1, 1, 10}, 1.0, 750},
      {"stress-e", {10, 10, 1}, 1.0, 750}, {"stress-f", {1, 1, 1}, 6.0, 750}};
  for (const auto& s : stress) {
    SpikedModelSpec spec;
    spec.kind = ModelKind::fa;
    spec.n_rows = n;
    spec.n_cols = s.p;
    spec.scales = s.scales;
    spec.noise_factor = s.nf;
    spec.label = s.name;
    out.emplace(spec.label, spec);
  }
  return out;
}

}  // namespace rankci
