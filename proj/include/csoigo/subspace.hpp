#pragma once

#include "csoigo/gradient.hpp"

#include <Eigen/Core>
#include <json.hpp>

namespace csoigo {

// K x N matrix whose columns are mapped training features.
using FeatureMatrix = Eigen::MatrixXcd;

// Complex linear PCA model: the d leading eigenvectors of X X^H, without
// mean-centering.
struct SubspaceModel {
  Eigen::MatrixXcd basis;    // K x d, orthonormal columns
  Eigen::VectorXd spectrum;  // d eigenvalues of X X^H, descending, >= 0
  // Number of basis columns backed by an eigenvalue above the numerical-rank
  // threshold. Columns past this index complete an orthonormal basis but
  // carry no variance.
  Eigen::Index effective_rank = 0;
  Eigen::Index image_rows = 0;
  Eigen::Index image_cols = 0;
  FeatureOrder order = FeatureOrder::Second;

  Eigen::Index feature_length() const { return basis.rows(); }
  Eigen::Index dim() const { return basis.cols(); }
  bool rank_deficient() const { return effective_rank < dim(); }

  // The model restricted to its leading d columns. Identical to fitting with
  // d directly.
  SubspaceModel truncated(Eigen::Index d) const;
};

// Fits through the N x N Gram matrix X^H X, then back-multiplies and
// re-orthonormalizes; the K x K covariance is never formed. Each basis column
// is phase-normalized so its first largest-magnitude entry is real positive,
// which makes the output deterministic and keeps real data real.
SubspaceModel fit_complex_pca(const FeatureMatrix& features, Eigen::Index d);

// z = U^H t.
Eigen::VectorXcd project(const SubspaceModel& model, const ComplexFeature& feature);
// Y = U^H X.
Eigen::MatrixXcd project_all(const SubspaceModel& model, const FeatureMatrix& features);

// ||X - U U^H X||_F^2
double reconstruction_error(const SubspaceModel& model, const FeatureMatrix& features);

inline constexpr int kSubspaceFormatVersion = 1;

nlohmann::json subspace_to_json(const SubspaceModel& model);
SubspaceModel subspace_from_json(const nlohmann::json& doc);

}  // namespace csoigo
