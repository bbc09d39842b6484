#include "csoigo/subspace.hpp"

#include "csoigo/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace csoigo {

namespace {

// Removes the span of the first `count` columns of `basis` from `v`, twice
// (classical Gram-Schmidt with reorthogonalization).
void project_out(const Eigen::MatrixXcd& basis, Eigen::Index count, Eigen::VectorXcd& v) {
  if (count == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::VectorXcd coef = basis.leftCols(count).adjoint() * v;
    v.noalias() -= basis.leftCols(count) * coef;
  }
}

// Rotates the column so its first largest-magnitude entry is real positive.
void fix_phase(Eigen::Ref<Eigen::VectorXcd> u) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    const double a = std::abs(u[k]);
    if (a > best_abs) {
      best_abs = a;
      best = k;
    }
  }
  if (best_abs > 0.0) u *= std::conj(u[best]) / best_abs;
}

// First standard basis vector, taken in index order, that keeps at least
// half its length after projecting out the current basis.
Eigen::VectorXcd completion_vector(const Eigen::MatrixXcd& basis, Eigen::Index count) {
  const Eigen::Index k = basis.rows();
  for (Eigen::Index i = 0; i < k; ++i) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Unit(k, i);
    project_out(basis, count, v);
    const double norm = v.norm();
    if (norm > 0.5) return v / norm;
  }
  throw NumericError("cannot complete an orthonormal basis");
}

template <typename T>
T get_field(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw DataError(std::string("model is missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DataError(std::string("model field '") + key + "' has the wrong type");
  }
}

}  // namespace

SubspaceModel SubspaceModel::truncated(Eigen::Index d) const {
  if (d < 1 || d > dim()) throw InvalidArgument("d out of range: cannot truncate a " + std::to_string(dim()) +
                                                "-dimensional model to " + std::to_string(d));
  SubspaceModel out = *this;
  out.basis = basis.leftCols(d);
  out.spectrum = spectrum.head(d);
  out.effective_rank = std::min(effective_rank, d);
  return out;
}

SubspaceModel fit_complex_pca(const FeatureMatrix& features, Eigen::Index d) {
  const Eigen::Index k = features.rows();
  const Eigen::Index n = features.cols();
  if (k == 0 || n == 0) throw InvalidArgument("feature matrix is empty");
  if (d < 1 || d > std::min(k, n))
    throw InvalidArgument("d out of range: d = " + std::to_string(d) + " but min(K, N) = " +
                          std::to_string(std::min(k, n)));
  if (!features.allFinite()) throw DataError("feature matrix contains non-finite values");

  const Eigen::MatrixXcd gram = features.adjoint() * features;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
  if (eig.info() != Eigen::Success) throw NumericError("Gram eigendecomposition failed");

  // Solver output is ascending; walking it backwards gives a stable
  // descending order.
  const Eigen::VectorXd& values = eig.eigenvalues();
  const double threshold = 1e-12 * std::max(gram.trace().real(), 0.0);

  SubspaceModel model;
  model.basis.resize(k, d);
  model.spectrum.resize(d);
  Eigen::Index rank = 0;
  for (Eigen::Index j = 0; j < d; ++j) {
    const Eigen::Index src = n - 1 - j;
    const double lambda = values[src];
    model.spectrum[j] = std::max(lambda, 0.0);

    Eigen::VectorXcd u;
    bool backed = lambda > threshold && rank == j;
    if (backed) {
      u = features * eig.eigenvectors().col(src) / std::sqrt(lambda);
      project_out(model.basis, j, u);
      const double norm = u.norm();
      backed = norm > 0.5;
      if (backed) u /= norm;
    }
    if (backed) {
      ++rank;
    } else {
      u = completion_vector(model.basis, j);
    }
    model.basis.col(j) = u;
    fix_phase(model.basis.col(j));
  }
  model.effective_rank = rank;
  return model;
}

Eigen::VectorXcd project(const SubspaceModel& model, const ComplexFeature& feature) {
  if (feature.size() != model.feature_length())
    throw InvalidArgument("feature length " + std::to_string(feature.size()) + " does not match model K = " +
                          std::to_string(model.feature_length()));
  return model.basis.adjoint() * feature;
}

Eigen::MatrixXcd project_all(const SubspaceModel& model, const FeatureMatrix& features) {
  if (features.rows() != model.feature_length())
    throw InvalidArgument("feature length " + std::to_string(features.rows()) + " does not match model K = " +
                          std::to_string(model.feature_length()));
  return model.basis.adjoint() * features;
}

double reconstruction_error(const SubspaceModel& model, const FeatureMatrix& features) {
  const Eigen::MatrixXcd coords = project_all(model, features);
  return (features - model.basis * coords).squaredNorm();
}

nlohmann::json subspace_to_json(const SubspaceModel& model) {
  const Eigen::Index k = model.feature_length();
  const Eigen::Index d = model.dim();
  nlohmann::json real = nlohmann::json::array();
  nlohmann::json imag = nlohmann::json::array();
  for (Eigen::Index r = 0; r < k; ++r) {
    std::vector<double> re(static_cast<std::size_t>(d)), im(static_cast<std::size_t>(d));
    for (Eigen::Index c = 0; c < d; ++c) {
      re[static_cast<std::size_t>(c)] = model.basis(r, c).real();
      im[static_cast<std::size_t>(c)] = model.basis(r, c).imag();
    }
    real.push_back(std::move(re));
    imag.push_back(std::move(im));
  }
  return {
      {"format", "csoigo-subspace"},
      {"version", kSubspaceFormatVersion},
      {"rows", model.image_rows},
      {"cols", model.image_cols},
      {"feature_order", std::string(to_string(model.order))},
      {"K", k},
      {"d", d},
      {"effective_rank", model.effective_rank},
      {"spectrum", std::vector<double>(model.spectrum.begin(), model.spectrum.end())},
      {"basis_real", std::move(real)},
      {"basis_imag", std::move(imag)},
  };
}

SubspaceModel subspace_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw DataError("subspace model is not a JSON object");
  const int version = get_field<int>(doc, "version");
  if (version != kSubspaceFormatVersion)
    throw DataError("unsupported subspace model version " + std::to_string(version) + " (expected " +
                    std::to_string(kSubspaceFormatVersion) + ")");

  SubspaceModel model;
  model.image_rows = get_field<Eigen::Index>(doc, "rows");
  model.image_cols = get_field<Eigen::Index>(doc, "cols");
  try {
    model.order = parse_feature_order(get_field<std::string>(doc, "feature_order"));
  } catch (const InvalidArgument& e) {
    throw DataError(e.what());
  }
  const auto k = get_field<Eigen::Index>(doc, "K");
  const auto d = get_field<Eigen::Index>(doc, "d");
  model.effective_rank = get_field<Eigen::Index>(doc, "effective_rank");
  const auto spectrum = get_field<std::vector<double>>(doc, "spectrum");
  const auto real = get_field<std::vector<std::vector<double>>>(doc, "basis_real");
  const auto imag = get_field<std::vector<std::vector<double>>>(doc, "basis_imag");

  if (k < 1 || d < 1 || d > k || model.image_rows * model.image_cols != k)
    throw DataError("subspace model has inconsistent dimensions");
  if (static_cast<Eigen::Index>(spectrum.size()) != d || static_cast<Eigen::Index>(real.size()) != k ||
      static_cast<Eigen::Index>(imag.size()) != k)
    throw DataError("subspace model arrays do not match K and d");
  if (model.effective_rank < 0 || model.effective_rank > d) throw DataError("subspace model effective rank out of range");

  model.basis.resize(k, d);
  for (Eigen::Index r = 0; r < k; ++r) {
    const auto& re = real[static_cast<std::size_t>(r)];
    const auto& im = imag[static_cast<std::size_t>(r)];
    if (static_cast<Eigen::Index>(re.size()) != d || static_cast<Eigen::Index>(im.size()) != d)
      throw DataError("subspace model basis row has the wrong length");
    for (Eigen::Index c = 0; c < d; ++c)
      model.basis(r, c) = {re[static_cast<std::size_t>(c)], im[static_cast<std::size_t>(c)]};
  }
  model.spectrum = Eigen::Map<const Eigen::VectorXd>(spectrum.data(), d);
  if (!model.basis.allFinite() || !model.spectrum.allFinite()) throw DataError("subspace model contains non-finite values");
  return model;
}

}  // namespace csoigo
