#include "csoigo/classify.hpp"

#include "csoigo/error.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace csoigo {

Eigen::VectorXd stack_real_imag(const Eigen::VectorXcd& embedding) {
  Eigen::VectorXd out(2 * embedding.size());
  out << embedding.real(), embedding.imag();
  return out;
}

Eigen::MatrixXd stack_real_imag(const Eigen::MatrixXcd& embeddings) {
  Eigen::MatrixXd out(2 * embeddings.rows(), embeddings.cols());
  out << embeddings.real(), embeddings.imag();
  return out;
}

RealDictionary make_dictionary(Eigen::MatrixXd atoms, std::vector<Label> labels) {
  if (atoms.cols() == 0) throw InvalidArgument("dictionary needs at least one column");
  if (static_cast<Eigen::Index>(labels.size()) != atoms.cols())
    throw InvalidArgument("dictionary has " + std::to_string(atoms.cols()) + " columns but " +
                          std::to_string(labels.size()) + " labels");

  RealDictionary dict;
  dict.atoms = std::move(atoms);
  dict.labels = std::move(labels);
  dict.classes = dict.labels;
  std::sort(dict.classes.begin(), dict.classes.end());
  dict.classes.erase(std::unique(dict.classes.begin(), dict.classes.end()), dict.classes.end());
  dict.columns_of_class.resize(dict.classes.size());
  dict.class_of.reserve(dict.labels.size());
  for (std::size_t i = 0; i < dict.labels.size(); ++i) {
    const auto it = std::lower_bound(dict.classes.begin(), dict.classes.end(), dict.labels[i]);
    const int c = static_cast<int>(it - dict.classes.begin());
    dict.class_of.push_back(c);
    dict.columns_of_class[static_cast<std::size_t>(c)].push_back(static_cast<Eigen::Index>(i));
  }
  return dict;
}

CrcCoder::CrcCoder(RealDictionary dictionary, double lambda)
    : dictionary_(std::move(dictionary)), lambda_(lambda) {
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) throw InvalidArgument("lambda must be a positive finite number");
  const Eigen::MatrixXd& d = dictionary_.atoms;
  if (d.cols() == 0) throw InvalidArgument("dictionary needs at least one column");
  if (!d.allFinite()) throw DataError("dictionary contains non-finite values");

  // (D^T D + lambda I)^{-1} D^T = V diag(s / (s^2 + lambda)) U^T
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(d, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericError("singular value decomposition of the dictionary failed");
  const Eigen::ArrayXd s = svd.singularValues().array();
  const Eigen::VectorXd gain = (s / (s.square() + lambda_)).matrix();
  operator_ = svd.matrixV() * gain.asDiagonal() * svd.matrixU().transpose();
  if (!operator_.allFinite()) throw NumericError("ridge solve produced non-finite values");
}

CrcCoder crc_fit(RealDictionary dictionary, double lambda) { return CrcCoder(std::move(dictionary), lambda); }

Eigen::VectorXd Coefficients::class_slice(const RealDictionary& dict, int c) const {
  const auto& cols = dict.columns_of_class.at(static_cast<std::size_t>(c));
  Eigen::VectorXd out(static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) out[static_cast<Eigen::Index>(i)] = alpha[cols[i]];
  return out;
}

Coefficients crc_code(const CrcCoder& coder, const Eigen::VectorXd& query) {
  if (query.size() != coder.solve_operator().cols())
    throw InvalidArgument("query length " + std::to_string(query.size()) + " does not match dictionary height " +
                          std::to_string(coder.solve_operator().cols()));
  return {coder.solve_operator() * query};
}

Decision crc_classify(const CrcCoder& coder, const Eigen::VectorXd& query) {
  const Coefficients coef = crc_code(coder, query);
  const RealDictionary& dict = coder.dictionary();

  Decision out;
  out.scores.resize(dict.num_classes());
  double best = std::numeric_limits<double>::infinity();
  for (int c = 0; c < dict.num_classes(); ++c) {
    Eigen::VectorXd residual = query;
    double coef_sq = 0.0;
    for (const Eigen::Index i : dict.columns_of_class[static_cast<std::size_t>(c)]) {
      residual.noalias() -= coef.alpha[i] * dict.atoms.col(i);
      coef_sq += coef.alpha[i] * coef.alpha[i];
    }
    const double r = coef_sq > 0.0 ? residual.norm() / std::sqrt(coef_sq) : std::numeric_limits<double>::infinity();
    out.scores[c] = r;
    if (r < best) {
      best = r;
      out.class_index = c;
    }
  }
  out.label = dict.classes[static_cast<std::size_t>(out.class_index)];
  return out;
}

Decision nnc_classify(const RealDictionary& dict, const Eigen::VectorXd& query) {
  if (dict.size() == 0) throw InvalidArgument("dictionary is empty");
  if (query.size() != dict.atoms.rows())
    throw InvalidArgument("query length " + std::to_string(query.size()) + " does not match dictionary height " +
                          std::to_string(dict.atoms.rows()));

  Decision out;
  out.scores = Eigen::VectorXd::Constant(dict.num_classes(), std::numeric_limits<double>::infinity());
  double best = std::numeric_limits<double>::infinity();
  Eigen::Index best_col = 0;
  for (Eigen::Index i = 0; i < dict.size(); ++i) {
    const double dist = (dict.atoms.col(i) - query).norm();
    const int c = dict.class_of[static_cast<std::size_t>(i)];
    out.scores[c] = std::min(out.scores[c], dist);
    if (dist < best) {
      best = dist;
      best_col = i;
    }
  }
  out.class_index = dict.class_of[static_cast<std::size_t>(best_col)];
  out.label = dict.classes[static_cast<std::size_t>(out.class_index)];
  return out;
}

}  // namespace csoigo
