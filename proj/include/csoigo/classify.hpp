#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace csoigo {

using Label = std::string;

// Real dictionary built from stacked embeddings. Columns keep training
// order; `classes` is the sorted set of distinct labels and `class_of` maps
// each column to its index in `classes`.
struct RealDictionary {
  Eigen::MatrixXd atoms;  // (2d) x N
  std::vector<Label> labels;
  std::vector<Label> classes;
  std::vector<int> class_of;
  std::vector<std::vector<Eigen::Index>> columns_of_class;

  Eigen::Index size() const { return atoms.cols(); }
  Eigen::Index num_classes() const { return static_cast<Eigen::Index>(classes.size()); }
};

// [real(z); imag(z)]
Eigen::VectorXd stack_real_imag(const Eigen::VectorXcd& embedding);
Eigen::MatrixXd stack_real_imag(const Eigen::MatrixXcd& embeddings);

// Attaches labels and builds the per-class column index.
RealDictionary make_dictionary(Eigen::MatrixXd atoms, std::vector<Label> labels);

// Ridge coder with the operator P = (D^T D + lambda I)^{-1} D^T cached, so
// coding a query is one matrix-vector product. P is assembled from the thin
// SVD of D.
class CrcCoder {
 public:
  CrcCoder(RealDictionary dictionary, double lambda);

  const RealDictionary& dictionary() const { return dictionary_; }
  double lambda() const { return lambda_; }
  const Eigen::MatrixXd& solve_operator() const { return operator_; }

 private:
  RealDictionary dictionary_;
  double lambda_;
  Eigen::MatrixXd operator_;  // N x (2d)
};

CrcCoder crc_fit(RealDictionary dictionary, double lambda);

struct Coefficients {
  Eigen::VectorXd alpha;

  // Coefficients belonging to class `c`, in dictionary column order.
  Eigen::VectorXd class_slice(const RealDictionary& dict, int c) const;
};

Coefficients crc_code(const CrcCoder& coder, const Eigen::VectorXd& query);

struct Decision {
  Label label;
  int class_index = 0;
  // One score per class in `classes` order: regularized residuals for CRC,
  // nearest-column distances for NNC.
  Eigen::VectorXd scores;
};

// r_j = ||y - D_j a_j|| / ||a_j||, with r_j = +inf when a_j is zero. Returns
// the first class attaining the minimum.
Decision crc_classify(const CrcCoder& coder, const Eigen::VectorXd& query);

// Euclidean nearest column; ties resolve to the smaller column index.
Decision nnc_classify(const RealDictionary& dictionary, const Eigen::VectorXd& query);

}  // namespace csoigo
