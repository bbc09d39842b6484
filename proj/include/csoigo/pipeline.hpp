#pragma once

#include "csoigo/classify.hpp"
#include "csoigo/gradient.hpp"
#include "csoigo/image.hpp"
#include "csoigo/subspace.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace csoigo {

enum class ClassifierKind { Nnc, Crc };

std::string_view to_string(ClassifierKind kind);
ClassifierKind parse_classifier(std::string_view text);

inline constexpr double kDefaultLambda = 1e-3;
inline constexpr Eigen::Index kDefaultRows = 42;
inline constexpr Eigen::Index kDefaultCols = 30;

// (Second, Crc) is the full CSOIGO configuration.
struct RecognizerConfig {
  FeatureOrder order = FeatureOrder::Second;
  ClassifierKind classifier = ClassifierKind::Crc;
  Eigen::Index dim = 1;
  double lambda = kDefaultLambda;
  Eigen::Index rows = kDefaultRows;
  Eigen::Index cols = kDefaultCols;

  // "<feature>-<classifier>", e.g. "second-crc".
  std::string name() const;
};

struct LabeledImage {
  GrayImage image;
  Label label;
};

struct Prediction {
  Label label;
  double score = 0.0;  // score of the winning class
  std::vector<Label> classes;
  Eigen::VectorXd scores;
};

class Recognizer {
 public:
  Recognizer(RecognizerConfig config, SubspaceModel model, RealDictionary dictionary);

  const RecognizerConfig& config() const { return config_; }
  const SubspaceModel& model() const { return model_; }
  const RealDictionary& dictionary() const { return dictionary_; }
  const std::optional<CrcCoder>& coder() const { return coder_; }
  const std::vector<Label>& classes() const { return dictionary_.classes; }

  // Feature of an image after resizing to the model's dimensions.
  ComplexFeature features(const GrayImage& img) const;
  // Stacked real/imag embedding of an image.
  Eigen::VectorXd embed(const GrayImage& img) const;

  Prediction predict(const GrayImage& img) const;
  Prediction predict_embedding(const Eigen::VectorXd& stacked) const;

 private:
  RecognizerConfig config_;
  SubspaceModel model_;
  RealDictionary dictionary_;
  std::optional<CrcCoder> coder_;
};

// Training features, one column per image, after resizing.
FeatureMatrix build_feature_matrix(const std::vector<LabeledImage>& images,
                                   FeatureOrder order, Eigen::Index rows, Eigen::Index cols);

// Projects the training features through a fitted model and builds the
// dictionary (and coder, for CRC).
Recognizer assemble(const RecognizerConfig& config, SubspaceModel model,
                    const FeatureMatrix& features, std::vector<Label> labels);

Recognizer fit(const std::vector<LabeledImage>& images, const RecognizerConfig& config);

inline constexpr int kRecognizerFormatVersion = 1;

nlohmann::json recognizer_to_json(const Recognizer& rec);
Recognizer recognizer_from_json(const nlohmann::json& doc);

void save(const Recognizer& rec, const std::filesystem::path& path);
Recognizer load(const std::filesystem::path& path);

}  // namespace csoigo
