#include "csoigo/pipeline.hpp"

#include "csoigo/dataset.hpp"
#include "csoigo/error.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace csoigo {

std::string_view to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::Nnc: return "nnc";
    case ClassifierKind::Crc: return "crc";
  }
  return "unknown";
}

ClassifierKind parse_classifier(std::string_view text) {
  if (text == "nnc") return ClassifierKind::Nnc;
  if (text == "crc") return ClassifierKind::Crc;
  throw InvalidArgument("unknown classifier '" + std::string(text) + "' (expected nnc or crc)");
}

std::string RecognizerConfig::name() const {
  return std::string(to_string(order)) + "-" + std::string(to_string(classifier));
}

namespace {

void validate(const RecognizerConfig& config) {
  const Eigen::Index min_side = config.order == FeatureOrder::Second ? 3 : 2;
  if (config.rows < min_side || config.cols < min_side)
    throw InvalidArgument("image dimensions " + std::to_string(config.rows) + "x" + std::to_string(config.cols) +
                          " are too small for " + std::string(to_string(config.order)) + " features");
  if (config.dim < 1) throw InvalidArgument("d out of range: d must be positive");
  if (config.classifier == ClassifierKind::Crc && !(config.lambda > 0.0 && std::isfinite(config.lambda)))
    throw InvalidArgument("lambda must be a positive finite number");
}

GrayImage to_model_size(const GrayImage& img, Eigen::Index rows, Eigen::Index cols) {
  if (img.rows() == rows && img.cols() == cols) return img;
  return resize(img, rows, cols);
}

}  // namespace

Recognizer::Recognizer(RecognizerConfig config, SubspaceModel model, RealDictionary dictionary)
    : config_(std::move(config)), model_(std::move(model)), dictionary_(std::move(dictionary)) {
  validate(config_);
  if (model_.dim() != config_.dim) throw InvalidArgument("model dimension does not match the configured d");
  if (model_.feature_length() != config_.rows * config_.cols)
    throw InvalidArgument("model feature length does not match the configured image size");
  if (dictionary_.atoms.rows() != 2 * model_.dim()) throw InvalidArgument("dictionary height must be 2d");
  model_.image_rows = config_.rows;
  model_.image_cols = config_.cols;
  model_.order = config_.order;
  if (config_.classifier == ClassifierKind::Crc) coder_.emplace(dictionary_, config_.lambda);
}

ComplexFeature Recognizer::features(const GrayImage& img) const {
  return extract(to_model_size(img, config_.rows, config_.cols), config_.order);
}

Eigen::VectorXd Recognizer::embed(const GrayImage& img) const {
  return stack_real_imag(project(model_, features(img)));
}

Prediction Recognizer::predict_embedding(const Eigen::VectorXd& stacked) const {
  const Decision decision =
      coder_ ? crc_classify(*coder_, stacked) : nnc_classify(dictionary_, stacked);
  Prediction out;
  out.label = decision.label;
  out.score = decision.scores[decision.class_index];
  out.classes = dictionary_.classes;
  out.scores = decision.scores;
  return out;
}

Prediction Recognizer::predict(const GrayImage& img) const { return predict_embedding(embed(img)); }

FeatureMatrix build_feature_matrix(const std::vector<LabeledImage>& images, FeatureOrder order,
                                   Eigen::Index rows, Eigen::Index cols) {
  FeatureMatrix x(rows * cols, static_cast<Eigen::Index>(images.size()));
  for (std::size_t i = 0; i < images.size(); ++i)
    x.col(static_cast<Eigen::Index>(i)) = extract(to_model_size(images[i].image, rows, cols), order);
  return x;
}

Recognizer assemble(const RecognizerConfig& config, SubspaceModel model, const FeatureMatrix& features,
                    std::vector<Label> labels) {
  Eigen::MatrixXd atoms = stack_real_imag(project_all(model, features));
  return Recognizer(config, std::move(model), make_dictionary(std::move(atoms), std::move(labels)));
}

Recognizer fit(const std::vector<LabeledImage>& images, const RecognizerConfig& config) {
  validate(config);
  if (images.empty()) throw InvalidArgument("fit needs at least one training image");
  const FeatureMatrix x = build_feature_matrix(images, config.order, config.rows, config.cols);
  std::vector<Label> labels;
  labels.reserve(images.size());
  for (const auto& item : images) labels.push_back(item.label);
  return assemble(config, fit_complex_pca(x, config.dim), x, std::move(labels));
}

nlohmann::json recognizer_to_json(const Recognizer& rec) {
  const RecognizerConfig& cfg = rec.config();
  const Eigen::MatrixXd& atoms = rec.dictionary().atoms;
  nlohmann::json columns = nlohmann::json::array();
  for (Eigen::Index c = 0; c < atoms.cols(); ++c)
    columns.push_back(std::vector<double>(atoms.col(c).begin(), atoms.col(c).end()));
  return {
      {"format", "csoigo-recognizer"},
      {"format_version", kRecognizerFormatVersion},
      {"config",
       {{"feature_order", std::string(to_string(cfg.order))},
        {"classifier", std::string(to_string(cfg.classifier))},
        {"d", cfg.dim},
        {"lambda", cfg.lambda},
        {"rows", cfg.rows},
        {"cols", cfg.cols}}},
      {"lambda", cfg.lambda},
      {"subspace", subspace_to_json(rec.model())},
      {"labels", rec.dictionary().labels},
      {"dictionary", std::move(columns)},
  };
}

Recognizer recognizer_from_json(const nlohmann::json& doc) {
  try {
    if (!doc.is_object() || doc.value("format", "") != "csoigo-recognizer")
      throw DataError("not a csoigo recognizer model");
    if (!doc.contains("format_version")) throw DataError("model has no format_version field");
    const int version = doc.at("format_version").get<int>();
    if (version != kRecognizerFormatVersion)
      throw DataError("unsupported model format version " + std::to_string(version) + " (expected " +
                      std::to_string(kRecognizerFormatVersion) + ")");

    const auto& c = doc.at("config");
    RecognizerConfig cfg;
    cfg.order = parse_feature_order(c.at("feature_order").get<std::string>());
    cfg.classifier = parse_classifier(c.at("classifier").get<std::string>());
    cfg.dim = c.at("d").get<Eigen::Index>();
    cfg.lambda = c.at("lambda").get<double>();
    cfg.rows = c.at("rows").get<Eigen::Index>();
    cfg.cols = c.at("cols").get<Eigen::Index>();

    SubspaceModel model = subspace_from_json(doc.at("subspace"));
    if (model.order != cfg.order || model.image_rows != cfg.rows || model.image_cols != cfg.cols)
      throw DataError("subspace metadata disagrees with the recognizer config");

    auto labels = doc.at("labels").get<std::vector<Label>>();
    const auto columns = doc.at("dictionary").get<std::vector<std::vector<double>>>();
    if (columns.size() != labels.size()) throw DataError("dictionary and label counts differ");
    Eigen::MatrixXd atoms(2 * model.dim(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (static_cast<Eigen::Index>(columns[i].size()) != atoms.rows())
        throw DataError("dictionary column has the wrong height");
      atoms.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::VectorXd>(columns[i].data(), atoms.rows());
    }
    return Recognizer(cfg, std::move(model), make_dictionary(std::move(atoms), std::move(labels)));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("corrupt model: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(std::string("corrupt model: ") + e.what());
  }
}

void save(const Recognizer& rec, const std::filesystem::path& path) {
  const std::string text = recognizer_to_json(rec).dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model '" + path.string() + "'");
  out << text << '\n';
  if (!out) throw DataError("failed writing model '" + path.string() + "'");
}

Recognizer load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("cannot parse model '" + path.string() + "': " + e.what());
  }
  return recognizer_from_json(doc);
}

}  // namespace csoigo
