#include "cli.hpp"

#include "csoigo/bench.hpp"
#include "csoigo/dataset.hpp"
#include "csoigo/error.hpp"
#include "csoigo/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

namespace csoigo::cli {

namespace {

struct ModelOptions {
  std::string features = "second";
  std::string classifier = "crc";
  Eigen::Index dim = 0;
  double lambda = kDefaultLambda;
  Eigen::Index width = kDefaultCols;
  Eigen::Index height = kDefaultRows;
};

struct EvaluateOptions {
  std::string manifest;
  std::vector<std::string> configs{"second-crc"};
  std::vector<double> occlusions{0.0};
  std::string occluder;
  std::vector<std::uint64_t> seeds{0};
  std::string report;
  Eigen::Index dim = 0;
  double lambda = kDefaultLambda;
  Eigen::Index width = kDefaultCols;
  Eigen::Index height = kDefaultRows;
  Eigen::Index d_min = 1;
  Eigen::Index d_max = 1;
  Eigen::Index step = 1;
};

std::vector<RecognizerConfig> parse_configs(const std::vector<std::string>& tokens, const EvaluateOptions& opt) {
  std::vector<std::string> expanded;
  for (const auto& t : tokens) {
    if (t == "all") {
      for (const char* f : {"raw", "first", "second"})
        for (const char* c : {"nnc", "crc"}) expanded.push_back(std::string(f) + "-" + c);
    } else if (t == "csoigo") {
      expanded.emplace_back("second-crc");
    } else {
      expanded.push_back(t);
    }
  }
  std::vector<RecognizerConfig> out;
  for (const auto& name : expanded) {
    const auto dash = name.find('-');
    if (dash == std::string::npos)
      throw InvalidArgument("config '" + name + "' is not of the form <feature>-<classifier>");
    RecognizerConfig cfg;
    cfg.order = parse_feature_order(name.substr(0, dash));
    cfg.classifier = parse_classifier(name.substr(dash + 1));
    cfg.dim = opt.dim;
    cfg.lambda = opt.lambda;
    cfg.rows = opt.height;
    cfg.cols = opt.width;
    out.push_back(cfg);
  }
  return out;
}

void add_model_flags(CLI::App& cmd, ModelOptions& opt) {
  cmd.add_option("--features", opt.features, "Feature order: raw, first or second")
      ->check(CLI::IsMember({"raw", "first", "second"}))
      ->capture_default_str();
  cmd.add_option("--classifier", opt.classifier, "Classifier: nnc or crc")
      ->check(CLI::IsMember({"nnc", "crc"}))
      ->capture_default_str();
  cmd.add_option("--dim", opt.dim, "Number of principal components d (0 = min(K, N))")->capture_default_str();
  cmd.add_option("--lambda", opt.lambda, "CRC regularization")->capture_default_str();
  cmd.add_option("--width", opt.width, "Image width n")->capture_default_str();
  cmd.add_option("--height", opt.height, "Image height m")->capture_default_str();
}

void add_evaluate_flags(CLI::App& cmd, EvaluateOptions& opt) {
  cmd.add_option("--manifest", opt.manifest, "CSV manifest (path,label,split)")->required();
  cmd.add_option("--configs", opt.configs, "Comma-separated <feature>-<classifier> list, 'csoigo' or 'all'")
      ->delimiter(',')
      ->capture_default_str();
  cmd.add_option("--occlude", opt.occlusions, "Comma-separated occlusion fractions in [0, 1)")
      ->delimiter(',')
      ->capture_default_str();
  cmd.add_option("--occluder", opt.occluder, "Occluder image (required when any fraction > 0)");
  cmd.add_option("--seeds", opt.seeds, "Comma-separated occlusion seeds")->delimiter(',')->capture_default_str();
  cmd.add_option("--report", opt.report, "Output CSV path")->required();
  cmd.add_option("--lambda", opt.lambda, "CRC regularization")->capture_default_str();
  cmd.add_option("--width", opt.width, "Image width n")->capture_default_str();
  cmd.add_option("--height", opt.height, "Image height m")->capture_default_str();
}

ExperimentSpec make_spec(const EvaluateOptions& opt) {
  ExperimentSpec spec;
  spec.manifest = opt.manifest;
  spec.configs = parse_configs(opt.configs, opt);
  spec.occlusions = opt.occlusions;
  if (!opt.occluder.empty()) spec.occluder = opt.occluder;
  spec.seeds = opt.seeds;
  return spec;
}

void write_report(const ResultTable& table, const std::string& path, std::ostream& out) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot write report '" + path + "'");
  write_result_csv(table, file);
  if (!file) throw DataError("failed writing report '" + path + "'");
  out << "best d per config (seed-averaged accuracy):\n";
  for (const auto& best : best_dimensions(table))
    out << "  " << best.config << "  p=" << best.occlusion << "  d=" << best.dim << "  accuracy=" << std::fixed
        << std::setprecision(4) << best.mean_accuracy << std::defaultfloat << '\n';
}

int cmd_train(const std::string& manifest_path, const ModelOptions& opt, const std::string& out_path,
              std::ostream& out) {
  const Manifest manifest = load_manifest(manifest_path);
  std::vector<LabeledImage> train;
  for (const auto& entry : manifest.select(Split::Train)) train.push_back({load_image(entry.path), entry.label});
  if (train.empty()) throw DataError("manifest has no train entries");

  RecognizerConfig cfg;
  cfg.order = parse_feature_order(opt.features);
  cfg.classifier = parse_classifier(opt.classifier);
  cfg.lambda = opt.lambda;
  cfg.rows = opt.height;
  cfg.cols = opt.width;
  cfg.dim = opt.dim == 0 ? std::min<Eigen::Index>(cfg.rows * cfg.cols, static_cast<Eigen::Index>(train.size()))
                         : opt.dim;
  const Recognizer rec = fit(train, cfg);
  save(rec, out_path);
  out << "N=" << train.size() << " K=" << rec.model().feature_length() << " d=" << rec.model().dim()
      << " effective_rank=" << rec.model().effective_rank << '\n';
  if (rec.model().rank_deficient())
    out << "warning: d exceeds the numerical rank of the training features\n";
  return kOk;
}

int cmd_predict(const std::string& model_path, const std::string& image_path, bool verbose, std::ostream& out) {
  const Recognizer rec = load(model_path);
  const Prediction p = rec.predict(load_image(image_path));
  out << std::setprecision(17) << p.label << '\t' << p.score << '\n';
  if (verbose) {
    const char* kind = rec.config().classifier == ClassifierKind::Crc ? "residual" : "distance";
    for (std::size_t c = 0; c < p.classes.size(); ++c)
      out << "  " << p.classes[c] << '\t' << kind << '\t' << p.scores[static_cast<Eigen::Index>(c)] << '\n';
  }
  return kOk;
}

int cmd_occlude(const std::string& image_path, const std::string& occluder_path, double percent,
                std::uint64_t seed, Eigen::Index width, Eigen::Index height, const std::string& out_path,
                std::ostream& out) {
  GrayImage img = load_image(image_path);
  if (width > 0 || height > 0) img = resize(img, height > 0 ? height : img.rows(), width > 0 ? width : img.cols());
  OcclusionSpec spec;
  spec.percentage = percent;
  spec.seed = seed;
  if (percent > 0.0) {
    if (occluder_path.empty()) throw InvalidArgument("--occluder is required when --percent > 0");
    spec.occluder = load_image(occluder_path);
  }
  const OccludedImage result = occlude(img, spec);
  save_image(result.image, out_path);
  out << "row=" << result.region.row << " col=" << result.region.col << " side=" << result.region.side << '\n';
  return kOk;
}

int cmd_export(const std::string& model_path, const std::string& manifest_path, const std::string& out_path) {
  const Recognizer rec = load(model_path);
  const Manifest manifest = load_manifest(manifest_path);
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw DataError("cannot write '" + out_path + "'");
  export_embeddings(rec, manifest, file);
  if (!file) throw DataError("failed writing '" + out_path + "'");
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Second-order gradient orientation face recognition (complex PCA + collaborative representation)",
               "csoigo"};
  app.require_subcommand(1);

  std::string manifest, model_out;
  ModelOptions train_opt;
  auto* train = app.add_subcommand("train", "Fit a recognizer on the train split of a manifest");
  train->add_option("--manifest", manifest, "CSV manifest (path,label,split)")->required();
  train->add_option("--out", model_out, "Output model path")->required();
  add_model_flags(*train, train_opt);

  std::string model_path, image_path;
  bool verbose = false;
  auto* predict = app.add_subcommand("predict", "Classify one image with a saved model");
  predict->add_option("--model", model_path, "Model file")->required();
  predict->add_option("--image", image_path, "Image (PNG or PGM); resized to the model size")->required();
  predict->add_flag("--verbose,-v", verbose, "List every class score");

  EvaluateOptions eval_opt;
  auto* evaluate = app.add_subcommand("evaluate", "Occlusion benchmark over configurations and seeds");
  add_evaluate_flags(*evaluate, eval_opt);
  evaluate->add_option("--dim", eval_opt.dim, "Number of principal components d (0 = min(K, N_train))")
      ->capture_default_str();

  EvaluateOptions sweep_opt;
  auto* sweep = app.add_subcommand("sweep", "Accuracy as a function of d");
  add_evaluate_flags(*sweep, sweep_opt);
  sweep->add_option("--d-min", sweep_opt.d_min, "Smallest d")->required();
  sweep->add_option("--d-max", sweep_opt.d_max, "Largest d")->required();
  sweep->add_option("--step", sweep_opt.step, "Step between d values")->capture_default_str();

  std::string occluder_path, occlude_out;
  double percent = 0.0;
  std::uint64_t seed = 0;
  Eigen::Index occ_width = 0, occ_height = 0;
  auto* occ = app.add_subcommand("occlude", "Paste a square occluder onto an image");
  occ->add_option("--image", image_path, "Input image")->required();
  occ->add_option("--occluder", occluder_path, "Occluder image");
  occ->add_option("--percent", percent, "Covered fraction of the image area, in [0, 1)")->required();
  occ->add_option("--seed", seed, "Placement seed")->capture_default_str();
  occ->add_option("--width", occ_width, "Resize to this width first (0 = keep)");
  occ->add_option("--height", occ_height, "Resize to this height first (0 = keep)");
  occ->add_option("--out", occlude_out, "Output image (.png or .pgm)")->required();

  std::string export_out;
  auto* exp = app.add_subcommand("export-embeddings", "Write stacked embeddings of every manifest image as CSV");
  exp->add_option("--model", model_path, "Model file")->required();
  exp->add_option("--manifest", manifest, "CSV manifest")->required();
  exp->add_option("--out", export_out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "csoigo: error: " << e.what() << '\n';
    const CLI::App* shown = &app;
    for (const auto* sub : app.get_subcommands()) shown = sub;
    err << shown->help();
    return kUsage;
  }

  try {
    if (*train) return cmd_train(manifest, train_opt, model_out, out);
    if (*predict) return cmd_predict(model_path, image_path, verbose, out);
    if (*evaluate) {
      const ResultTable table = run(make_spec(eval_opt));
      write_report(table, eval_opt.report, out);
      return kOk;
    }
    if (*sweep) {
      const ResultTable table =
          sweep_dimension(make_spec(sweep_opt), sweep_opt.d_min, sweep_opt.d_max, sweep_opt.step);
      write_report(table, sweep_opt.report, out);
      return kOk;
    }
    if (*occ) return cmd_occlude(image_path, occluder_path, percent, seed, occ_width, occ_height, occlude_out, out);
    if (*exp) return cmd_export(model_path, manifest, export_out);
  } catch (const InvalidArgument& e) {
    err << "csoigo: error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericError& e) {
    err << "csoigo: error: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    err << "csoigo: error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}

}  // namespace csoigo::cli
