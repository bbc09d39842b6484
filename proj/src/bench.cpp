#include "csoigo/bench.hpp"

#include "csoigo/error.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <ostream>
#include <string>

namespace csoigo {

std::vector<Eigen::Index> DimensionSweep::values() const {
  if (d_min < 1 || d_max < d_min || step < 1)
    throw InvalidArgument("invalid dimension range " + std::to_string(d_min) + ".." + std::to_string(d_max) +
                          " step " + std::to_string(step));
  std::vector<Eigen::Index> out;
  for (Eigen::Index d = d_min; d <= d_max; d += step) out.push_back(d);
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

LoadedSplits load_splits(const Manifest& manifest, Eigen::Index rows, Eigen::Index cols) {
  LoadedSplits out;
  for (const auto& entry : manifest.entries) {
    LabeledImage item{resize(load_image(entry.path), rows, cols), entry.label};
    (entry.split == Split::Train ? out.train : out.test).push_back(std::move(item));
  }
  if (out.train.empty()) throw DataError("manifest has an empty train split");
  if (out.test.empty()) throw DataError("manifest has an empty test split");
  return out;
}

std::uint64_t occlusion_seed(std::uint64_t seed, std::size_t index) {
  return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(index));
}

std::vector<GrayImage> occluded_test_set(const std::vector<LabeledImage>& test, double percentage,
                                         const GrayImage* occluder, std::uint64_t seed) {
  std::vector<GrayImage> out;
  out.reserve(test.size());
  OcclusionSpec spec;
  spec.percentage = percentage;
  if (percentage > 0.0) {
    if (occluder == nullptr) throw InvalidArgument("an occluder image is required when p > 0");
    spec.occluder = *occluder;
  }
  for (std::size_t i = 0; i < test.size(); ++i) {
    spec.seed = occlusion_seed(seed, i);
    out.push_back(occlude(test[i].image, spec).image);
  }
  return out;
}

ResultTable run_experiment(const LoadedSplits& data, const std::vector<RecognizerConfig>& configs,
                           const std::vector<double>& occlusions, const GrayImage* occluder,
                           const std::vector<std::uint64_t>& seeds, const std::optional<DimensionSweep>& sweep) {
  if (configs.empty()) throw InvalidArgument("no configurations to evaluate");
  if (occlusions.empty()) throw InvalidArgument("no occlusion percentages given");
  if (seeds.empty()) throw InvalidArgument("no seeds given");
  if (data.train.empty() || data.test.empty()) throw DataError("empty train or test split");

  const Eigen::Index rows = configs.front().rows;
  const Eigen::Index cols = configs.front().cols;
  for (const auto& cfg : configs)
    if (cfg.rows != rows || cfg.cols != cols)
      throw InvalidArgument("all configurations must share the same image dimensions");
  for (const double p : occlusions) {
    occlusion_side(p, rows, cols);
    if (p > 0.0 && occluder == nullptr) throw InvalidArgument("an occluder image is required when p > 0");
  }

  const Eigen::Index k = rows * cols;
  const auto n_train = static_cast<Eigen::Index>(data.train.size());
  const Eigen::Index max_dim = std::min(k, n_train);
  std::optional<std::vector<Eigen::Index>> swept;
  if (sweep) {
    swept = sweep->values();
    if (swept->back() > max_dim)
      throw InvalidArgument("d out of range: sweep reaches " + std::to_string(swept->back()) +
                            " but min(K, N_train) = " + std::to_string(max_dim));
  }

  std::vector<Label> labels;
  for (const auto& item : data.train) labels.push_back(item.label);

  // Occluded test sets are shared by every config: one per (p, seed).
  std::map<std::pair<std::size_t, std::size_t>, std::vector<GrayImage>> tests;
  for (std::size_t pi = 0; pi < occlusions.size(); ++pi)
    for (std::size_t si = 0; si < seeds.size(); ++si)
      tests[{pi, si}] = occluded_test_set(data.test, occlusions[pi], occluder, seeds[si]);

  std::map<FeatureOrder, FeatureMatrix> train_features;
  std::map<std::tuple<FeatureOrder, std::size_t, std::size_t>, FeatureMatrix> test_features;
  auto features_for = [&](FeatureOrder order, std::size_t pi, std::size_t si) -> const FeatureMatrix& {
    auto key = std::make_tuple(order, pi, si);
    auto it = test_features.find(key);
    if (it == test_features.end()) {
      const auto& imgs = tests.at({pi, si});
      FeatureMatrix x(k, static_cast<Eigen::Index>(imgs.size()));
      for (std::size_t i = 0; i < imgs.size(); ++i) x.col(static_cast<Eigen::Index>(i)) = extract(imgs[i], order);
      it = test_features.emplace(key, std::move(x)).first;
    }
    return it->second;
  };

  ResultTable table;
  for (const auto& cfg : configs) {
    std::vector<Eigen::Index> dims;
    if (swept) {
      dims = *swept;
    } else {
      const Eigen::Index d = cfg.dim == 0 ? max_dim : cfg.dim;
      if (d < 1 || d > max_dim)
        throw InvalidArgument("d out of range: d = " + std::to_string(d) + " but min(K, N_train) = " +
                              std::to_string(max_dim));
      dims = {d};
    }

    auto it = train_features.find(cfg.order);
    if (it == train_features.end())
      it = train_features.emplace(cfg.order, build_feature_matrix(data.train, cfg.order, rows, cols)).first;
    const FeatureMatrix& x = it->second;
    const SubspaceModel full = fit_complex_pca(x, *std::max_element(dims.begin(), dims.end()));

    for (std::size_t pi = 0; pi < occlusions.size(); ++pi) {
      for (const Eigen::Index d : dims) {
        RecognizerConfig cell = cfg;
        cell.dim = d;
        const Recognizer rec = assemble(cell, full.truncated(d), x, labels);
        for (std::size_t si = 0; si < seeds.size(); ++si) {
          const FeatureMatrix& t = features_for(cfg.order, pi, si);
          const Eigen::MatrixXd queries = stack_real_imag(project_all(rec.model(), t));
          std::size_t correct = 0;
          for (Eigen::Index i = 0; i < queries.cols(); ++i)
            if (rec.predict_embedding(queries.col(i)).label == data.test[static_cast<std::size_t>(i)].label) ++correct;

          ResultRow row;
          row.config = cfg.name();
          row.order = cfg.order;
          row.classifier = cfg.classifier;
          row.occlusion = occlusions[pi];
          row.dim = d;
          row.n_train = data.train.size();
          row.n_test = data.test.size();
          row.seed = seeds[si];
          row.correct = correct;
          row.accuracy = static_cast<double>(correct) / static_cast<double>(data.test.size());
          table.rows.push_back(std::move(row));
        }
      }
    }
  }
  return table;
}

ResultTable run(const ExperimentSpec& spec) {
  if (spec.configs.empty()) throw InvalidArgument("no configurations to evaluate");
  const Manifest manifest = load_manifest(spec.manifest);
  const Eigen::Index rows = spec.configs.front().rows;
  const Eigen::Index cols = spec.configs.front().cols;
  std::optional<GrayImage> occluder;
  if (spec.occluder) occluder = load_image(*spec.occluder);
  const LoadedSplits data = load_splits(manifest, rows, cols);
  return run_experiment(data, spec.configs, spec.occlusions, occluder ? &*occluder : nullptr, spec.seeds, spec.sweep);
}

ResultTable sweep_dimension(ExperimentSpec spec, Eigen::Index d_min, Eigen::Index d_max, Eigen::Index step) {
  spec.sweep = DimensionSweep{d_min, d_max, step};
  spec.sweep->values();
  return run(spec);
}

std::vector<BestDimension> best_dimensions(const ResultTable& table) {
  struct Cell {
    std::string config;
    double occlusion;
    std::map<Eigen::Index, std::pair<double, std::size_t>> by_dim;  // sum, count
  };
  std::vector<Cell> cells;
  for (const auto& row : table.rows) {
    auto it = std::find_if(cells.begin(), cells.end(), [&](const Cell& c) {
      return c.config == row.config && c.occlusion == row.occlusion;
    });
    if (it == cells.end()) it = cells.insert(cells.end(), Cell{row.config, row.occlusion, {}});
    auto& acc = it->by_dim[row.dim];
    acc.first += row.accuracy;
    acc.second += 1;
  }
  std::vector<BestDimension> out;
  for (const auto& cell : cells) {
    BestDimension best{cell.config, cell.occlusion, 0, -1.0};
    for (const auto& [d, acc] : cell.by_dim) {
      const double mean = acc.first / static_cast<double>(acc.second);
      if (mean > best.mean_accuracy) {
        best.mean_accuracy = mean;
        best.dim = d;
      }
    }
    out.push_back(best);
  }
  return out;
}

void write_result_csv(const ResultTable& table, std::ostream& out) {
  out << "config,feature,classifier,p,d,n_train,n_test,seed,accuracy\n";
  for (const auto& r : table.rows) {
    out << csv_field(r.config) << ',' << to_string(r.order) << ',' << to_string(r.classifier) << ','
        << format_number(r.occlusion) << ',' << r.dim << ',' << r.n_train << ',' << r.n_test << ',' << r.seed << ','
        << format_number(r.accuracy) << '\n';
  }
}

void export_embeddings(const Recognizer& rec, const Manifest& manifest, std::ostream& out) {
  const Eigen::Index width = 2 * rec.model().dim();
  out << "label";
  for (Eigen::Index i = 1; i <= width; ++i) out << ",e" << i;
  out << '\n';
  for (const auto& entry : manifest.entries) {
    const Eigen::VectorXd e = rec.embed(load_image(entry.path));
    out << csv_field(entry.label);
    for (Eigen::Index i = 0; i < e.size(); ++i) out << ',' << format_number(e[i]);
    out << '\n';
  }
}

}  // namespace csoigo
