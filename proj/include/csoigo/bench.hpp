#pragma once

#include "csoigo/dataset.hpp"
#include "csoigo/pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace csoigo {

struct DimensionSweep {
  Eigen::Index d_min = 1;
  Eigen::Index d_max = 1;
  Eigen::Index step = 1;

  std::vector<Eigen::Index> values() const;
};

// Every config must share the image dimensions so occlusions are paired.
// A config whose dim is 0 uses the largest feasible d, min(K, N_train).
struct ExperimentSpec {
  std::filesystem::path manifest;
  std::vector<RecognizerConfig> configs;
  std::vector<double> occlusions{0.0};
  std::optional<std::filesystem::path> occluder;
  std::vector<std::uint64_t> seeds{0};
  std::optional<DimensionSweep> sweep;
};

struct ResultRow {
  std::string config;
  FeatureOrder order = FeatureOrder::Second;
  ClassifierKind classifier = ClassifierKind::Crc;
  double occlusion = 0.0;
  Eigen::Index dim = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::uint64_t seed = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
};

struct ResultTable {
  std::vector<ResultRow> rows;
};

// Labeled images already resized to the experiment dimensions.
struct LoadedSplits {
  std::vector<LabeledImage> train;
  std::vector<LabeledImage> test;
};

LoadedSplits load_splits(const Manifest& manifest, Eigen::Index rows, Eigen::Index cols);

// Seed for the occlusion applied to test image `index` under `seed`.
std::uint64_t occlusion_seed(std::uint64_t seed, std::size_t index);

// Test set for one (seed, p) cell; identical for every config.
std::vector<GrayImage> occluded_test_set(const std::vector<LabeledImage>& test,
                                         double percentage, const GrayImage* occluder,
                                         std::uint64_t seed);

// In-memory core of run(): rows ordered by config, then p, then d, then seed.
ResultTable run_experiment(const LoadedSplits& data, const std::vector<RecognizerConfig>& configs,
                           const std::vector<double>& occlusions, const GrayImage* occluder,
                           const std::vector<std::uint64_t>& seeds,
                           const std::optional<DimensionSweep>& sweep);

ResultTable run(const ExperimentSpec& spec);

ResultTable sweep_dimension(ExperimentSpec spec, Eigen::Index d_min, Eigen::Index d_max,
                            Eigen::Index step);

struct BestDimension {
  std::string config;
  double occlusion = 0.0;
  Eigen::Index dim = 0;
  double mean_accuracy = 0.0;  // averaged over seeds
};

// For each (config, p), the d with the highest seed-averaged accuracy;
// ties go to the smaller d.
std::vector<BestDimension> best_dimensions(const ResultTable& table);

// Header: config,feature,classifier,p,d,n_train,n_test,seed,accuracy
void write_result_csv(const ResultTable& table, std::ostream& out);

// Header: label,e1,...,e{2d}; one row per manifest entry.
void export_embeddings(const Recognizer& rec, const Manifest& manifest, std::ostream& out);

}  // namespace csoigo
