#pragma once

// Synthetic face-like data for tests: each class is a smooth surface built
// from Gaussian bumps; each sample adds a random planar shading ramp, small
// bump-amplitude jitter, and pixel noise.

#include "csoigo/image.hpp"
#include "csoigo/pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace csoigo::testing {

struct ToyFaceOptions {
  int classes = 10;
  int train_per_class = 7;
  int test_per_class = 7;
  Eigen::Index rows = 42;
  Eigen::Index cols = 30;
  int bumps = 20;
  double sigma_min = 0.8;      // bump widths, pixels
  double sigma_max = 2.0;
  double amplitude_min = 3.0;  // bump heights, intensity units
  double amplitude_max = 7.5;
  double pixel_noise = 0.25;   // std-dev, intensity units
  double shading_slope = 2.0;  // max |slope| of the per-sample ramp, per pixel
  double amplitude_jitter = 0.3;
  std::uint64_t seed = 1;
};

struct ToyFaceSet {
  std::vector<LabeledImage> train;
  std::vector<LabeledImage> test;
};

ToyFaceSet make_toy_faces(const ToyFaceOptions& options);

// High-contrast texture used as the square occluder.
GrayImage make_occluder(Eigen::Index side, std::uint64_t seed);

// Writes every image as PGM under `dir` plus `manifest.csv`; returns the
// manifest path. `test_from_train` lists the train images as test entries too.
std::filesystem::path write_dataset(const ToyFaceSet& set, const std::filesystem::path& dir,
                                    bool test_from_train = false);

}  // namespace csoigo::testing
