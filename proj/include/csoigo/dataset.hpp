#pragma once

#include "csoigo/image.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace csoigo {

enum class Split { Train, Test };

struct ManifestEntry {
  std::filesystem::path path;  // resolved against the manifest's directory
  std::string label;
  Split split = Split::Train;
};

struct Manifest {
  std::vector<ManifestEntry> entries;

  std::vector<ManifestEntry> select(Split split) const;
};

// Reads a CSV with header `path,label,split`. Relative paths are resolved
// against the directory holding the manifest.
Manifest load_manifest(const std::filesystem::path& path);

// Bilinear resampling with corner-aligned sample grids. Output is clamped to
// [0, 255]; a same-size request returns the input unchanged.
GrayImage resize(const GrayImage& img, Eigen::Index rows, Eigen::Index cols);

struct OcclusionSpec {
  double percentage = 0.0;  // fraction of the image area, in [0, 1)
  GrayImage occluder;
  std::uint64_t seed = 0;
};

struct OcclusionRegion {
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  Eigen::Index side = 0;

  bool operator==(const OcclusionRegion&) const = default;
};

// Side of the square covering `percentage` of a rows x cols image:
// round(sqrt(p * rows * cols)). Throws if it does not fit.
Eigen::Index occlusion_side(double percentage, Eigen::Index rows, Eigen::Index cols);

struct OccludedImage {
  GrayImage image;
  OcclusionRegion region;
};

// Pastes the occluder, squashed to s x s, at a seeded uniformly random
// position fully inside the image.
OccludedImage occlude(const GrayImage& img, const OcclusionSpec& spec);

}  // namespace csoigo
