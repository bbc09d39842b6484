#include "csoigo/dataset.hpp"

#include "csoigo/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <string>

namespace csoigo {

std::vector<ManifestEntry> Manifest::select(Split split) const {
  std::vector<ManifestEntry> out;
  std::copy_if(entries.begin(), entries.end(), std::back_inserter(out),
               [split](const ManifestEntry& e) { return e.split == split; });
  return out;
}

namespace {

// One CSV record; double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back().push_back(c);
    }
  }
  if (quoted) throw DataError("manifest line " + std::to_string(line_no) + ": unterminated quote");
  return fields;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

// Unbiased draw from {0, ..., n-1}; independent of the standard library's
// distribution implementations so results are portable.
std::uint64_t uniform_index(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = gen();
  } while (v >= limit);
  return v % n;
}

double sample_bilinear(const Eigen::MatrixXd& src, double sy, double sx) {
  const auto y0 = static_cast<Eigen::Index>(std::floor(sy));
  const auto x0 = static_cast<Eigen::Index>(std::floor(sx));
  const Eigen::Index y1 = std::min(y0 + 1, src.rows() - 1);
  const Eigen::Index x1 = std::min(x0 + 1, src.cols() - 1);
  const double ty = sy - static_cast<double>(y0);
  const double tx = sx - static_cast<double>(x0);
  // a + t*(b - a) keeps constant neighbourhoods exact.
  const double top = src(y0, x0) + tx * (src(y0, x1) - src(y0, x0));
  const double bottom = src(y1, x0) + tx * (src(y1, x1) - src(y1, x0));
  return top + ty * (bottom - top);
}

// Corner-aligned source coordinate of output sample i; a single output
// sample sits at the source centre.
double source_coord(Eigen::Index i, Eigen::Index out_len, Eigen::Index in_len) {
  if (out_len == 1) return 0.5 * static_cast<double>(in_len - 1);
  const double c = static_cast<double>(i) * static_cast<double>(in_len - 1) / static_cast<double>(out_len - 1);
  return std::min(c, static_cast<double>(in_len - 1));
}

GrayImage resample(const GrayImage& img, Eigen::Index rows, Eigen::Index cols) {
  if (rows == img.rows() && cols == img.cols()) return img;
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index x = 0; x < cols; ++x) {
    const double sx = source_coord(x, cols, img.cols());
    for (Eigen::Index y = 0; y < rows; ++y)
      out(y, x) = std::clamp(sample_bilinear(img.pixels(), source_coord(y, rows, img.rows()), sx), 0.0, 255.0);
  }
  return GrayImage(std::move(out));
}

}  // namespace

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) throw DataError("manifest '" + path.string() + "': no entries");
  strip_cr(line);
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (line != "path,label,split")
    throw DataError("manifest '" + path.string() + "': header must be exactly 'path,label,split'");

  const auto base = path.parent_path();
  Manifest manifest;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = split_csv_line(line, line_no);
    if (fields.size() != 3)
      throw DataError("manifest line " + std::to_string(line_no) + ": expected 3 columns, found " +
                      std::to_string(fields.size()));
    ManifestEntry entry;
    if (fields[2] == "train")
      entry.split = Split::Train;
    else if (fields[2] == "test")
      entry.split = Split::Test;
    else
      throw DataError("manifest line " + std::to_string(line_no) + ": unknown split '" + fields[2] + "'");
    if (fields[0].empty()) throw DataError("manifest line " + std::to_string(line_no) + ": empty path");
    std::filesystem::path p(fields[0]);
    entry.path = p.is_absolute() ? p : base / p;
    entry.label = fields[1];
    manifest.entries.push_back(std::move(entry));
  }
  if (manifest.entries.empty()) throw DataError("manifest '" + path.string() + "': no entries");
  return manifest;
}

GrayImage resize(const GrayImage& img, Eigen::Index rows, Eigen::Index cols) {
  if (rows < 2 || cols < 2) throw InvalidArgument("resize target must be at least 2x2");
  if (img.empty()) throw InvalidArgument("cannot resize an empty image");
  return resample(img, rows, cols);
}

Eigen::Index occlusion_side(double percentage, Eigen::Index rows, Eigen::Index cols) {
  if (!(percentage >= 0.0) || !(percentage < 1.0))
    throw InvalidArgument("occlusion percentage must lie in [0, 1)");
  const auto side = static_cast<Eigen::Index>(
      std::llround(std::sqrt(percentage * static_cast<double>(rows) * static_cast<double>(cols))));
  if (side > std::min(rows, cols))
    throw InvalidArgument("occlusion side " + std::to_string(side) + " does not fit a " +
                          std::to_string(rows) + "x" + std::to_string(cols) + " image");
  return side;
}

OccludedImage occlude(const GrayImage& img, const OcclusionSpec& spec) {
  const Eigen::Index side = occlusion_side(spec.percentage, img.rows(), img.cols());
  if (side == 0) return {img, {}};
  if (spec.occluder.empty()) throw InvalidArgument("occlusion requires an occluder image");

  std::mt19937_64 gen(spec.seed);
  OcclusionRegion region;
  region.side = side;
  region.row = static_cast<Eigen::Index>(uniform_index(gen, static_cast<std::uint64_t>(img.rows() - side + 1)));
  region.col = static_cast<Eigen::Index>(uniform_index(gen, static_cast<std::uint64_t>(img.cols() - side + 1)));

  const GrayImage patch = resample(spec.occluder, side, side);
  GrayImage out = img;
  out.pixels().block(region.row, region.col, side, side) = patch.pixels();
  return {std::move(out), region};
}

}  // namespace csoigo
