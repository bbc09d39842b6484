#include "toy_faces.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <string>

namespace csoigo::testing {

namespace {

struct Bump {
  double cy, cx, sigma, amplitude;
};

double uniform(std::mt19937_64& gen, double lo, double hi) {
  // 53-bit mantissa draw; portable across standard libraries.
  return lo + (hi - lo) * static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double gaussian(std::mt19937_64& gen) {
  // Box-Muller, for portability.
  const double u1 = std::max(uniform(gen, 0.0, 1.0), 1e-300);
  const double u2 = uniform(gen, 0.0, 1.0);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

GrayImage render(const std::vector<Bump>& bumps, const ToyFaceOptions& opt, std::mt19937_64& gen) {
  const double sy = uniform(gen, -opt.shading_slope, opt.shading_slope);
  const double sx = uniform(gen, -opt.shading_slope, opt.shading_slope);
  std::vector<double> jitter(bumps.size());
  for (double& j : jitter) j = 1.0 + opt.amplitude_jitter * gaussian(gen);

  Eigen::MatrixXd px(opt.rows, opt.cols);
  const double my = 0.5 * static_cast<double>(opt.rows - 1);
  const double mx = 0.5 * static_cast<double>(opt.cols - 1);
  for (Eigen::Index x = 0; x < opt.cols; ++x) {
    for (Eigen::Index y = 0; y < opt.rows; ++y) {
      double v = 128.0 + sy * (static_cast<double>(y) - my) + sx * (static_cast<double>(x) - mx);
      for (std::size_t b = 0; b < bumps.size(); ++b) {
        const double dy = static_cast<double>(y) - bumps[b].cy;
        const double dx = static_cast<double>(x) - bumps[b].cx;
        v += jitter[b] * bumps[b].amplitude * std::exp(-(dy * dy + dx * dx) / (2.0 * bumps[b].sigma * bumps[b].sigma));
      }
      v += opt.pixel_noise * gaussian(gen);
      px(y, x) = std::clamp(v, 0.0, 255.0);
    }
  }
  return GrayImage(std::move(px));
}

}  // namespace

ToyFaceSet make_toy_faces(const ToyFaceOptions& opt) {
  std::mt19937_64 gen(opt.seed);
  ToyFaceSet set;
  for (int c = 0; c < opt.classes; ++c) {
    std::vector<Bump> bumps(static_cast<std::size_t>(opt.bumps));
    for (auto& b : bumps) {
      b.cy = uniform(gen, 0.0, static_cast<double>(opt.rows - 1));
      b.cx = uniform(gen, 0.0, static_cast<double>(opt.cols - 1));
      b.sigma = uniform(gen, opt.sigma_min, opt.sigma_max);
      b.amplitude = uniform(gen, opt.amplitude_min, opt.amplitude_max) * (gen() & 1 ? 1.0 : -1.0);
    }
    const std::string label = "class" + std::to_string(c);
    for (int i = 0; i < opt.train_per_class; ++i) set.train.push_back({render(bumps, opt, gen), label});
    for (int i = 0; i < opt.test_per_class; ++i) set.test.push_back({render(bumps, opt, gen), label});
  }
  return set;
}

GrayImage make_occluder(Eigen::Index side, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Eigen::MatrixXd px(side, side);
  const double f1 = uniform(gen, 0.6, 1.2), f2 = uniform(gen, 0.3, 0.9);
  for (Eigen::Index x = 0; x < side; ++x)
    for (Eigen::Index y = 0; y < side; ++y) {
      const double stripes = std::sin(f1 * static_cast<double>(x) + 0.4 * static_cast<double>(y)) *
                             std::cos(f2 * static_cast<double>(y));
      px(y, x) = std::clamp(128.0 + 90.0 * stripes + 30.0 * gaussian(gen), 0.0, 255.0);
    }
  return GrayImage(std::move(px));
}

std::filesystem::path write_dataset(const ToyFaceSet& set, const std::filesystem::path& dir, bool test_from_train) {
  std::filesystem::create_directories(dir);
  const auto manifest = dir / "manifest.csv";
  std::ofstream out(manifest);
  out << "path,label,split\n";
  auto emit = [&](const std::vector<LabeledImage>& items, const char* prefix, const char* split) {
    for (std::size_t i = 0; i < items.size(); ++i) {
      const std::string name = std::string(prefix) + std::to_string(i) + ".pgm";
      save_pgm(items[i].image, dir / name);
      out << name << ',' << items[i].label << ',' << split << '\n';
    }
  };
  emit(set.train, "train_", "train");
  if (test_from_train) {
    for (std::size_t i = 0; i < set.train.size(); ++i)
      out << "train_" << i << ".pgm," << set.train[i].label << ",test\n";
  } else {
    emit(set.test, "test_", "test");
  }
  return manifest;
}

}  // namespace csoigo::testing
