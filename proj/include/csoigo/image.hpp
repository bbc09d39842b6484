#pragma once

#include <Eigen/Core>

#include <filesystem>

namespace csoigo {

// Row index is y, column index is x. Pixels are stored as doubles in the
// nominal range [0, 255].
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(Eigen::Index rows, Eigen::Index cols, double fill = 0.0);
  explicit GrayImage(Eigen::MatrixXd pixels);

  Eigen::Index rows() const { return pixels_.rows(); }
  Eigen::Index cols() const { return pixels_.cols(); }
  Eigen::Index size() const { return pixels_.size(); }
  bool empty() const { return pixels_.size() == 0; }

  double operator()(Eigen::Index y, Eigen::Index x) const { return pixels_(y, x); }
  double& operator()(Eigen::Index y, Eigen::Index x) { return pixels_(y, x); }

  const Eigen::MatrixXd& pixels() const { return pixels_; }
  Eigen::MatrixXd& pixels() { return pixels_; }

  bool operator==(const GrayImage& other) const;

 private:
  Eigen::MatrixXd pixels_;
};

// Decodes 8-bit PGM (P5) or PNG. Color is reduced with BT.601 luma.
GrayImage load_image(const std::filesystem::path& path);

// Writers round pixel values to the nearest byte after clamping to [0, 255].
void save_pgm(const GrayImage& img, const std::filesystem::path& path);
void save_png(const GrayImage& img, const std::filesystem::path& path);

// Chooses the writer from the extension (.png, otherwise PGM).
void save_image(const GrayImage& img, const std::filesystem::path& path);

}  // namespace csoigo
