#include "csoigo/gradient.hpp"

#include "csoigo/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace csoigo {

std::string_view to_string(FeatureOrder order) {
  switch (order) {
    case FeatureOrder::Raw: return "raw";
    case FeatureOrder::First: return "first";
    case FeatureOrder::Second: return "second";
  }
  return "unknown";
}

FeatureOrder parse_feature_order(std::string_view text) {
  if (text == "raw") return FeatureOrder::Raw;
  if (text == "first") return FeatureOrder::First;
  if (text == "second") return FeatureOrder::Second;
  throw InvalidArgument("unknown feature order '" + std::string(text) + "' (expected raw, first or second)");
}

namespace {

// Forward difference along columns; the last `pad` columns stay zero.
Eigen::MatrixXd diff_x(const Eigen::MatrixXd& a, Eigen::Index pad) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  const Eigen::Index n = a.cols() - pad;
  if (n > 0) d.leftCols(n) = a.middleCols(1, n) - a.leftCols(n);
  return d;
}

Eigen::MatrixXd diff_y(const Eigen::MatrixXd& a, Eigen::Index pad) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  const Eigen::Index m = a.rows() - pad;
  if (m > 0) d.topRows(m) = a.middleRows(1, m) - a.topRows(m);
  return d;
}

}  // namespace

GradientPair first_order_gradients(const GrayImage& img) {
  if (img.rows() < 2 || img.cols() < 2) throw InvalidArgument("first-order gradients need an image of at least 2x2");
  return {diff_x(img.pixels(), 1), diff_y(img.pixels(), 1)};
}

GradientPair second_order_gradients(const GrayImage& img) {
  if (img.rows() < 3 || img.cols() < 3) throw InvalidArgument("second-order gradients need an image of at least 3x3");
  const GradientPair g = first_order_gradients(img);
  // The first-order boundary zeros are padding, not data, so the second
  // difference is only kept where both of its inputs are defined.
  return {diff_x(g.gx, 2), diff_y(g.gy, 2)};
}

double orientation_angle(double gx, double gy) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::atan2(gy, gx);
  if (a < 0.0) a += two_pi;
  if (a >= two_pi) a = 0.0;  // -tiny + 2*pi can round up to 2*pi
  return a + 0.0;            // normalizes -0.0
}

OrientationField orientation_field(const GradientPair& g) {
  if (g.gx.rows() != g.gy.rows() || g.gx.cols() != g.gy.cols())
    throw InvalidArgument("gradient components differ in shape");
  return g.gx.binaryExpr(g.gy, [](double gx, double gy) { return orientation_angle(gx, gy); });
}

ComplexFeature complex_map(const OrientationField& phi) {
  ComplexFeature t(phi.size());
  const double* angles = phi.data();  // column-major storage
  for (Eigen::Index k = 0; k < phi.size(); ++k) t[k] = {std::cos(angles[k]), std::sin(angles[k])};
  return t;
}

ComplexFeature extract(const GrayImage& img, FeatureOrder order) {
  switch (order) {
    case FeatureOrder::Raw: {
      const Eigen::Map<const Eigen::VectorXd> flat(img.pixels().data(), img.size());
      return flat.cast<std::complex<double>>();
    }
    case FeatureOrder::First: return complex_map(orientation_field(first_order_gradients(img)));
    case FeatureOrder::Second: return complex_map(orientation_field(second_order_gradients(img)));
  }
  throw InvalidArgument("unknown feature order");
}

}  // namespace csoigo
