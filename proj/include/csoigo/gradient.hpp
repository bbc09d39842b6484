#pragma once

#include "csoigo/image.hpp"

#include <Eigen/Core>

#include <string>
#include <string_view>

namespace csoigo {

// gx differences along columns (x), gy along rows (y). Entries whose forward
// difference is undefined are zero.
struct GradientPair {
  Eigen::MatrixXd gx;
  Eigen::MatrixXd gy;
};

// Angles in [0, 2*pi), one per pixel.
using OrientationField = Eigen::MatrixXd;

// Column-major vectorized unit-modulus feature, K = rows * cols.
using ComplexFeature = Eigen::VectorXcd;

enum class FeatureOrder { Raw, First, Second };

std::string_view to_string(FeatureOrder order);
FeatureOrder parse_feature_order(std::string_view text);

// gx(y,x) = I(y,x+1) - I(y,x), gy(y,x) = I(y+1,x) - I(y,x). Requires 2x2.
GradientPair first_order_gradients(const GrayImage& img);

// Forward difference of gx along x and of gy along y. Zero wherever either
// difference would reach past the image, so the last two columns of gx and
// the last two rows of gy are zero. Requires 3x3.
GradientPair second_order_gradients(const GrayImage& img);

// Four-quadrant angle of (gx, gy) wrapped into [0, 2*pi); zero gradient maps
// to angle 0.
OrientationField orientation_field(const GradientPair& g);

// Single-sample version of the wrap used by orientation_field.
double orientation_angle(double gx, double gy);

// e^{j*phi}, vectorized column-major.
ComplexFeature complex_map(const OrientationField& phi);

// Feature front-end. Raw returns intensities (column-major) with zero
// imaginary part; First/Second return the complex-sphere mapping of the
// respective orientation field.
ComplexFeature extract(const GrayImage& img, FeatureOrder order);

}  // namespace csoigo
