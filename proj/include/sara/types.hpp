#pragma once

#include <complex>
#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "sara/errors.hpp"

namespace sara {

using Complex = std::complex<double>;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
/// Analysis coefficients Ψ†x, one block of N entries per frame.
using CoefficientVector = Eigen::VectorXd;

struct Shape {
  int rows = 0;
  int cols = 0;

  [[nodiscard]] Eigen::Index size() const { return Eigen::Index{rows} * cols; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Real image stored row-major in a flat vector.
struct Image {
  Shape shape;
  RealVector pixels;

  Image() = default;
  explicit Image(Shape s) : shape(s), pixels(RealVector::Zero(s.size())) {}
  Image(Shape s, RealVector values) : shape(s), pixels(std::move(values)) {
    if (pixels.size() != shape.size()) throw DimensionError("pixel count does not match image shape");
  }

  [[nodiscard]] double operator()(int r, int c) const { return pixels[Eigen::Index{r} * shape.cols + c]; }
  double& operator()(int r, int c) { return pixels[Eigen::Index{r} * shape.cols + c]; }
  [[nodiscard]] Eigen::Index size() const { return pixels.size(); }
};

}  // namespace sara
