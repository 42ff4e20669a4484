#pragma once

#include <memory>
#include <span>

#include "sara/types.hpp"

namespace sara {

/// In-place unitary 2D DFT on row-major complex data (FFTW backed).
/// Planning is serialized internally; execution is reentrant.
class UnitaryFft2 {
 public:
  explicit UnitaryFft2(Shape shape);
  ~UnitaryFft2();
  UnitaryFft2(const UnitaryFft2&) = delete;
  UnitaryFft2& operator=(const UnitaryFft2&) = delete;

  void forward(std::span<Complex> data) const;
  void inverse(std::span<Complex> data) const;

  [[nodiscard]] Shape shape() const { return shape_; }

 private:
  struct Plans;
  Shape shape_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace sara
