#include "sara/fft.hpp"

#include <cmath>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "sara/errors.hpp"

namespace sara {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }
}  // namespace

struct UnitaryFft2::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  double scale = 1.0;
};

UnitaryFft2::UnitaryFft2(Shape shape) : shape_(shape), plans_(std::make_unique<Plans>()) {
  if (shape.rows <= 0 || shape.cols <= 0) throw DimensionError("FFT needs a non-empty shape");
  std::vector<Complex> scratch(static_cast<std::size_t>(shape.size()));
  // FFTW_UNALIGNED keeps the chosen codelets independent of buffer alignment,
  // so results are bit-identical for any buffer passed to execute.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  plans_->forward = fftw_plan_dft_2d(shape.rows, shape.cols, as_fftw(scratch.data()),
                                     as_fftw(scratch.data()), FFTW_FORWARD, flags);
  plans_->inverse = fftw_plan_dft_2d(shape.rows, shape.cols, as_fftw(scratch.data()),
                                     as_fftw(scratch.data()), FFTW_BACKWARD, flags);
  plans_->scale = 1.0 / std::sqrt(static_cast<double>(shape.size()));
  if (plans_->forward == nullptr || plans_->inverse == nullptr) throw Error("FFTW planning failed");
}

UnitaryFft2::~UnitaryFft2() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plans_->forward);
  fftw_destroy_plan(plans_->inverse);
}

void UnitaryFft2::forward(std::span<Complex> data) const {
  if (static_cast<Eigen::Index>(data.size()) != shape_.size()) throw DimensionError("FFT buffer size mismatch");
  fftw_execute_dft(plans_->forward, as_fftw(data.data()), as_fftw(data.data()));
  for (auto& v : data) v *= plans_->scale;
}

void UnitaryFft2::inverse(std::span<Complex> data) const {
  if (static_cast<Eigen::Index>(data.size()) != shape_.size()) throw DimensionError("FFT buffer size mismatch");
  fftw_execute_dft(plans_->inverse, as_fftw(data.data()), as_fftw(data.data()));
  for (auto& v : data) v *= plans_->scale;
}

}  // namespace sara
