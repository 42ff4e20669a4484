#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "sara/types.hpp"

namespace sara {

enum class OperatorKind { spread_spectrum, fourier_mask, matrix };

/// Linear sensing map Φ from real images (N pixels) to M complex samples.
/// The adjoint is taken with respect to the real inner product Re<.,.>, so it
/// returns the real part of the complex adjoint.
class MeasurementOperator {
 public:
  using ForwardFn = std::function<ComplexVector(const RealVector&)>;
  using AdjointFn = std::function<RealVector(const ComplexVector&)>;

  MeasurementOperator(OperatorKind kind, Shape shape, Eigen::Index m, ForwardFn forward,
                      AdjointFn adjoint, std::vector<int> frequencies = {});

  [[nodiscard]] ComplexVector forward(const RealVector& x) const;
  [[nodiscard]] ComplexVector forward(const Image& x) const { return forward(x.pixels); }
  [[nodiscard]] RealVector adjoint(const ComplexVector& y) const;

  [[nodiscard]] OperatorKind kind() const { return kind_; }
  [[nodiscard]] Shape shape() const { return shape_; }
  [[nodiscard]] Eigen::Index m() const { return m_; }
  [[nodiscard]] Eigen::Index n() const { return shape_.size(); }
  /// Selected flat indices into the (unshifted) frequency grid, sorted.
  /// Empty for matrix operators.
  [[nodiscard]] const std::vector<int>& frequencies() const { return frequencies_; }

 private:
  OperatorKind kind_;
  Shape shape_;
  Eigen::Index m_;
  ForwardFn forward_;
  AdjointFn adjoint_;
  std::vector<int> frequencies_;
};

/// Dense operator x -> A x; used by tests and small experiments.
MeasurementOperator make_matrix_operator(Eigen::MatrixXcd matrix, Shape shape);

struct SpreadSpectrumConfig {
  std::uint64_t seed = 0;
  Eigen::Index m = 0;
  bool modulate = true;  // false replaces the Rademacher sequence by all ones
};

/// Φx = select_Ω(F(c ⊙ x)) with c a seeded ±1 sequence, F the unitary 2D DFT
/// and Ω a seeded uniform subset of m frequencies.
MeasurementOperator make_spread_spectrum(const SpreadSpectrumConfig& cfg, Shape shape);

/// Rademacher sequence used by make_spread_spectrum for the given seed.
RealVector rademacher_sequence(std::uint64_t seed, Eigen::Index n);

struct FourierMaskConfig {
  std::uint64_t seed = 0;
  int image_side = 64;
  int n_ellipses = 8;       // ellipses added per generation round
  int points_per_arc = 0;   // 0 selects 4 * image_side
  Eigen::Index target_m = 0;
  int max_rounds = 10000;
};

struct MaskCell {
  int row = 0;
  int col = 0;
  friend bool operator==(const MaskCell&, const MaskCell&) = default;
};

/// Superposition of random elliptical arcs quantized to the frequency grid,
/// deduplicated and trimmed to exactly target_m cells. Returns sorted flat
/// indices into the unshifted side x side grid.
std::vector<int> generate_ellipse_mask(const FourierMaskConfig& cfg);

MeasurementOperator make_fourier_mask(const FourierMaskConfig& cfg);
/// Masked unitary DFT over explicit flat frequency indices (deduplicated).
MeasurementOperator make_fourier_mask(std::vector<int> frequencies, Shape shape);

std::vector<MaskCell> to_cells(const std::vector<int>& frequencies, Shape shape);
std::vector<int> to_frequencies(const std::vector<MaskCell>& cells, Shape shape);
/// Plain text, one "row col" pair per line; '#' starts a comment.
void write_mask(const std::filesystem::path& path, const std::vector<MaskCell>& cells);
std::vector<MaskCell> read_mask(const std::filesystem::path& path);

struct NoiseModel {
  double input_snr_db = 30.0;
  std::uint64_t seed = 0;
  std::optional<double> sigma_override;  // bypasses calibration, e.g. 0 for noiseless
};

struct NoisyMeasurement {
  ComplexVector y;
  double sigma_n = 0.0;
};

/// Adds i.i.d. circular complex Gaussian noise with E|n_k|^2 = sigma_n^2 and
/// sigma_n = ||y0|| 10^(-ISNR/20) / sqrt(M).
NoisyMeasurement apply_noise(const ComplexVector& y0, const NoiseModel& model);

/// Zero-filled inverse unitary DFT of masked samples (real part).
Image dirty_image(const MeasurementOperator& op, const ComplexVector& y);

}  // namespace sara
