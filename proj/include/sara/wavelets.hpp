#pragma once

#include <span>
#include <string>
#include <vector>

#include "sara/types.hpp"

namespace sara {

/// Extremal-phase Daubechies families; the enumerator value is the number of
/// vanishing moments, so Db k has 2k taps.
enum class Daubechies { db1 = 1, db2, db3, db4, db5, db6, db7, db8 };

std::string to_string(Daubechies family);

struct WaveletFilter {
  Daubechies family = Daubechies::db1;
  std::vector<double> lowpass;

  /// Quadrature mirror highpass g[n] = (-1)^n h[L-1-n].
  [[nodiscard]] std::vector<double> highpass() const;
};

/// Analysis lowpass taps with orthonormal normalization (sum = sqrt(2)).
const WaveletFilter& filter_taps(Daubechies family);

/// Checks the three orthonormal-filter invariants (DC gain, unit energy,
/// double-shift orthogonality) at the given tolerance.
bool satisfies_filter_invariants(const WaveletFilter& filter, double tol = 1e-12);

struct WaveletDecomposition {
  RealVector coeffs;  // Mallat layout: coarsest approximation in the top-left block
  int levels = 0;
  Shape shape;
};

/// Largest usable depth for the shape: requested levels clamped to
/// floor(log2(min(rows, cols))). Logs a warning when clamping.
int clamp_levels(Shape shape, int levels);

WaveletDecomposition dwt2_forward(const Image& img, const WaveletFilter& filter, int levels);
Image dwt2_inverse(const WaveletDecomposition& dec, const WaveletFilter& filter);

/// Multi-level periodic 1D transform of a signal whose length is divisible by
/// 2^levels; output is [approx | detail_L | ... | detail_1].
RealVector dwt1_forward(const RealVector& signal, const WaveletFilter& filter, int levels);
RealVector dwt1_inverse(const RealVector& coeffs, const WaveletFilter& filter, int levels);

// In-place transforms on row-major data; used by the dictionary operators.
// `levels` must already be valid for `shape`.
void dwt2_forward_inplace(std::span<double> data, Shape shape, const WaveletFilter& filter,
                          int levels);
void dwt2_inverse_inplace(std::span<double> data, Shape shape, const WaveletFilter& filter,
                          int levels);

}  // namespace sara
