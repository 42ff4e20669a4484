#include "sara/wavelets.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "sara/errors.hpp"

namespace sara {

namespace {

// Extremal-phase Daubechies lowpass taps, obtained by spectral factorization
// at 60-digit precision and rounded to 20 significant digits.
const std::array<std::vector<double>, 8> kTaps = {{
    {0.7071067811865475244, 0.7071067811865475244},
    {0.48296291314453414337, 0.83651630373780790558, 0.22414386804201338103,
     -0.12940952255126038117},
    {0.332670552950082616, 0.80689150931109257649, 0.4598775021184915701, -0.1350110200102545887,
     -0.085441273882026661693, 0.035226291885709536603},
    {0.23037781330889650086, 0.71484657055291564709, 0.63088076792985890788,
     -0.027983769416859854211, -0.18703481171909308408, 0.030841381835560763627,
     0.032883011666885199735, -0.010597401785069032105},
    {0.16010239797419291448, 0.60382926979718967054, 0.72430852843777292773,
     0.13842814590132073151, -0.24229488706638203186, -0.032244869584638374648,
     0.077571493840045713523, -0.0062414902127982742742, -0.012580751999081999469,
     0.003335725285473771278},
    {0.11154074335010946362, 0.49462389039845308568, 0.75113390802109535068,
     0.31525035170919762909, -0.22626469396543982008, -0.12976686756726193556,
     0.097501605587323049102, 0.027522865530305728626, -0.031582039317486029565,
     0.00055384220116149613925, 0.0047772575109455106396, -0.0010773010853084795649},
    {0.07785205408500917902, 0.39653931948191730654, 0.72913209084623511992,
     0.46978228740519312247, -0.14390600392856497541, -0.22403618499387498264,
     0.071309219266830264751, 0.080612609151083071913, -0.03802993693501441358,
     -0.016574541630666880654, 0.012550998556099840613, 0.00042957797292136652113,
     -0.0018016407040474909153, 0.00035371379997452024845},
    {0.054415842243104009955, 0.31287159091429997066, 0.67563073629728980681,
     0.58535468365420671277, -0.015829105256349305667, -0.28401554296154692652,
     0.00047248457391328277036, 0.12874742662047845886, -0.01736930100180754617,
     -0.044088253930794751507, 0.013981027917398281649, 0.0087460940474057767164,
     -0.0048703529934515743104, -0.0003917403733769470463, 0.00067544940645056936637,
     -0.00011747678412476953373},
}};

std::array<WaveletFilter, 8> build_filters() {
  std::array<WaveletFilter, 8> filters;
  for (int k = 1; k <= 8; ++k) {
    auto& f = filters[k - 1];
    f.family = static_cast<Daubechies>(k);
    f.lowpass = kTaps[k - 1];
    if (!satisfies_filter_invariants(f))
      throw Error(fmt::format("filter table for {} fails orthonormality checks", to_string(f.family)));
  }
  return filters;
}

// One-level periodic analysis of `n` samples read with stride `stride`.
// `work` must hold n + L - 2 entries.
void analyze_1d(double* data, int n, int stride, std::span<const double> lo,
                std::span<const double> hi, std::vector<double>& work) {
  const int taps = static_cast<int>(lo.size());
  work.resize(static_cast<std::size_t>(n + taps));
  for (int i = 0; i < n + taps; ++i) work[i] = data[static_cast<std::ptrdiff_t>(i % n) * stride];
  const int half = n / 2;
  for (int k = 0; k < half; ++k) {
    const double* x = work.data() + 2 * k;
    double a = 0.0;
    double d = 0.0;
    for (int i = 0; i < taps; ++i) {
      a += lo[i] * x[i];
      d += hi[i] * x[i];
    }
    data[static_cast<std::ptrdiff_t>(k) * stride] = a;
    data[static_cast<std::ptrdiff_t>(k + half) * stride] = d;
  }
}

// Transpose of analyze_1d.
void synthesize_1d(double* data, int n, int stride, std::span<const double> lo,
                   std::span<const double> hi, std::vector<double>& work) {
  const int taps = static_cast<int>(lo.size());
  const int half = n / 2;
  work.assign(static_cast<std::size_t>(n + taps), 0.0);
  for (int k = 0; k < half; ++k) {
    const double a = data[static_cast<std::ptrdiff_t>(k) * stride];
    const double d = data[static_cast<std::ptrdiff_t>(k + half) * stride];
    double* x = work.data() + 2 * k;
    for (int i = 0; i < taps; ++i) x[i] += lo[i] * a + hi[i] * d;
  }
  for (int i = 0; i < n; ++i) data[static_cast<std::ptrdiff_t>(i) * stride] = 0.0;
  for (int i = 0; i < n + taps; ++i) data[static_cast<std::ptrdiff_t>(i % n) * stride] += work[i];
}

void check_levels(Shape shape, int levels) {
  if (levels < 0) throw DimensionError("negative decomposition depth");
  const int block = 1 << levels;
  if (shape.rows <= 0 || shape.cols <= 0 || shape.rows % block != 0 || shape.cols % block != 0)
    throw DimensionError(fmt::format("{}x{} image is not divisible by 2^{}", shape.rows,
                                     shape.cols, levels));
}

}  // namespace

std::string to_string(Daubechies family) { return fmt::format("db{}", static_cast<int>(family)); }

std::vector<double> WaveletFilter::highpass() const {
  const auto n = lowpass.size();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = ((i % 2 == 0) ? 1.0 : -1.0) * lowpass[n - 1 - i];
  return g;
}

const WaveletFilter& filter_taps(Daubechies family) {
  static const std::array<WaveletFilter, 8> filters = build_filters();
  return filters.at(static_cast<std::size_t>(family) - 1);
}

bool satisfies_filter_invariants(const WaveletFilter& filter, double tol) {
  const auto& h = filter.lowpass;
  const int n = static_cast<int>(h.size());
  double sum = 0.0;
  for (double v : h) sum += v;
  if (std::abs(sum - std::sqrt(2.0)) > tol) return false;
  for (int shift = 0; shift < n; shift += 2) {
    double acc = 0.0;
    for (int i = 0; i + shift < n; ++i) acc += h[i] * h[i + shift];
    const double expected = shift == 0 ? 1.0 : 0.0;
    if (std::abs(acc - expected) > tol) return false;
  }
  return true;
}

int clamp_levels(Shape shape, int levels) {
  const int min_dim = std::min(shape.rows, shape.cols);
  if (min_dim <= 0) throw DimensionError("empty image");
  const int max_levels = std::bit_width(static_cast<unsigned>(min_dim)) - 1;
  if (levels > max_levels) {
    spdlog::warn("wavelet depth {} exceeds log2({}); clamping to {}", levels, min_dim, max_levels);
    return max_levels;
  }
  return levels;
}

void dwt2_forward_inplace(std::span<double> data, Shape shape, const WaveletFilter& filter,
                          int levels) {
  const auto hi = filter.highpass();
  std::vector<double> work;
  int rows = shape.rows;
  int cols = shape.cols;
  for (int level = 0; level < levels; ++level) {
    for (int r = 0; r < rows; ++r)
      analyze_1d(data.data() + static_cast<std::ptrdiff_t>(r) * shape.cols, cols, 1,
                 filter.lowpass, hi, work);
    for (int c = 0; c < cols; ++c)
      analyze_1d(data.data() + c, rows, shape.cols, filter.lowpass, hi, work);
    rows /= 2;
    cols /= 2;
  }
}

void dwt2_inverse_inplace(std::span<double> data, Shape shape, const WaveletFilter& filter,
                          int levels) {
  const auto hi = filter.highpass();
  std::vector<double> work;
  for (int level = levels - 1; level >= 0; --level) {
    const int rows = shape.rows >> level;
    const int cols = shape.cols >> level;
    for (int c = 0; c < cols; ++c)
      synthesize_1d(data.data() + c, rows, shape.cols, filter.lowpass, hi, work);
    for (int r = 0; r < rows; ++r)
      synthesize_1d(data.data() + static_cast<std::ptrdiff_t>(r) * shape.cols, cols, 1,
                    filter.lowpass, hi, work);
  }
}

RealVector dwt1_forward(const RealVector& signal, const WaveletFilter& filter, int levels) {
  const int n = static_cast<int>(signal.size());
  if (levels < 0 || n == 0 || n % (1 << levels) != 0)
    throw DimensionError(fmt::format("length {} is not divisible by 2^{}", n, levels));
  RealVector out = signal;
  const auto hi = filter.highpass();
  std::vector<double> work;
  for (int level = 0; level < levels; ++level)
    analyze_1d(out.data(), n >> level, 1, filter.lowpass, hi, work);
  return out;
}

RealVector dwt1_inverse(const RealVector& coeffs, const WaveletFilter& filter, int levels) {
  const int n = static_cast<int>(coeffs.size());
  if (levels < 0 || n == 0 || n % (1 << levels) != 0)
    throw DimensionError(fmt::format("length {} is not divisible by 2^{}", n, levels));
  RealVector out = coeffs;
  const auto hi = filter.highpass();
  std::vector<double> work;
  for (int level = levels - 1; level >= 0; --level)
    synthesize_1d(out.data(), n >> level, 1, filter.lowpass, hi, work);
  return out;
}

WaveletDecomposition dwt2_forward(const Image& img, const WaveletFilter& filter, int levels) {
  if (img.pixels.size() != img.shape.size()) throw DimensionError("image buffer does not match its shape");
  const int depth = clamp_levels(img.shape, levels);
  check_levels(img.shape, depth);
  WaveletDecomposition dec{img.pixels, depth, img.shape};
  dwt2_forward_inplace({dec.coeffs.data(), static_cast<std::size_t>(dec.coeffs.size())}, dec.shape,
                       filter, depth);
  return dec;
}

Image dwt2_inverse(const WaveletDecomposition& dec, const WaveletFilter& filter) {
  if (dec.coeffs.size() != dec.shape.size())
    throw DimensionError("coefficient count does not match decomposition shape");
  check_levels(dec.shape, dec.levels);
  Image out(dec.shape, dec.coeffs);
  dwt2_inverse_inplace({out.pixels.data(), static_cast<std::size_t>(out.pixels.size())}, out.shape,
                       filter, dec.levels);
  return out;
}

}  // namespace sara
