#include "sara/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>

#include "sara/errors.hpp"
#include "sara/fft.hpp"

namespace sara {

namespace {

double uniform01(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

// Masked unitary DFT of (optionally modulated) real images.
MeasurementOperator masked_fft_operator(OperatorKind kind, Shape shape, std::vector<int> freqs,
                                        std::optional<RealVector> modulation) {
  auto fft = std::make_shared<const UnitaryFft2>(shape);
  auto sel = std::make_shared<const std::vector<int>>(freqs);
  auto mod = modulation ? std::make_shared<const RealVector>(std::move(*modulation)) : nullptr;
  const auto n = shape.size();
  auto forward = [fft, sel, mod, n](const RealVector& x) {
    ComplexVector z(n);
    if (mod)
      z = x.cwiseProduct(*mod).cast<Complex>();
    else
      z = x.cast<Complex>();
    fft->forward({z.data(), static_cast<std::size_t>(n)});
    ComplexVector y(static_cast<Eigen::Index>(sel->size()));
    for (std::size_t k = 0; k < sel->size(); ++k) y[static_cast<Eigen::Index>(k)] = z[(*sel)[k]];
    return y;
  };
  auto adjoint = [fft, sel, mod, n](const ComplexVector& y) {
    ComplexVector z = ComplexVector::Zero(n);
    for (std::size_t k = 0; k < sel->size(); ++k) z[(*sel)[k]] = y[static_cast<Eigen::Index>(k)];
    fft->inverse({z.data(), static_cast<std::size_t>(n)});
    RealVector x = z.real();
    if (mod) x.array() *= mod->array();
    return x;
  };
  const auto m = static_cast<Eigen::Index>(freqs.size());
  return MeasurementOperator(kind, shape, m, std::move(forward), std::move(adjoint), std::move(freqs));
}

}  // namespace

MeasurementOperator::MeasurementOperator(OperatorKind kind, Shape shape, Eigen::Index m,
                                         ForwardFn forward, AdjointFn adjoint,
                                         std::vector<int> frequencies)
    : kind_(kind),
      shape_(shape),
      m_(m),
      forward_(std::move(forward)),
      adjoint_(std::move(adjoint)),
      frequencies_(std::move(frequencies)) {}

ComplexVector MeasurementOperator::forward(const RealVector& x) const {
  if (x.size() != n()) throw DimensionError(fmt::format("forward: expected {} pixels, got {}", n(), x.size()));
  return forward_(x);
}

RealVector MeasurementOperator::adjoint(const ComplexVector& y) const {
  if (y.size() != m_) throw DimensionError(fmt::format("adjoint: expected {} samples, got {}", m_, y.size()));
  return adjoint_(y);
}

MeasurementOperator make_matrix_operator(Eigen::MatrixXcd matrix, Shape shape) {
  if (matrix.cols() != shape.size()) throw DimensionError("matrix columns must equal the pixel count");
  auto a = std::make_shared<const Eigen::MatrixXcd>(std::move(matrix));
  const auto m = a->rows();
  return MeasurementOperator(
      OperatorKind::matrix, shape, m,
      [a](const RealVector& x) -> ComplexVector { return (*a) * x.cast<Complex>(); },
      [a](const ComplexVector& y) -> RealVector { return (a->adjoint() * y).real(); });
}

RealVector rademacher_sequence(std::uint64_t seed, Eigen::Index n) {
  std::mt19937_64 rng(seed);
  RealVector c(n);
  for (Eigen::Index i = 0; i < n; ++i) c[i] = (rng() >> 63) != 0 ? 1.0 : -1.0;
  return c;
}

MeasurementOperator make_spread_spectrum(const SpreadSpectrumConfig& cfg, Shape shape) {
  const auto n = shape.size();
  if (cfg.m <= 0 || cfg.m > n)
    throw ConfigError(fmt::format("spread spectrum needs 0 < m <= n (m = {}, n = {})", cfg.m, n));
  std::vector<int> all(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = static_cast<int>(i);
  std::mt19937_64 rng(cfg.seed ^ 0x5eed5e1ec7ULL);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<std::size_t>(cfg.m));
  std::sort(all.begin(), all.end());
  std::optional<RealVector> modulation;
  if (cfg.modulate) modulation = rademacher_sequence(cfg.seed, n);
  return masked_fft_operator(OperatorKind::spread_spectrum, shape, std::move(all), std::move(modulation));
}

std::vector<int> generate_ellipse_mask(const FourierMaskConfig& cfg) {
  const int side = cfg.image_side;
  const auto n = Eigen::Index{side} * side;
  if (side < 2 || side % 2 != 0) throw ConfigError("mask side must be even and at least 2");
  if (cfg.target_m <= 0 || cfg.target_m >= n)
    throw ConfigError(fmt::format("mask needs 0 < target_m < side^2 (target_m = {})", cfg.target_m));
  if (cfg.n_ellipses < 1) throw ConfigError("mask needs at least one ellipse per round");
  const int points = cfg.points_per_arc > 0 ? cfg.points_per_arc : 4 * side;
  const int half = side / 2;
  const double a_max = 0.95 * half;
  constexpr double pi = std::numbers::pi;

  std::mt19937_64 rng(cfg.seed);
  std::vector<int> cells;
  std::unordered_set<int> seen;
  int rounds = 0;
  while (static_cast<Eigen::Index>(cells.size()) < cfg.target_m) {
    if (rounds++ >= cfg.max_rounds)
      throw ConfigError(fmt::format("mask generator reached {} of {} cells after {} rounds",
                                    cells.size(), cfg.target_m, cfg.max_rounds));
    for (int e = 0; e < cfg.n_ellipses; ++e) {
      // Semi-axes uniform in radius, which concentrates coverage at low
      // frequencies like a real uv track.
      const double a = a_max * (0.05 + 0.95 * uniform01(rng));
      const double b = a * (0.3 + 0.7 * uniform01(rng));
      const double theta = pi * uniform01(rng);
      const double cx = (2.0 * uniform01(rng) - 1.0) * side / 32.0;
      const double cy = (2.0 * uniform01(rng) - 1.0) * side / 32.0;
      const double start = 2.0 * pi * uniform01(rng);
      const double extent = pi / 6.0 + (5.0 * pi / 6.0) * uniform01(rng);
      const double ct = std::cos(theta);
      const double st = std::sin(theta);
      for (int p = 0; p < points; ++p) {
        const double t = start + extent * p / (points - 1);
        const double u = cx + a * std::cos(t) * ct - b * std::sin(t) * st;
        const double v = cy + a * std::cos(t) * st + b * std::sin(t) * ct;
        const auto iu = static_cast<int>(std::lround(u));
        const auto iv = static_cast<int>(std::lround(v));
        if (iu < -half || iu >= half || iv < -half || iv >= half) continue;
        const int row = (iv + side) % side;
        const int col = (iu + side) % side;
        const int flat = row * side + col;
        if (seen.insert(flat).second) cells.push_back(flat);
      }
    }
  }
  if (static_cast<Eigen::Index>(cells.size()) > cfg.target_m) {
    std::shuffle(cells.begin(), cells.end(), rng);
    cells.resize(static_cast<std::size_t>(cfg.target_m));
  }
  std::sort(cells.begin(), cells.end());
  return cells;
}

MeasurementOperator make_fourier_mask(const FourierMaskConfig& cfg) {
  return make_fourier_mask(generate_ellipse_mask(cfg), Shape{cfg.image_side, cfg.image_side});
}

MeasurementOperator make_fourier_mask(std::vector<int> frequencies, Shape shape) {
  std::sort(frequencies.begin(), frequencies.end());
  frequencies.erase(std::unique(frequencies.begin(), frequencies.end()), frequencies.end());
  if (frequencies.empty()) throw ConfigError("empty Fourier mask");
  if (frequencies.front() < 0 || frequencies.back() >= shape.size())
    throw DimensionError("mask frequency outside the grid");
  return masked_fft_operator(OperatorKind::fourier_mask, shape, std::move(frequencies), std::nullopt);
}

std::vector<MaskCell> to_cells(const std::vector<int>& frequencies, Shape shape) {
  std::vector<MaskCell> cells;
  cells.reserve(frequencies.size());
  for (int f : frequencies) cells.push_back({f / shape.cols, f % shape.cols});
  return cells;
}

std::vector<int> to_frequencies(const std::vector<MaskCell>& cells, Shape shape) {
  std::vector<int> freqs;
  freqs.reserve(cells.size());
  for (const auto& c : cells) {
    if (c.row < 0 || c.row >= shape.rows || c.col < 0 || c.col >= shape.cols)
      throw DimensionError(fmt::format("mask cell ({}, {}) outside {}x{} grid", c.row, c.col,
                                       shape.rows, shape.cols));
    freqs.push_back(c.row * shape.cols + c.col);
  }
  return freqs;
}

void write_mask(const std::filesystem::path& path, const std::vector<MaskCell>& cells) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write mask file {}", path.string()));
  for (const auto& c : cells) out << c.row << ' ' << c.col << '\n';
  if (!out) throw IoError(fmt::format("failed writing mask file {}", path.string()));
}

std::vector<MaskCell> read_mask(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot read mask file {}", path.string()));
  std::vector<MaskCell> cells;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    MaskCell c;
    if (!(ss >> c.row)) continue;
    std::string rest;
    if (!(ss >> c.col) || (ss >> rest))
      throw IoError(fmt::format("{}:{}: expected 'row col'", path.string(), lineno));
    cells.push_back(c);
  }
  return cells;
}

NoisyMeasurement apply_noise(const ComplexVector& y0, const NoiseModel& model) {
  double sigma = 0.0;
  if (model.sigma_override) {
    sigma = *model.sigma_override;
    if (sigma < 0.0) throw ConfigError("noise standard deviation must be non-negative");
  } else {
    const double norm = y0.norm();
    if (norm == 0.0) throw ZeroSignalError("cannot calibrate noise on a zero measurement vector");
    sigma = norm * std::pow(10.0, -model.input_snr_db / 20.0) / std::sqrt(static_cast<double>(y0.size()));
  }
  NoisyMeasurement out{y0, sigma};
  if (sigma == 0.0) return out;
  std::mt19937_64 rng(model.seed);
  std::normal_distribution<double> gauss(0.0, sigma / std::numbers::sqrt2);
  for (Eigen::Index k = 0; k < out.y.size(); ++k) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    out.y[k] += Complex(re, im);
  }
  return out;
}

Image dirty_image(const MeasurementOperator& op, const ComplexVector& y) {
  if (op.kind() != OperatorKind::fourier_mask)
    throw KindError("dirty image is defined only for Fourier-mask operators");
  // The zero-filled inverse transform is exactly the adjoint of the masked DFT.
  return Image(op.shape(), op.adjoint(y));
}

}  // namespace sara
