#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sara/types.hpp"
#include "sara/wavelets.hpp"

namespace sara {

struct FrameId {
  enum class Kind { daubechies, dirac };

  Kind kind = Kind::dirac;
  Daubechies family = Daubechies::db1;  // ignored for Dirac

  static FrameId dirac() { return {Kind::dirac, Daubechies::db1}; }
  static FrameId db(Daubechies f) { return {Kind::daubechies, f}; }

  [[nodiscard]] std::string name() const;
  friend bool operator==(const FrameId& a, const FrameId& b) {
    return a.kind == b.kind && (a.kind == Kind::dirac || a.family == b.family);
  }
};

/// Parses a comma-separated frame list such as "dirac,db1,db2".
std::vector<FrameId> parse_frames(std::string_view text);
std::string format_frames(const std::vector<FrameId>& frames);

/// Db1..Db8, optionally preceded by the Dirac basis.
std::vector<FrameId> daubechies_frames(bool with_dirac = false);

/// Concatenation of q orthonormal bases scaled by 1/sqrt(q). Immutable; the
/// operators are matrix-free and reentrant.
class SaraDictionary {
 public:
  SaraDictionary(std::vector<FrameId> frames, Shape shape, int levels = 4,
                 bool allow_duplicates = false);

  /// Ψ†x: block i holds (1/sqrt(q)) Ψ_i† x.
  [[nodiscard]] CoefficientVector analysis(const Image& x) const;
  void analysis(std::span<const double> x, std::span<double> out) const;

  /// Ψα = (1/sqrt(q)) Σ_i Ψ_i α_i.
  [[nodiscard]] Image synthesis(const CoefficientVector& alpha) const;
  void synthesis(std::span<const double> alpha, std::span<double> out) const;

  [[nodiscard]] const std::vector<FrameId>& frames() const { return frames_; }
  [[nodiscard]] int frame_count() const { return static_cast<int>(frames_.size()); }
  [[nodiscard]] Shape shape() const { return shape_; }
  [[nodiscard]] Eigen::Index pixel_count() const { return shape_.size(); }
  [[nodiscard]] Eigen::Index coefficient_count() const { return shape_.size() * frame_count(); }
  [[nodiscard]] int levels() const { return levels_; }

 private:
  std::vector<FrameId> frames_;
  Shape shape_;
  int levels_;
  double scale_;
};

}  // namespace sara
