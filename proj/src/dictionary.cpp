#include "sara/dictionary.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <fmt/format.h>

#include "sara/errors.hpp"

namespace sara {

std::string FrameId::name() const {
  return kind == Kind::dirac ? std::string("dirac") : to_string(family);
}

std::vector<FrameId> parse_frames(std::string_view text) {
  std::vector<FrameId> frames;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    std::string token(text.substr(pos, comma - pos));
    std::erase_if(token, [](unsigned char c) { return std::isspace(c); });
    std::transform(token.begin(), token.end(), token.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (token == "dirac") {
      frames.push_back(FrameId::dirac());
    } else if (token.size() == 3 && token.starts_with("db") && token[2] >= '1' && token[2] <= '8') {
      frames.push_back(FrameId::db(static_cast<Daubechies>(token[2] - '0')));
    } else {
      throw ConfigError(fmt::format("unknown frame '{}' in dictionary list '{}'", token, text));
    }
    pos = comma + 1;
  }
  return frames;
}

std::string format_frames(const std::vector<FrameId>& frames) {
  std::string out;
  for (const auto& f : frames) {
    if (!out.empty()) out += ',';
    out += f.name();
  }
  return out;
}

std::vector<FrameId> daubechies_frames(bool with_dirac) {
  std::vector<FrameId> frames;
  if (with_dirac) frames.push_back(FrameId::dirac());
  for (int k = 1; k <= 8; ++k) frames.push_back(FrameId::db(static_cast<Daubechies>(k)));
  return frames;
}

SaraDictionary::SaraDictionary(std::vector<FrameId> frames, Shape shape, int levels,
                               bool allow_duplicates)
    : frames_(std::move(frames)), shape_(shape), levels_(0), scale_(0.0) {
  if (frames_.empty()) throw ConfigError("dictionary needs at least one frame");
  if (!allow_duplicates) {
    for (std::size_t i = 0; i < frames_.size(); ++i)
      for (std::size_t j = i + 1; j < frames_.size(); ++j)
        if (frames_[i] == frames_[j])
          throw ConfigError(fmt::format("duplicate frame '{}' in dictionary", frames_[i].name()));
  }
  levels_ = clamp_levels(shape_, levels);
  const int block = 1 << levels_;
  if (shape_.rows % block != 0 || shape_.cols % block != 0)
    throw DimensionError(fmt::format("{}x{} image is not divisible by 2^{}", shape_.rows,
                                     shape_.cols, levels_));
  scale_ = 1.0 / std::sqrt(static_cast<double>(frames_.size()));
}

void SaraDictionary::analysis(std::span<const double> x, std::span<double> out) const {
  const auto n = static_cast<std::size_t>(pixel_count());
  if (x.size() != n || out.size() != n * frames_.size())
    throw DimensionError("analysis: buffer sizes do not match the dictionary");
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    auto block = out.subspan(i * n, n);
    for (std::size_t p = 0; p < n; ++p) block[p] = scale_ * x[p];
    if (frames_[i].kind == FrameId::Kind::daubechies)
      dwt2_forward_inplace(block, shape_, filter_taps(frames_[i].family), levels_);
  }
}

void SaraDictionary::synthesis(std::span<const double> alpha, std::span<double> out) const {
  const auto n = static_cast<std::size_t>(pixel_count());
  if (out.size() != n || alpha.size() != n * frames_.size())
    throw DimensionError("synthesis: buffer sizes do not match the dictionary");
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<double> work(n);
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    auto block = alpha.subspan(i * n, n);
    std::copy(block.begin(), block.end(), work.begin());
    if (frames_[i].kind == FrameId::Kind::daubechies)
      dwt2_inverse_inplace(work, shape_, filter_taps(frames_[i].family), levels_);
    for (std::size_t p = 0; p < n; ++p) out[p] += scale_ * work[p];
  }
}

CoefficientVector SaraDictionary::analysis(const Image& x) const {
  if (x.shape != shape_) throw DimensionError("analysis: image shape does not match the dictionary");
  CoefficientVector out(coefficient_count());
  analysis({x.pixels.data(), static_cast<std::size_t>(x.pixels.size())},
           {out.data(), static_cast<std::size_t>(out.size())});
  return out;
}

Image SaraDictionary::synthesis(const CoefficientVector& alpha) const {
  Image out(shape_);
  synthesis({alpha.data(), static_cast<std::size_t>(alpha.size())},
            {out.pixels.data(), static_cast<std::size_t>(out.pixels.size())});
  return out;
}

}  // namespace sara
