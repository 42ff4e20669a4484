#pragma once

#include <filesystem>

#include "sara/types.hpp"

namespace sara {

/// Binary PGM (P5), 8- or 16-bit; intensities rescaled to [0, 1].
Image read_pgm(const std::filesystem::path& path);

/// Writes `img` as binary PGM, mapping [lo, hi] linearly onto [0, maxval]
/// and clipping outside values. maxval must be 255 or 65535.
void write_pgm(const std::filesystem::path& path, const Image& img, double lo = 0.0, double hi = 1.0,
               int maxval = 65535);

/// log10 rendering over `decades` below the peak, mapped to [0, 1].
Image log10_render(const Image& img, double decades = 3.0);

/// Pixelwise |reference - estimate|.
Image abs_error(const Image& reference, const Image& estimate);

}  // namespace sara
