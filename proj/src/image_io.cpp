#include "sara/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "sara/errors.hpp"

namespace sara {

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

int parse_int(const std::string& tok, const std::filesystem::path& path) {
  try {
    std::size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw IoError(fmt::format("{}: malformed PGM header token '{}'", path.string(), tok));
  }
}

}  // namespace

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  if (next_token(in) != "P5") throw IoError(fmt::format("{}: not a binary PGM (P5)", path.string()));
  const int cols = parse_int(next_token(in), path);
  const int rows = parse_int(next_token(in), path);
  const int maxval = parse_int(next_token(in), path);
  if (cols <= 0 || rows <= 0 || maxval <= 0 || maxval > 65535)
    throw IoError(fmt::format("{}: invalid PGM dimensions or maxval", path.string()));
  const std::size_t bytes_per = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> raw(static_cast<std::size_t>(rows) * cols * bytes_per);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size()))
    throw IoError(fmt::format("{}: truncated pixel data", path.string()));
  Image img(Shape{rows, cols});
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    const unsigned v = bytes_per == 1 ? raw[k] : (unsigned{raw[2 * k]} << 8) | raw[2 * k + 1];
    img.pixels[i] = static_cast<double>(v) / maxval;
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const Image& img, double lo, double hi, int maxval) {
  if (maxval != 255 && maxval != 65535) throw ConfigError("PGM maxval must be 255 or 65535");
  if (!(hi > lo)) throw IoError("PGM intensity window is empty");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out << "P5\n" << img.shape.cols << ' ' << img.shape.rows << '\n' << maxval << '\n';
  std::vector<unsigned char> raw;
  raw.reserve(static_cast<std::size_t>(img.size()) * (maxval > 255 ? 2 : 1));
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    const double t = std::clamp((img.pixels[i] - lo) / (hi - lo), 0.0, 1.0);
    const auto v = static_cast<unsigned>(std::lround(t * maxval));
    if (maxval > 255) raw.push_back(static_cast<unsigned char>(v >> 8));
    raw.push_back(static_cast<unsigned char>(v & 0xff));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError(fmt::format("failed writing {}", path.string()));
}

Image log10_render(const Image& img, double decades) {
  if (!(decades > 0.0)) throw IoError("log rendering needs a positive dynamic range");
  Image out(img.shape);
  const double peak = img.pixels.size() > 0 ? img.pixels.maxCoeff() : 0.0;
  if (!(peak > 0.0)) return out;
  const double floor = peak * std::pow(10.0, -decades);
  for (Eigen::Index i = 0; i < img.size(); ++i)
    out.pixels[i] = (std::log10(std::max(img.pixels[i], floor) / peak) + decades) / decades;
  return out;
}

Image abs_error(const Image& reference, const Image& estimate) {
  if (reference.shape != estimate.shape) throw DimensionError("error image: shapes differ");
  return Image(reference.shape, (reference.pixels - estimate.pixels).cwiseAbs());
}

}  // namespace sara
