#pragma once

#include <stdexcept>
#include <string>

namespace sara {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sizes or shapes that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Noise calibration requested on an all-zero measurement vector.
class ZeroSignalError : public Error {
 public:
  using Error::Error;
};

/// Operation requested on the wrong kind of measurement operator.
class KindError : public Error {
 public:
  using Error::Error;
};

class NonPositiveGamma : public Error {
 public:
  using Error::Error;
};

/// SNR requested against an all-zero reference image.
class ZeroReference : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sara
