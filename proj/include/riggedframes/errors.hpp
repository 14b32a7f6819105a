#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rigged {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched vector or matrix sizes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or unmet precondition of a composite check.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Syntax error in a weight expression or a malformed input file.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

/// Raised when the frame operator is singular at the inversion cutoff.
class NotAFrameError : public Error {
 public:
  NotAFrameError(double lambda_min, double lambda_max)
      : Error("frame operator is singular: lambda_min=" + std::to_string(lambda_min) +
              " lambda_max=" + std::to_string(lambda_max)),
        lambda_min_(lambda_min),
        lambda_max_(lambda_max) {}

  double lambda_min() const noexcept { return lambda_min_; }
  double lambda_max() const noexcept { return lambda_max_; }

 private:
  double lambda_min_;
  double lambda_max_;
};

}  // namespace rigged
