#pragma once

#include <stdexcept>
#include <string>

namespace chiralrbm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// A block or factor whose condition number exceeds the configured cap.
class SingularMatrix : public Error {
 public:
  SingularMatrix(const std::string& what, double condition)
      : Error(what + " (condition estimate " + std::to_string(condition) + ")"),
        condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Structural non-invertibility, e.g. a chiral operator with an odd number of blocks.
class NotInvertible : public Error {
 public:
  using Error::Error;
};

/// H - z is numerically singular: z sits on (or too close to) the spectrum.
class NearSpectrum : public Error {
 public:
  NearSpectrum(const std::string& what, double condition)
      : Error(what + " (condition estimate " + std::to_string(condition) + ")"),
        condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Too many Monte Carlo samples failed for the estimate to be meaningful.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace chiralrbm
