#pragma once

#include <stdexcept>
#include <string>

namespace memsep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the domain of an operation (invalid point, bad parameters).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unknown configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(what + ": " + path), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Iterative solver or integrator failed to produce a usable answer.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Metric too close to degenerate for its inverse to be trusted.
class SingularityError : public NumericalError {
 public:
  SingularityError(const std::string& what, double x_l, double x_r)
      : NumericalError(what), x_l_(x_l), x_r_(x_r) {}

  double x_l() const noexcept { return x_l_; }
  double x_r() const noexcept { return x_r_; }

 private:
  double x_l_;
  double x_r_;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace memsep
