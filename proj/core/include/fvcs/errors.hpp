#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace fvcs {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration value violates a PhysicalParams invariant.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Argument outside the mathematical domain of an operation (negative level, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure stopped without meeting its tolerance. Carries the
/// best value reached so callers can still report it.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::complex<double> best_value,
                   double err_estimate, std::size_t index = 0)
      : Error(what), best_value_(best_value), err_estimate_(err_estimate), index_(index) {}

  std::complex<double> best_value() const noexcept { return best_value_; }
  double err_estimate() const noexcept { return err_estimate_; }
  std::size_t index() const noexcept { return index_; }

 private:
  std::complex<double> best_value_;
  double err_estimate_;
  std::size_t index_;
};

/// Series terms stopped decreasing (ratio guard tripped).
class DivergenceError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

/// Fock truncation too small for the requested state.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, int suggested_n_max)
      : Error(what), suggested_n_max_(suggested_n_max) {}

  int suggested_n_max() const noexcept { return suggested_n_max_; }

 private:
  int suggested_n_max_;
};

}  // namespace fvcs
