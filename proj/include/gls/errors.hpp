#pragma once

#include <stdexcept>
#include <string>

namespace gls {

/// Argument outside the mathematical domain of an operation (p < 1, x below a threshold, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A moment integral that does not converge.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double p) : std::runtime_error(what), p_(p) {}
  double p() const noexcept { return p_; }

 private:
  double p_;
};

class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedBackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The materialized part of a grid is too short for the requested computation.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoFeasibleKError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SizeMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class AxiomViolationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed textual specifier (model, psi, set, grid, group).
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace gls
