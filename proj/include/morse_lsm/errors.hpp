#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace morse_lsm {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Inputs outside the domain of an operation (bad parameters, too few bound
/// states, mismatched grids).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Raised when a Morse well supports fewer bound states than an operation
/// needs. Carries the count so callers can report it.
class InsufficientBoundStates : public DomainError {
public:
  InsufficientBoundStates(std::size_t available, std::size_t required)
      : DomainError("bound_state_count = " + std::to_string(available) +
                    ", need at least " + std::to_string(required)),
        available_(available), required_(required) {}

  std::size_t available() const noexcept { return available_; }
  std::size_t required() const noexcept { return required_; }

private:
  std::size_t available_;
  std::size_t required_;
};

/// A refinement loop ran out of budget. The best estimate reached so far is
/// attached (its meaning depends on the raising operation).
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, std::vector<double> best_estimate)
      : Error(what), best_estimate_(std::move(best_estimate)) {}

  const std::vector<double>& best_estimate() const noexcept { return best_estimate_; }

private:
  std::vector<double> best_estimate_;
};

/// Malformed or inconsistent persisted data.
class LoadError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace morse_lsm
