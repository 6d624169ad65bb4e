#pragma once

#include <stdexcept>
#include <string>

namespace trigwave {

/// Raised for malformed arguments (bad K, grid mismatch, unknown names, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A time step produced non-finite values or exceeded the growth bound.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, long step)
      : std::runtime_error(what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

/// h * omega_j >= 2 for some mode where a strict CFL bound is required.
class CflViolation : public std::invalid_argument {
 public:
  CflViolation(const std::string& what, int index)
      : std::invalid_argument(what), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

class FitUndefined : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IncompleteGrid : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace trigwave
