#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qbessel {

/// Base class for every error thrown by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class parse_error : public error {
 public:
  using error::error;
};

/// Integer arithmetic would exceed the 64-bit range.
class overflow_error : public error {
 public:
  using error::error;
};

/// A documented precondition of an operation does not hold.
class precondition_error : public error {
 public:
  using error::error;
};

/// Gamma function evaluated at (or within tolerance of) a nonpositive integer.
class pole_error : public error {
 public:
  using error::error;
};

/// Fractional derivative of a power function does not exist for the kind/order.
class derivative_undefined_error : public error {
 public:
  using error::error;
};

/// Vanishing recursion denominator at step n (root collision or near-collision).
class denominator_pole_error : public error {
 public:
  denominator_pole_error(std::int64_t step, double denominator)
      : error("recursion denominator vanishes at n = " + std::to_string(step) +
              " (|D_n| = " + std::to_string(denominator) + ")"),
        step_(step),
        denominator_(denominator) {}

  std::int64_t step() const noexcept { return step_; }
  double denominator() const noexcept { return denominator_; }

 private:
  std::int64_t step_;
  double denominator_;
};

/// The threshold formula does not apply to the given equation.
class inapplicable_error : public error {
 public:
  using error::error;
};

}  // namespace qbessel
