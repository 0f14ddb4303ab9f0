#pragma once

#include <stdexcept>
#include <string>

namespace zakharov {

/// Malformed arguments or configuration (bad grid size, unknown lemma id, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical safety guard tripped: blow-up, near-resonant denominator,
/// non-finite multiplier value, divergent fixed-point iteration.
class NumericalGuard : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zakharov
