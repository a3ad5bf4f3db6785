#pragma once

#include <stdexcept>
#include <string>

namespace egwp {

/// Two fields (or a field and a seed set) live on different grids.
class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A field violates a representation invariant (Hermitian symmetry,
/// zero mean, divergence-free, ...).
class InvalidField : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Time integration produced non-finite values.
class BlowUp : public std::runtime_error {
 public:
  BlowUp(const std::string& what, double last_valid_time)
      : std::runtime_error(what), last_valid_time_(last_valid_time) {}

  double last_valid_time() const noexcept { return last_valid_time_; }

 private:
  double last_valid_time_;
};

}  // namespace egwp
