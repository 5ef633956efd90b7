#pragma once

#include <stdexcept>
#include <string>

namespace idsm {

/// Invalid model, kernel or run configuration. The CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not produce a trustworthy value (NaN integrand,
/// non-convergent root search, ...). The CLI maps it to exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested operation has no meaning for this kernel family.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace idsm
