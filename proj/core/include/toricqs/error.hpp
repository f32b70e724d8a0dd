#pragma once

#include <stdexcept>
#include <string>

namespace toricqs {

/// Raised when an input violates a documented precondition (bad geometry,
/// malformed data, out-of-domain point, ...).  The CLI maps these to exit 1.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an internal consistency check fails (two independent
/// computations of the same quantity disagree, a certified cover does not
/// verify, ...).  The CLI maps these to exit 2.
class internal_error : public std::runtime_error {
 public:
  explicit internal_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace toricqs
