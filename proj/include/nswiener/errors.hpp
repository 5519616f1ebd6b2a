// Error types thrown by the library.  The command line tool maps each type
// to a distinct process exit code; see tools/nswiener.cpp.
#pragma once

#include <stdexcept>
#include <string>

namespace nswiener {

// Malformed input files: bad JSON, missing fields, wrong array shapes.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Incompatible block sizes or windows between operands.
class DimensionError : public std::runtime_error {
 public:
  explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

// A matrix or operator required to be positive definite is not; carries the
// certified lower bound on the smallest eigenvalue that was obtained.
class PositivityError : public std::runtime_error {
 public:
  PositivityError(const std::string& what, double certificate)
      : std::runtime_error(what), certificate_(certificate) {}
  double certificate() const { return certificate_; }

 private:
  double certificate_ = 0.0;
};

// The finite-section factorization did not stabilize under pad doubling.
class StabilizationError : public std::runtime_error {
 public:
  explicit StabilizationError(const std::string& what) : std::runtime_error(what) {}
};

// Input outside an operation's domain (evaluation point off the closed disk,
// non-self-adjoint input where self-adjointness is required, singular block).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nswiener
