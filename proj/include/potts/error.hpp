#pragma once

#include <stdexcept>
#include <string>

namespace potts {

/// Argument outside the domain where a formula or routine is defined.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// An iterative numerical method did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// A check that should hold by construction failed (e.g. a root bracket
/// without a sign change).
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

/// Monte Carlo run too short to form the requested estimator.
class InsufficientStatistics : public std::runtime_error {
 public:
  explicit InsufficientStatistics(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace potts
