#pragma once

#include <stdexcept>
#include <string>

namespace specsense {

/// Raised when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a series, quadrature or iteration fails to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& what) {
  if (!condition) throw DomainError(what);
}

}  // namespace detail
}  // namespace specsense
