#pragma once

#include <stdexcept>
#include <string>

namespace gemgaps {

/// Invalid parameter or argument outside the domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Parameters that are mathematically valid but outside the supported range
/// of a numerical route.
class UnsupportedParameterError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An iterative numerical method failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sampler exceeded one of its configured work caps.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Enumeration request beyond the supported size.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Statistical test input that does not support the test (too few bins,
/// constant samples).
class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace detail
}  // namespace gemgaps
