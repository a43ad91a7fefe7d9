#pragma once

#include <stdexcept>
#include <string>

namespace risprop {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid model parameter (negative density, m < 0.5, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Topology cannot support the requested operation (e.g. no base station).
class TopologyError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values, quadrature failure or loss of precision.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Zero-variance input to moment matching.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

}  // namespace detail
}  // namespace risprop
