#pragma once

#include <stdexcept>
#include <string>

namespace dpa {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid model parameters or simulation setup.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed or incomplete configuration file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a function (divergent integral, pole, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Quadrature non-convergence or a non-finite intermediate.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace dpa
