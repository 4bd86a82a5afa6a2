#pragma once

#include <stdexcept>
#include <string>

namespace ordermech {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two inputs that must agree in size do not.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value violates the invariant of its type (bad permutation, bad table).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of a function (negative misalignment,
/// realized misalignment above the initial one, division by zero).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configuration is incomplete or names an unknown family.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Fewer than two agents: the runner-up bid is undefined.
class InsufficientAgentsError : public Error {
 public:
  using Error::Error;
};

/// A submitted report table is rejected by the mechanism.
class InvalidReportError : public Error {
 public:
  using Error::Error;
};

/// The requested combination is not supported (e.g. lookahead payments with
/// nonlinear cost).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed its evaluation budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// A scenario file could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace ordermech
