#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace normdyn {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied arguments that violate a precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

// A numeric argument lies outside the domain of the function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Data does not pin down the parameters of a fit.
class IdentifiabilityError : public Error {
 public:
  using Error::Error;
};

// Payoff average over an empty neighborhood.
class PayoffUndefinedError : public Error {
 public:
  using Error::Error;
};

// A 2x2 matrix that does not satisfy a > c and d > b.
class NotCoordinationError : public Error {
 public:
  using Error::Error;
};

// Analysis requested on data of the wrong shape.
class AnalysisError : public Error {
 public:
  using Error::Error;
};

// Run configuration that cannot be resolved.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace normdyn
