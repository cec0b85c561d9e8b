#ifndef QVERIFY_ERRORS_HPP
#define QVERIFY_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qverify {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// quantum_core
class InvalidState : public Error {
 public:
  using Error::Error;
};
class InvalidParameter : public Error {
 public:
  using Error::Error;
};
class QubitIndexError : public Error {
 public:
  using Error::Error;
};
class NumericalError : public Error {
 public:
  using Error::Error;
};

// vqc_policy
class EncodingError : public Error {
 public:
  using Error::Error;
};
class ParameterError : public Error {
 public:
  using Error::Error;
};

// environments / builder
class ConfigError : public Error {
 public:
  using Error::Error;
};
class ExplosionError : public Error {
 public:
  using Error::Error;
};
class PolicyError : public Error {
 public:
  using Error::Error;
};
class PolicyDomainError : public PolicyError {
 public:
  using PolicyError::PolicyError;
};
class TrainingDiverged : public Error {
 public:
  using Error::Error;
};

// parsing; position is a character offset for property strings and a
// line number for model files
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : Error(msg + " (at " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};
class BindError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  SolverError(const std::string& msg, double residual)
      : Error(msg + " (residual " + std::to_string(residual) + ")"),
        residual(residual) {}
  double residual;
};

}  // namespace qverify

#endif
