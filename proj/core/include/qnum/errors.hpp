#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qnum {

/// Malformed input: bad ids, dangling references, inconsistent parameters.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The point violates a constraint of the transformed problem.
class InfeasibleError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DegenerateMeasureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// log f has more than one inflection point on (c, 1).
class NonUniqueInflectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedSizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite values during a solve; carries the last strictly feasible
/// iterate (log-rates).
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::vector<double> last_good)
      : std::runtime_error(what), last_good_(std::move(last_good)) {}

  const std::vector<double>& last_good_iterate() const noexcept {
    return last_good_;
  }

 private:
  std::vector<double> last_good_;
};

}  // namespace qnum
