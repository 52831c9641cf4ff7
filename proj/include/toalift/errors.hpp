#pragma once

#include <stdexcept>
#include <string>

namespace toalift {

/// A caller broke a documented precondition (dimension mismatch, missing
/// lambda, too few stations, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Derivatives requested at a point where the objective has a kink
/// (F1/FL1 exactly on a station with lambda = 0).
class NonDifferentiablePoint : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The random scenario generator could not satisfy its acceptance gates.
class GenerationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed configuration or scenario file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ContractViolation(what);
}

}  // namespace toalift
