#pragma once

#include <stdexcept>
#include <string>

namespace mirpc {

/// A physical or mathematical precondition was violated.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Efficiency factors that cannot all hold at once (e.g. an inferred
/// probability above one).
class InconsistentBudgetError : public DomainError {
public:
  using DomainError::DomainError;
};

/// Objective has no interior maximum for the given inputs.
class NoInteriorOptimumError : public DomainError {
public:
  using DomainError::DomainError;
};

/// Bad configuration: parse failures, unknown keys, constraint violations.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace detail

}  // namespace mirpc
