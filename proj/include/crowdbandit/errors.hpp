#pragma once

#include <stdexcept>
#include <string>

namespace crowdbandit {

// Bad inputs to the aggregation rules.
class InvalidWeight : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidLabel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameters or experiment settings that cannot be honoured.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnknownStrategy : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Budget T too small (or too large) for what the strategy must spend.
class BudgetError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Malformed CSV / JSONL / config file contents.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IncompleteMatrix : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Special-function argument outside its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Iterative evaluation failed to converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A state invariant was broken upstream (e.g. a non-finite cumulative loss).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace crowdbandit
