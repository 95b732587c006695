#pragma once

#include <stdexcept>
#include <string>

namespace stacklab {

// Action index outside the game's action sets.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Caller broke an operation's precondition (reward outside [0,1], etc).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inconsistent simulation or information-model configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed configuration document.
class ParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Random game generation could not satisfy the uniqueness requirements.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A solver found no qualified manipulation; only possible on tied games.
class DegenerateGameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Enumeration would exceed the configured cap.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace stacklab
