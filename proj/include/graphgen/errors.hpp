#pragma once

#include <stdexcept>
#include <string>

namespace graphgen {

/// Base for all library errors; the CLI maps these to exit code 1.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed constraint files, graph files, plans, or model artifacts.
struct ParseError : Error {
  using Error::Error;
};

/// Infeasible or out-of-range generation configuration.
struct ConfigError : Error {
  using Error::Error;
};

/// Value outside its documented domain (bad cell, bad action index).
struct DomainError : Error {
  using Error::Error;
};

/// API misuse: a precondition the caller controls was violated.
struct ContractError : Error {
  using Error::Error;
};

/// Subgraph concatenation failure.
struct CompositionError : Error {
  using Error::Error;
};

/// File read/write failure.
struct IoError : Error {
  using Error::Error;
};

/// Training aborted (non-finite loss or similar diagnostic).
struct TrainingError : Error {
  using Error::Error;
};

}  // namespace graphgen
