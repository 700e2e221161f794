#pragma once

#include <stdexcept>
#include <string>

namespace navbench {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateSegment : Error {
  using Error::Error;
};

struct InsufficientSamples : Error {
  using Error::Error;
};

struct EmptyGlobalPath : Error {
  using Error::Error;
};

struct NoPath : Error {
  using Error::Error;
};

struct ScenarioInvalid : Error {
  using Error::Error;
};

/// CSV or JSON input that could not be tokenized/converted.
struct ParseError : Error {
  ParseError(const std::string& what, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
        line(line),
        column(column) {}
  int line = 0;
  int column = 0;
};

/// Structurally valid file that is missing a required column/key.
struct SchemaError : Error {
  SchemaError(const std::string& what, std::string missing)
      : Error(what + ": " + missing), missing_column(std::move(missing)) {}
  std::string missing_column;
};

struct NonMonotonicTime : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace navbench
