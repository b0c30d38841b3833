#pragma once

#include <stdexcept>
#include <string>

namespace pcpnet {

// Base class for every error raised by this library. CLI code maps the
// subclasses onto exit codes; library code never prints.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The parent relation contains a directed cycle.
struct CycleDetected : Error {
  using Error::Error;
};

// Two models that must share one structure do not.
struct IncompatibleStructure : Error {
  using Error::Error;
};

// A preference table is missing rules that the operation requires.
struct IncompleteTable : Error {
  using Error::Error;
};

// The operation is only defined for forest-shaped structures.
struct NotAForest : Error {
  using Error::Error;
};

// The two outcomes do not differ in exactly one variable.
struct NotASwapPair : Error {
  using Error::Error;
};

// Aggregation inputs whose structures cannot be reconciled.
struct StructureMismatch : Error {
  using Error::Error;
};

// Aggregation over zero nets.
struct EmptyPopulation : Error {
  using Error::Error;
};

// Enumeration guard for the brute-force oracle was exceeded. The instance is
// well formed; it is just too big to enumerate.
struct TooLargeForOracle : Error {
  using Error::Error;
};

// Enumeration guard for exhaustive outcome scans was exceeded.
struct TooLarge : Error {
  using Error::Error;
};

// Text could not be tokenized/parsed. Positions are 1-based.
struct ParseError : Error {
  int line;
  int column;
  ParseError(int line_, int column_, const std::string& what_)
      : Error("line " + std::to_string(line_) + ":" + std::to_string(column_) +
              ": " + what_),
        line(line_),
        column(column_) {}
};

// Text parsed but violates a model-level rule (duplicate rule, missing rule,
// unknown variable, probability out of range, ...).
struct SemanticError : Error {
  using Error::Error;
};

}  // namespace pcpnet
