#pragma once

#include <stdexcept>
#include <string>

namespace optibatch {

// Invalid algorithm/problem combination or malformed configuration.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// API misuse: out-of-order rounds, uninitialized state, boundary violations.
struct UsageError : std::logic_error {
  explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

// Dimension mismatch between vectors/matrices.
struct ShapeError : std::invalid_argument {
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

// Non-finite or otherwise unusable numeric input.
struct InputError : std::invalid_argument {
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Non-finite values produced during iteration.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// LIBSVM / config text parse failure; carries the offending location.
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, int line, int column = -1)
      : std::runtime_error(what + " (line " + std::to_string(line) +
                           (column >= 0 ? ", column " + std::to_string(column) : "") + ")"),
        line(line),
        column(column) {}
  int line;
  int column;
};

}  // namespace optibatch
