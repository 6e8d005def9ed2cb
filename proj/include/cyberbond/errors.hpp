#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cyberbond {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments or violated preconditions (CLI exit code 2).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Missing files, malformed rows, not enough observations (CLI exit code 3).
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t row, const std::string& what)
      : DataError("row " + std::to_string(row) + ": " + what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

// Singular information matrices, failed root brackets, degenerate grids
// (CLI exit code 4).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace cyberbond
