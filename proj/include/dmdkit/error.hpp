#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace dmdkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input data or configuration. The CLI maps this to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure could not produce a trustworthy result (exit code 1).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A CSV cell or header could not be parsed. Rows are 1-based data rows
// (the header is not counted).
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t row, std::string column)
      : ValidationError(what), row_(row), column_(std::move(column)) {}

  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

}  // namespace dmdkit
