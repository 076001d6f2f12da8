#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ircache {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t actual)
      : Error("dimension mismatch: expected " + std::to_string(expected) +
              ", got " + std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const noexcept { return expected_; }
  std::size_t actual() const noexcept { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

class InvalidEncoding : public Error {
 public:
  using Error::Error;
};

class CapacityExceeded : public Error {
 public:
  explicit CapacityExceeded(std::size_t capacity)
      : Error("cache capacity of " + std::to_string(capacity) +
              " entries exceeded"),
        capacity_(capacity) {}

  std::size_t capacity() const noexcept { return capacity_; }

 private:
  std::size_t capacity_;
};

class EmptyStore : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; line() is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace ircache
