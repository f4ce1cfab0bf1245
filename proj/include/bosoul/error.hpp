#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bosoul {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Linear-algebra failures (decomposition did not converge, matrix not PD).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace bosoul
