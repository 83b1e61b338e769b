#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kgtype {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what), line_(0) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Unknown entity, type, term or index.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration or incompatible shapes.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Non-finite loss or other numeric breakdown during training.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace kgtype
