#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace splitgeom {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression source. `offset` is the byte offset of the
/// offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// A primitive was evaluated outside its domain (log of a non-positive
/// number, division by zero, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Degenerate geometric input: non-SPD metric, rank-deficient frame,
/// principal curvature groups that are not separated.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument to an operation (subset size out of range, k too small).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Scenario/config file problems (schema violations, unknown keys).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace splitgeom
