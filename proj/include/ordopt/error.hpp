#pragma once

#include <stdexcept>
#include <string>

namespace ordopt {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DuplicateAttribute : public Error {
 public:
  using Error::Error;
};

class NotAPrefix : public Error {
 public:
  using Error::Error;
};

class UnknownAttribute : public Error {
 public:
  using Error::Error;
};

class UnknownRelation : public Error {
 public:
  using Error::Error;
};

class UnknownStatistic : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input document (not valid JSON).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed document that violates a schema rule or invariant.
/// `path()` points at the offending node, e.g. `$.expr.input.left`.
class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// An oracle or exhaustive search was asked to exceed its guard.
class TooLarge : public Error {
 public:
  using Error::Error;
};

/// MRS input was not contiguous on the declared known prefix.
class UnsortedPrefix : public Error {
 public:
  using Error::Error;
};

class Unsatisfiable : public Error {
 public:
  using Error::Error;
};

}  // namespace ordopt
