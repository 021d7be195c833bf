#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace synthcoll {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (empty prompt, alpha out of
/// range, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line()` is 1-based, 0 when the position is a byte
/// offset instead (see `offset()`).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t offset = 0);

  std::size_t line() const noexcept { return line_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t line_;
  std::size_t offset_;
};

/// A domain invariant does not hold for the data handed in.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// The generation, embedding or rerank service returned a non-retryable
/// status.
class ProviderError : public Error {
 public:
  ProviderError(int status, const std::string& body_excerpt);

  int status() const noexcept { return status_; }
  const std::string& body_excerpt() const noexcept { return body_; }

 private:
  int status_;
  std::string body_;
};

/// Retry budget exhausted against a remote service.
class TimeoutError : public Error {
 public:
  using Error::Error;
};

/// The forge pipeline stopped before finishing; the journal holds every
/// completed unit and a rerun resumes from it.
class CheckpointError : public Error {
 public:
  using Error::Error;
};

}  // namespace synthcoll
