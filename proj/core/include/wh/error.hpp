#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wh {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed word literal, fraction, JSON document or config.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument does not hold (rank out of range, word not
/// cyclically reduced, chain not Gamma-based, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A breadth-first exploration grew past its vertex cap.
class CapExceeded : public Error {
 public:
  explicit CapExceeded(std::size_t cap)
      : Error("component exceeds vertex cap " + std::to_string(cap)), cap_(cap) {}
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

class NotIrreducible : public Error {
 public:
  NotIrreducible() : Error("Markov chain is not irreducible") {}
};

class NoClosingPath : public Error {
 public:
  using Error::Error;
};

/// A closed path that reads only tree edges, i.e. represents the trivial class.
class Degenerate : public Error {
 public:
  using Error::Error;
};

/// A witness failed to replay; `step` is the first diverging step.
class WitnessMismatch : public Error {
 public:
  WitnessMismatch(std::size_t step, const std::string& what)
      : Error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace wh
