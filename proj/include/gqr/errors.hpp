#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gqr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Even, degenerate or otherwise unsupported modulus.
class UnsupportedModulus : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Operands belong to different quaternion rings, or moduli disagree.
class RingMismatch : public Error {
 public:
  using Error::Error;
};

/// An exhaustive search would exceed its configured limit.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, std::uint64_t cap)
      : Error(what + " (cap " + std::to_string(cap) + ")"), cap_(cap) {}
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t cap_;
};

/// A result guaranteed by theory was not found; signals a bug or a false
/// premise rather than bad input.
class InternalContradiction : public Error {
 public:
  using Error::Error;
};

}  // namespace gqr
