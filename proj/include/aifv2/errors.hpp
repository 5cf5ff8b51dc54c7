#pragma once

#include <stdexcept>
#include <string>

namespace aifv2 {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad user-facing input: malformed files, invalid distributions, bad flags.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(what) {}
};

// A bitstream that cannot be decoded against the given code pair.
class CorruptStreamError : public Error {
 public:
  explicit CorruptStreamError(const std::string& what) : Error(what) {}
};

// The cost-parameter iteration exceeded its iteration cap.
class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what) : Error(what) {}
};

// An internal consistency check failed; indicates a defect, not bad input.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(what) {}
};

// Arithmetic left the range exactly representable by the rational type.
class OverflowError : public Error {
 public:
  explicit OverflowError(const std::string& what) : Error(what) {}
};

namespace detail {
inline void check(bool cond, const char* msg) {
  if (!cond) throw InternalError(msg);
}
}  // namespace detail

}  // namespace aifv2
