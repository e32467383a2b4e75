#ifndef VPENUM_ERRORS_H_
#define VPENUM_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vpenum {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input (token syntax, transducer or grammar files).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Document is not well-nested. position is 1-based, 0 when unknown.
class NestingError : public Error {
 public:
  NestingError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// A configured cap (runs, states, words) was hit.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

// Input violates a precondition the engine relies on (ambiguity mode,
// functionality, capture cycles).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace vpenum

#endif  // VPENUM_ERRORS_H_
