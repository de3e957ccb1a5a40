#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace relbetti {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArithmeticError : public Error {
 public:
  using Error::Error;
};

// Malformed input text; message carries the location.
class ParseError : public Error {
 public:
  using Error::Error;
};

// An operation's precondition failed. `witnesses` names concrete offending
// elements so reports can show them.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, std::vector<std::string> witnesses = {})
      : Error(what), witnesses_(std::move(witnesses)) {}
  const std::vector<std::string>& witnesses() const { return witnesses_; }

 private:
  std::vector<std::string> witnesses_;
};

// An internal identity that must hold exactly did not.
class InvariantError : public Error {
 public:
  using Error::Error;
};

#define RB_CHECK(cond, msg)                                \
  do {                                                     \
    if (!(cond)) throw ::relbetti::InvariantError(msg);    \
  } while (0)

}  // namespace relbetti
