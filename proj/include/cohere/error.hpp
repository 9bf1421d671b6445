#pragma once

#include <stdexcept>
#include <string>

namespace cohere {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sizes, arities or argument counts that do not line up.
class ArityError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// A 2-word or step whose index words do not type-check.
class TypingError : public Error {
 public:
  using Error::Error;
};

}  // namespace cohere
