#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kripke {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : Error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

// Node kind not allowed in the requested object language.
class LanguageError : public Error {
 public:
  using Error::Error;
};

// Malformed frames/models, unknown nodes, non-monotone assignments.
class ModelError : public Error {
 public:
  using Error::Error;
};

// Unassigned variables, parameters outside a domain, equality in an
// equality-free model.
class EvalError : public Error {
 public:
  using Error::Error;
};

class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace kripke
