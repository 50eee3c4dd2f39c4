#pragma once

#include <stdexcept>
#include <string>

namespace liftcal {

// Malformed input text. Maps to exit code 1.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column);

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Well-formed input that cannot be given a meaning. Maps to exit code 2.
class SemanticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UndeclaredFeature : public SemanticError {
 public:
  explicit UndeclaredFeature(const std::string& name);

  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

} // namespace liftcal
