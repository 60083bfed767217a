#pragma once

#include <stdexcept>
#include <string>

namespace pnm {

// Every failure raised by the core library derives from Error so the C API
// can map it onto a status code without string matching.
enum class ErrorCode {
  Argument = 1,
  Parse,
  Validation,
  Signature,
  Budget,
  ClassViolation,
  Certificate,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& what) : Error(ErrorCode::Argument, what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(ErrorCode::Parse, what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorCode::Validation, what) {}
};

class SignatureError : public Error {
 public:
  explicit SignatureError(const std::string& what) : Error(ErrorCode::Signature, what) {}
};

class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& what) : Error(ErrorCode::Budget, what) {}
};

class ClassViolation : public Error {
 public:
  explicit ClassViolation(const std::string& what) : Error(ErrorCode::ClassViolation, what) {}
};

}  // namespace pnm
