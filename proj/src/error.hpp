#pragma once

#include <stdexcept>
#include <string>

namespace ltb {

enum class ErrorCode {
  Domain = 1,
  Validation,
  Parse,
  NoSignChange,
  NoConvergence,
  SizeLimit,
  Unsupported,
  InvalidArgument,
  Io,
};

const char* error_code_name(ErrorCode code) noexcept;

/// Base of every exception the library throws.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCode::Domain, what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorCode::Validation, what) {}
};

/// JSON syntax or schema failure; line/column are 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(ErrorCode::Parse, what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class NoSignChangeError : public Error {
 public:
  explicit NoSignChangeError(const std::string& what)
      : Error(ErrorCode::NoSignChange, what) {}
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what)
      : Error(ErrorCode::NoConvergence, what) {}
};

class SizeLimitError : public Error {
 public:
  explicit SizeLimitError(const std::string& what)
      : Error(ErrorCode::SizeLimit, what) {}
};

class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& what)
      : Error(ErrorCode::Unsupported, what) {}
};

}  // namespace ltb
