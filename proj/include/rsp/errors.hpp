#pragma once

#include <stdexcept>
#include <string>

namespace rsp {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& what) : Error("invalid parameter: " + what) {}
};

class PreconditionViolation : public Error {
 public:
  explicit PreconditionViolation(const std::string& what)
      : Error("precondition violated: " + what) {}
};

class InvalidPlan : public Error {
 public:
  explicit InvalidPlan(const std::string& what) : Error("invalid plan: " + what) {}
};

class GuardExceeded : public Error {
 public:
  explicit GuardExceeded(const std::string& what) : Error("guard exceeded: " + what) {}
};

class GenerationFailure : public Error {
 public:
  explicit GenerationFailure(const std::string& what) : Error("generation failed: " + what) {}
};

class CompileFailure : public Error {
 public:
  explicit CompileFailure(const std::string& what) : Error("compile failed: " + what) {}
};

class InvalidFormula : public Error {
 public:
  explicit InvalidFormula(const std::string& what) : Error("invalid formula: " + what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error("validation error: " + what) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error("internal error: " + what) {}
};

}  // namespace rsp
