#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dlcert {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourcePosition {
  int line = 0;
  int column = 0;
};

class SyntaxError : public Error {
 public:
  SyntaxError(SourcePosition pos, std::vector<std::string> expected, std::string found);
  SourcePosition position() const { return pos_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  SourcePosition pos_;
  std::vector<std::string> expected_;
  std::string found_;
};

class UndefinedName : public Error {
 public:
  explicit UndefinedName(std::string name)
      : Error("undefined name '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class RecursiveDefinition : public Error {
 public:
  explicit RecursiveDefinition(std::string name)
      : Error("recursive definition of '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class UnknownMethod : public Error {
 public:
  explicit UnknownMethod(std::string name)
      : Error("unknown cut method '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

enum class NotPolynomialReason { DivisionByState, DivisionByParameter, MinMax, SymbolicExponent };

class NotPolynomial : public Error {
 public:
  NotPolynomial(std::string subterm, NotPolynomialReason reason);
  const std::string& subterm() const { return subterm_; }
  NotPolynomialReason reason() const { return reason_; }

 private:
  std::string subterm_;
  NotPolynomialReason reason_;
};

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(std::string name)
      : Error("variable '" + name + "' is neither an ODE variable nor a declared parameter"),
        name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class MissingVariable : public Error {
 public:
  explicit MissingVariable(std::string name)
      : Error("no value for variable '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class UnsupportedConstruct : public Error {
 public:
  using Error::Error;
};

class ShapeUnsupported : public Error {
 public:
  using Error::Error;
};

class SideConditionUnsupported : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class NumericBlowup : public Error {
 public:
  using Error::Error;
};

class SamplingExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace dlcert
