#pragma once

#include <map>
#include <string>
#include <vector>

#include "dlcert/ast.hpp"

namespace dlcert::detail {

// Variable name -> index into a state vector.
class Slots {
 public:
  Slots() = default;
  explicit Slots(const std::vector<std::string>& names);

  int find(const std::string& name) const;  // -1 if absent
  int at(const std::string& name) const;    // throws MissingVariable
  int add(const std::string& name);
  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::map<std::string, int> index_;
};

// Postfix code for a term over a state vector.
class Code {
 public:
  Code() = default;
  Code(const Term& t, const Slots& slots);

  double eval(const double* x) const;
  // Also reports the largest magnitude of any intermediate value.
  double eval(const double* x, double& scale) const;
  bool empty() const { return ops_.empty(); }

 private:
  enum class Op { Push, Load, Add, Sub, Mul, Div, Neg, Pow, Min, Max };
  struct Instr {
    Op op;
    int slot = 0;
    double value = 0;
  };
  void emit(const Term& t, const Slots& slots, int depth);

  std::vector<Instr> ops_;
  int depth_ = 0;
};

// Formula evaluated numerically. residual() is positive exactly when the
// formula is false and measures how far: max over conjuncts, min over
// disjuncts, r - l for l >= r, |l - r| for l = r, never positive for !=.
// Per comparison a slack of rel times the largest intermediate magnitude is
// subtracted, so cancellation noise is not mistaken for a violation.
class NumericFormula {
 public:
  NumericFormula() = default;
  NumericFormula(const Formula& f, const Slots& slots);

  bool holds(const double* x) const;
  double residual(const double* x, double rel = 0) const;

 private:
  struct Node {
    enum Kind { Cmp, And, Or, True, False } kind = True;
    CmpOp op = CmpOp::Ge;
    Code l, r;
    std::vector<int> kids;
  };
  int build(const Formula& f, bool negated, const Slots& slots);
  bool holds_at(int n, const double* x) const;
  double residual_at(int n, const double* x, double rel) const;

  std::vector<Node> nodes_;
};

}  // namespace dlcert::detail
