#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dlcert/rational.hpp"

namespace dlcert {

struct TermNode;
struct FormulaNode;
struct ProgramNode;

enum class TermKind { Var, Lit, Add, Sub, Neg, Mul, Div, Pow, Min, Max };

// Immutable, structurally compared arithmetic term. Copies share nodes.
class Term {
 public:
  Term() = default;

  static Term var(std::string name);
  static Term lit(Rational value);
  static Term lit(long value) { return lit(Rational(value)); }
  static Term add(Term l, Term r);
  static Term sub(Term l, Term r);
  static Term neg(Term t);
  static Term mul(Term l, Term r);
  static Term div(Term l, Term r);
  static Term pow(Term base, unsigned exponent);
  static Term min(Term l, Term r);
  static Term max(Term l, Term r);

  explicit operator bool() const { return node_ != nullptr; }
  TermKind kind() const;
  const std::string& name() const;
  const Rational& value() const;
  // Binary operands. Neg and Pow keep their single child in lhs().
  const Term& lhs() const;
  const Term& rhs() const;
  unsigned exponent() const;
  bool is_binary() const;
  const TermNode* node() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const TermNode> node_;
};

Term operator+(const Term& a, const Term& b);
Term operator-(const Term& a, const Term& b);
Term operator-(const Term& a);
Term operator*(const Term& a, const Term& b);
Term operator/(const Term& a, const Term& b);

enum class CmpOp { Ge, Gt, Eq, Ne, Le, Lt };

const char* cmp_symbol(CmpOp op);
CmpOp negate(CmpOp op);
// a op b  <=>  b flip(op) a
CmpOp flip(CmpOp op);

enum class FormulaKind { Cmp, Not, And, Or, Implies, Box, Diamond, True, False };

class Program;

class Formula {
 public:
  Formula() = default;

  static Formula cmp(Term l, CmpOp op, Term r);
  static Formula truth();
  static Formula falsity();
  static Formula negation(Formula f);
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula implies(Formula l, Formula r);
  static Formula box(Program p, Formula f);
  static Formula diamond(Program p, Formula f);

  explicit operator bool() const { return node_ != nullptr; }
  FormulaKind kind() const;
  CmpOp op() const;
  const Term& left_term() const;
  const Term& right_term() const;
  // Not/Box/Diamond keep their operand in lhs().
  const Formula& lhs() const;
  const Formula& rhs() const;
  const Program& program() const;
  const FormulaNode* node() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const FormulaNode> node_;
};

enum class ProgramKind { Test, Assign, Ode, Choice, Seq, Loop };

struct OdeEquation {
  std::string var;
  Term rhs;
  friend bool operator==(const OdeEquation&, const OdeEquation&) = default;
};

class Program {
 public:
  Program() = default;

  static Program test(Formula cond);
  static Program assign(std::string var, Term value);
  static Program ode(std::vector<OdeEquation> eqs, Formula domain);
  static Program choice(Program l, Program r);
  static Program seq(Program l, Program r);
  static Program loop(Program body);

  explicit operator bool() const { return node_ != nullptr; }
  ProgramKind kind() const;
  const Formula& condition() const;  // Test
  const std::string& var() const;    // Assign
  const Term& value() const;         // Assign
  const std::vector<OdeEquation>& equations() const;
  const Formula& domain() const;     // Ode
  const Program& lhs() const;        // Choice, Seq, Loop body
  const Program& rhs() const;
  const ProgramNode* node() const { return node_.get(); }

  friend bool operator==(const Program& a, const Program& b);

 private:
  explicit Program(std::shared_ptr<const ProgramNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ProgramNode> node_;
};

struct TermNode {
  TermKind kind = TermKind::Lit;
  std::string name;
  Rational value;
  Term lhs, rhs;
  unsigned exponent = 0;
};

struct FormulaNode {
  FormulaKind kind = FormulaKind::True;
  CmpOp op = CmpOp::Eq;
  Term l, r;
  Formula a, b;
  Program prog;
};

struct ProgramNode {
  ProgramKind kind = ProgramKind::Test;
  Formula cond;
  std::string var;
  Term value;
  std::vector<OdeEquation> eqs;
  Program a, b;
};

using Substitution = std::map<std::string, Term>;

void collect_vars(const Term& t, std::set<std::string>& out);
void collect_vars(const Formula& f, std::set<std::string>& out);
void collect_vars(const Program& p, std::set<std::string>& out);
std::set<std::string> free_vars(const Term& t);
std::set<std::string> free_vars(const Formula& f);
// Variables written by assignments or ODE equations.
std::set<std::string> bound_vars(const Program& p);
std::set<std::string> ode_vars(const Program& ode);

bool contains_min_max(const Term& t);
bool contains_min_max(const Formula& f);
bool is_first_order(const Formula& f);
bool is_discrete(const Program& p);

// Simultaneous substitution. Formulas under modalities are substituted only
// when no bound variable of the program is touched; otherwise this throws.
Term substitute(const Term& t, const Substitution& s);
Formula substitute(const Formula& f, const Substitution& s);
Program substitute(const Program& p, const Substitution& s);

std::vector<Formula> conjuncts(const Formula& f);
Formula conjunction(const std::vector<Formula>& fs);

}  // namespace dlcert
