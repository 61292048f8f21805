#include "dlcert/printer.hpp"

#include <cctype>
#include <ostream>

namespace dlcert {

namespace {

// Binding strength, loosest first.
enum TermLevel { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

int level(const Term& t) {
  switch (t.kind()) {
    case TermKind::Add:
    case TermKind::Sub:
      return kSum;
    case TermKind::Mul:
    case TermKind::Div:
      return kProduct;
    case TermKind::Neg:
      return kUnary;
    case TermKind::Pow:
      return kPower;
    case TermKind::Lit:
      return t.value() < 0 ? kUnary : kAtom;
    default:
      return kAtom;
  }
}

std::string print(const Term& t, int min_level);

std::string wrap(const Term& t, int min_level) {
  std::string s = print(t, min_level);
  return level(t) < min_level ? "(" + s + ")" : s;
}

std::string print(const Term& t, int) {
  switch (t.kind()) {
    case TermKind::Var:
      return t.name();
    case TermKind::Lit:
      return rational_to_string(t.value());
    case TermKind::Add:
      return wrap(t.lhs(), kSum) + " + " + wrap(t.rhs(), kProduct);
    case TermKind::Sub:
      return wrap(t.lhs(), kSum) + " - " + wrap(t.rhs(), kProduct);
    case TermKind::Mul:
      return wrap(t.lhs(), kProduct) + "*" + wrap(t.rhs(), kUnary);
    case TermKind::Div: {
      std::string l = wrap(t.lhs(), kProduct);
      std::string r = wrap(t.rhs(), kUnary);
      // "1/2" would lex as a single rational literal.
      bool glue = !l.empty() && !r.empty() && std::isdigit(static_cast<unsigned char>(l.back())) &&
                  std::isdigit(static_cast<unsigned char>(r.front()));
      return l + (glue ? " / " : "/") + r;
    }
    case TermKind::Neg:
      return "-" + wrap(t.lhs(), kUnary);
    case TermKind::Pow: {
      std::string base = wrap(t.lhs(), kAtom);
      if (t.lhs().kind() == TermKind::Lit && t.lhs().value() >= 0 &&
          t.lhs().value().get_den() != 1)
        base = "(" + base + ")";
      return base + "^" + std::to_string(t.exponent());
    }
    case TermKind::Min:
      return "min(" + print(t.lhs(), kSum) + ", " + print(t.rhs(), kSum) + ")";
    case TermKind::Max:
      return "max(" + print(t.lhs(), kSum) + ", " + print(t.rhs(), kSum) + ")";
  }
  return "?";
}

enum FormulaLevel { kImplies = 1, kOr = 2, kAnd = 3, kPrefix = 4, kFAtom = 5 };

int level(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Implies:
      return kImplies;
    case FormulaKind::Or:
      return kOr;
    case FormulaKind::And:
      return kAnd;
    case FormulaKind::Not:
    case FormulaKind::Box:
    case FormulaKind::Diamond:
      return kPrefix;
    default:
      return kFAtom;
  }
}

std::string print(const Formula& f);

std::string wrap(const Formula& f, int min_level) {
  std::string s = print(f);
  return level(f) < min_level ? "(" + s + ")" : s;
}

std::string print_program(const Program& p);

std::string print(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::True:
      return "true";
    case FormulaKind::False:
      return "false";
    case FormulaKind::Cmp:
      return print(f.left_term(), kSum) + " " + cmp_symbol(f.op()) + " " +
             print(f.right_term(), kSum);
    case FormulaKind::Not:
      return "!" + wrap(f.lhs(), kPrefix);
    case FormulaKind::And:
      return wrap(f.lhs(), kAnd) + " & " + wrap(f.rhs(), kPrefix);
    case FormulaKind::Or:
      return wrap(f.lhs(), kOr) + " | " + wrap(f.rhs(), kAnd);
    case FormulaKind::Implies:
      return wrap(f.lhs(), kOr) + " -> " + wrap(f.rhs(), kImplies);
    case FormulaKind::Box:
      return "[" + print_program(f.program()) + "] " + wrap(f.lhs(), kPrefix);
    case FormulaKind::Diamond:
      return "<" + print_program(f.program()) + "> " + wrap(f.lhs(), kPrefix);
  }
  return "?";
}

std::string print_program(const Program& p) {
  switch (p.kind()) {
    case ProgramKind::Test:
      return "?" + print(p.condition()) + ";";
    case ProgramKind::Assign:
      return p.var() + " := " + print(p.value(), kSum) + ";";
    case ProgramKind::Ode: {
      std::string s = "{";
      bool first = true;
      for (const auto& eq : p.equations()) {
        if (!first) s += ", ";
        first = false;
        s += eq.var + "' = " + print(eq.rhs, kSum);
      }
      if (p.domain().kind() != FormulaKind::True) s += " & " + print(p.domain());
      return s + "}";
    }
    case ProgramKind::Choice:
      return "{" + print_program(p.lhs()) + " ++ " + print_program(p.rhs()) + "}";
    case ProgramKind::Seq: {
      std::string r = print_program(p.rhs());
      if (p.rhs().kind() == ProgramKind::Seq) r = "{" + r + "}";
      return print_program(p.lhs()) + " " + r;
    }
    case ProgramKind::Loop: {
      const Program& body = p.lhs();
      if (body.kind() == ProgramKind::Ode || body.kind() == ProgramKind::Choice)
        return print_program(body) + "*";
      return "{" + print_program(body) + "}*";
    }
  }
  return "?";
}

}  // namespace

std::string to_string(const Term& t) { return print(t, kSum); }
std::string to_string(const Formula& f) { return print(f); }
std::string to_string(const Program& p) { return print_program(p); }

std::ostream& operator<<(std::ostream& os, const Term& t) { return os << to_string(t); }
std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << to_string(f); }
std::ostream& operator<<(std::ostream& os, const Program& p) { return os << to_string(p); }

}  // namespace dlcert
