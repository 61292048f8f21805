#include "dlcert/ast.hpp"

#include "dlcert/errors.hpp"

namespace dlcert {

// ---- Term ----

Term Term::var(std::string name) {
  TermNode n;
  n.kind = TermKind::Var;
  n.name = std::move(name);
  return Term(std::make_shared<const TermNode>(std::move(n)));
}

Term Term::lit(Rational value) {
  TermNode n;
  n.kind = TermKind::Lit;
  n.value = std::move(value);
  return Term(std::make_shared<const TermNode>(std::move(n)));
}

#define DLCERT_BINARY(fn, K)                                      \
  Term Term::fn(Term l, Term r) {                                 \
    TermNode n;                                                   \
    n.kind = TermKind::K;                                         \
    n.lhs = std::move(l);                                         \
    n.rhs = std::move(r);                                         \
    return Term(std::make_shared<const TermNode>(std::move(n)));  \
  }
DLCERT_BINARY(add, Add)
DLCERT_BINARY(sub, Sub)
DLCERT_BINARY(mul, Mul)
DLCERT_BINARY(div, Div)
DLCERT_BINARY(min, Min)
DLCERT_BINARY(max, Max)
#undef DLCERT_BINARY

Term Term::neg(Term t) {
  TermNode n;
  n.kind = TermKind::Neg;
  n.lhs = std::move(t);
  return Term(std::make_shared<const TermNode>(std::move(n)));
}

Term Term::pow(Term base, unsigned exponent) {
  TermNode n;
  n.kind = TermKind::Pow;
  n.lhs = std::move(base);
  n.exponent = exponent;
  return Term(std::make_shared<const TermNode>(std::move(n)));
}

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const Rational& Term::value() const { return node_->value; }
const Term& Term::lhs() const { return node_->lhs; }
const Term& Term::rhs() const { return node_->rhs; }
unsigned Term::exponent() const { return node_->exponent; }

bool Term::is_binary() const {
  switch (kind()) {
    case TermKind::Add:
    case TermKind::Sub:
    case TermKind::Mul:
    case TermKind::Div:
    case TermKind::Min:
    case TermKind::Max:
      return true;
    default:
      return false;
  }
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Var:
      return a.name() == b.name();
    case TermKind::Lit:
      return a.value() == b.value();
    case TermKind::Neg:
      return a.lhs() == b.lhs();
    case TermKind::Pow:
      return a.exponent() == b.exponent() && a.lhs() == b.lhs();
    default:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

Term operator+(const Term& a, const Term& b) { return Term::add(a, b); }
Term operator-(const Term& a, const Term& b) { return Term::sub(a, b); }
Term operator-(const Term& a) { return Term::neg(a); }
Term operator*(const Term& a, const Term& b) { return Term::mul(a, b); }
Term operator/(const Term& a, const Term& b) { return Term::div(a, b); }

// ---- comparison operators ----

const char* cmp_symbol(CmpOp op) {
  switch (op) {
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Le: return "<=";
    case CmpOp::Lt: return "<";
  }
  return "?";
}

CmpOp negate(CmpOp op) {
  switch (op) {
    case CmpOp::Ge: return CmpOp::Lt;
    case CmpOp::Gt: return CmpOp::Le;
    case CmpOp::Eq: return CmpOp::Ne;
    case CmpOp::Ne: return CmpOp::Eq;
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Lt: return CmpOp::Ge;
  }
  return op;
}

CmpOp flip(CmpOp op) {
  switch (op) {
    case CmpOp::Ge: return CmpOp::Le;
    case CmpOp::Gt: return CmpOp::Lt;
    case CmpOp::Le: return CmpOp::Ge;
    case CmpOp::Lt: return CmpOp::Gt;
    default: return op;
  }
}

// ---- Formula ----

Formula Formula::cmp(Term l, CmpOp op, Term r) {
  FormulaNode n;
  n.kind = FormulaKind::Cmp;
  n.op = op;
  n.l = std::move(l);
  n.r = std::move(r);
  return Formula(std::make_shared<const FormulaNode>(std::move(n)));
}

Formula Formula::truth() {
  static const Formula t(std::make_shared<const FormulaNode>(FormulaNode{}));
  return t;
}

Formula Formula::falsity() {
  FormulaNode n;
  n.kind = FormulaKind::False;
  static const Formula f(std::make_shared<const FormulaNode>(std::move(n)));
  return f;
}

Formula Formula::negation(Formula f) {
  FormulaNode n;
  n.kind = FormulaKind::Not;
  n.a = std::move(f);
  return Formula(std::make_shared<const FormulaNode>(std::move(n)));
}

#define DLCERT_FBINARY(fn, K)                                        \
  Formula Formula::fn(Formula l, Formula r) {                        \
    FormulaNode n;                                                   \
    n.kind = FormulaKind::K;                                         \
    n.a = std::move(l);                                              \
    n.b = std::move(r);                                              \
    return Formula(std::make_shared<const FormulaNode>(std::move(n))); \
  }
DLCERT_FBINARY(conj, And)
DLCERT_FBINARY(disj, Or)
DLCERT_FBINARY(implies, Implies)
#undef DLCERT_FBINARY

Formula Formula::box(Program p, Formula f) {
  FormulaNode n;
  n.kind = FormulaKind::Box;
  n.prog = std::move(p);
  n.a = std::move(f);
  return Formula(std::make_shared<const FormulaNode>(std::move(n)));
}

Formula Formula::diamond(Program p, Formula f) {
  FormulaNode n;
  n.kind = FormulaKind::Diamond;
  n.prog = std::move(p);
  n.a = std::move(f);
  return Formula(std::make_shared<const FormulaNode>(std::move(n)));
}

FormulaKind Formula::kind() const { return node_->kind; }
CmpOp Formula::op() const { return node_->op; }
const Term& Formula::left_term() const { return node_->l; }
const Term& Formula::right_term() const { return node_->r; }
const Formula& Formula::lhs() const { return node_->a; }
const Formula& Formula::rhs() const { return node_->b; }
const Program& Formula::program() const { return node_->prog; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return true;
    case FormulaKind::Cmp:
      return a.op() == b.op() && a.left_term() == b.left_term() &&
             a.right_term() == b.right_term();
    case FormulaKind::Not:
      return a.lhs() == b.lhs();
    case FormulaKind::Box:
    case FormulaKind::Diamond:
      return a.program() == b.program() && a.lhs() == b.lhs();
    default:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

// ---- Program ----

Program Program::test(Formula cond) {
  ProgramNode n;
  n.kind = ProgramKind::Test;
  n.cond = std::move(cond);
  return Program(std::make_shared<const ProgramNode>(std::move(n)));
}

Program Program::assign(std::string var, Term value) {
  ProgramNode n;
  n.kind = ProgramKind::Assign;
  n.var = std::move(var);
  n.value = std::move(value);
  return Program(std::make_shared<const ProgramNode>(std::move(n)));
}

Program Program::ode(std::vector<OdeEquation> eqs, Formula domain) {
  ProgramNode n;
  n.kind = ProgramKind::Ode;
  n.eqs = std::move(eqs);
  n.cond = domain ? std::move(domain) : Formula::truth();
  return Program(std::make_shared<const ProgramNode>(std::move(n)));
}

Program Program::choice(Program l, Program r) {
  ProgramNode n;
  n.kind = ProgramKind::Choice;
  n.a = std::move(l);
  n.b = std::move(r);
  return Program(std::make_shared<const ProgramNode>(std::move(n)));
}

Program Program::seq(Program l, Program r) {
  ProgramNode n;
  n.kind = ProgramKind::Seq;
  n.a = std::move(l);
  n.b = std::move(r);
  return Program(std::make_shared<const ProgramNode>(std::move(n)));
}

Program Program::loop(Program body) {
  ProgramNode n;
  n.kind = ProgramKind::Loop;
  n.a = std::move(body);
  return Program(std::make_shared<const ProgramNode>(std::move(n)));
}

ProgramKind Program::kind() const { return node_->kind; }
const Formula& Program::condition() const { return node_->cond; }
const std::string& Program::var() const { return node_->var; }
const Term& Program::value() const { return node_->value; }
const std::vector<OdeEquation>& Program::equations() const { return node_->eqs; }
const Formula& Program::domain() const { return node_->cond; }
const Program& Program::lhs() const { return node_->a; }
const Program& Program::rhs() const { return node_->b; }

bool operator==(const Program& a, const Program& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case ProgramKind::Test:
      return a.condition() == b.condition();
    case ProgramKind::Assign:
      return a.var() == b.var() && a.value() == b.value();
    case ProgramKind::Ode:
      return a.equations() == b.equations() && a.domain() == b.domain();
    case ProgramKind::Loop:
      return a.lhs() == b.lhs();
    default:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

// ---- traversal ----

void collect_vars(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case TermKind::Var:
      out.insert(t.name());
      return;
    case TermKind::Lit:
      return;
    case TermKind::Neg:
    case TermKind::Pow:
      collect_vars(t.lhs(), out);
      return;
    default:
      collect_vars(t.lhs(), out);
      collect_vars(t.rhs(), out);
  }
}

void collect_vars(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return;
    case FormulaKind::Cmp:
      collect_vars(f.left_term(), out);
      collect_vars(f.right_term(), out);
      return;
    case FormulaKind::Not:
      collect_vars(f.lhs(), out);
      return;
    case FormulaKind::Box:
    case FormulaKind::Diamond:
      collect_vars(f.program(), out);
      collect_vars(f.lhs(), out);
      return;
    default:
      collect_vars(f.lhs(), out);
      collect_vars(f.rhs(), out);
  }
}

void collect_vars(const Program& p, std::set<std::string>& out) {
  switch (p.kind()) {
    case ProgramKind::Test:
      collect_vars(p.condition(), out);
      return;
    case ProgramKind::Assign:
      out.insert(p.var());
      collect_vars(p.value(), out);
      return;
    case ProgramKind::Ode:
      for (const auto& eq : p.equations()) {
        out.insert(eq.var);
        collect_vars(eq.rhs, out);
      }
      collect_vars(p.domain(), out);
      return;
    case ProgramKind::Loop:
      collect_vars(p.lhs(), out);
      return;
    default:
      collect_vars(p.lhs(), out);
      collect_vars(p.rhs(), out);
  }
}

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  collect_vars(t, out);
  return out;
}

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  collect_vars(f, out);
  return out;
}

namespace {

void collect_bound(const Program& p, std::set<std::string>& out) {
  switch (p.kind()) {
    case ProgramKind::Test:
      return;
    case ProgramKind::Assign:
      out.insert(p.var());
      return;
    case ProgramKind::Ode:
      for (const auto& eq : p.equations()) out.insert(eq.var);
      return;
    case ProgramKind::Loop:
      collect_bound(p.lhs(), out);
      return;
    default:
      collect_bound(p.lhs(), out);
      collect_bound(p.rhs(), out);
  }
}

}  // namespace

std::set<std::string> bound_vars(const Program& p) {
  std::set<std::string> out;
  collect_bound(p, out);
  return out;
}

std::set<std::string> ode_vars(const Program& ode) {
  std::set<std::string> out;
  for (const auto& eq : ode.equations()) out.insert(eq.var);
  return out;
}

bool contains_min_max(const Term& t) {
  switch (t.kind()) {
    case TermKind::Min:
    case TermKind::Max:
      return true;
    case TermKind::Var:
    case TermKind::Lit:
      return false;
    case TermKind::Neg:
    case TermKind::Pow:
      return contains_min_max(t.lhs());
    default:
      return contains_min_max(t.lhs()) || contains_min_max(t.rhs());
  }
}

bool contains_min_max(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Cmp:
      return contains_min_max(f.left_term()) || contains_min_max(f.right_term());
    case FormulaKind::True:
    case FormulaKind::False:
    case FormulaKind::Box:
    case FormulaKind::Diamond:
      return false;
    case FormulaKind::Not:
      return contains_min_max(f.lhs());
    default:
      return contains_min_max(f.lhs()) || contains_min_max(f.rhs());
  }
}

bool is_first_order(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Box:
    case FormulaKind::Diamond:
      return false;
    case FormulaKind::Cmp:
    case FormulaKind::True:
    case FormulaKind::False:
      return true;
    case FormulaKind::Not:
      return is_first_order(f.lhs());
    default:
      return is_first_order(f.lhs()) && is_first_order(f.rhs());
  }
}

bool is_discrete(const Program& p) {
  switch (p.kind()) {
    case ProgramKind::Test:
    case ProgramKind::Assign:
      return true;
    case ProgramKind::Ode:
    case ProgramKind::Loop:
      return false;
    default:
      return is_discrete(p.lhs()) && is_discrete(p.rhs());
  }
}

// ---- substitution ----

Term substitute(const Term& t, const Substitution& s) {
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = s.find(t.name());
      return it == s.end() ? t : it->second;
    }
    case TermKind::Lit:
      return t;
    case TermKind::Neg: {
      Term c = substitute(t.lhs(), s);
      return c.node() == t.lhs().node() ? t : Term::neg(c);
    }
    case TermKind::Pow: {
      Term c = substitute(t.lhs(), s);
      return c.node() == t.lhs().node() ? t : Term::pow(c, t.exponent());
    }
    default: {
      Term l = substitute(t.lhs(), s);
      Term r = substitute(t.rhs(), s);
      if (l.node() == t.lhs().node() && r.node() == t.rhs().node()) return t;
      switch (t.kind()) {
        case TermKind::Add: return Term::add(l, r);
        case TermKind::Sub: return Term::sub(l, r);
        case TermKind::Mul: return Term::mul(l, r);
        case TermKind::Div: return Term::div(l, r);
        case TermKind::Min: return Term::min(l, r);
        default: return Term::max(l, r);
      }
    }
  }
}

namespace {

void check_capture(const Program& p, const Substitution& s) {
  std::set<std::string> bound = bound_vars(p);
  for (const auto& [name, value] : s) {
    if (bound.count(name))
      throw UnsupportedConstruct("substitution for '" + name + "' under a program binding it");
    for (const auto& v : free_vars(value))
      if (bound.count(v))
        throw UnsupportedConstruct("substitution would capture '" + v + "' under a modality");
  }
}

}  // namespace

Formula substitute(const Formula& f, const Substitution& s) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return f;
    case FormulaKind::Cmp:
      return Formula::cmp(substitute(f.left_term(), s), f.op(), substitute(f.right_term(), s));
    case FormulaKind::Not:
      return Formula::negation(substitute(f.lhs(), s));
    case FormulaKind::And:
      return Formula::conj(substitute(f.lhs(), s), substitute(f.rhs(), s));
    case FormulaKind::Or:
      return Formula::disj(substitute(f.lhs(), s), substitute(f.rhs(), s));
    case FormulaKind::Implies:
      return Formula::implies(substitute(f.lhs(), s), substitute(f.rhs(), s));
    case FormulaKind::Box:
      check_capture(f.program(), s);
      return Formula::box(substitute(f.program(), s), substitute(f.lhs(), s));
    case FormulaKind::Diamond:
      check_capture(f.program(), s);
      return Formula::diamond(substitute(f.program(), s), substitute(f.lhs(), s));
  }
  return f;
}

Program substitute(const Program& p, const Substitution& s) {
  switch (p.kind()) {
    case ProgramKind::Test:
      return Program::test(substitute(p.condition(), s));
    case ProgramKind::Assign:
      return Program::assign(p.var(), substitute(p.value(), s));
    case ProgramKind::Ode: {
      std::vector<OdeEquation> eqs;
      for (const auto& eq : p.equations()) eqs.push_back({eq.var, substitute(eq.rhs, s)});
      return Program::ode(std::move(eqs), substitute(p.domain(), s));
    }
    case ProgramKind::Choice:
      return Program::choice(substitute(p.lhs(), s), substitute(p.rhs(), s));
    case ProgramKind::Seq:
      return Program::seq(substitute(p.lhs(), s), substitute(p.rhs(), s));
    case ProgramKind::Loop:
      return Program::loop(substitute(p.lhs(), s));
  }
  return p;
}

std::vector<Formula> conjuncts(const Formula& f) {
  std::vector<Formula> out;
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula g = stack.back();
    stack.pop_back();
    if (g.kind() == FormulaKind::And) {
      stack.push_back(g.rhs());
      stack.push_back(g.lhs());
    } else if (g.kind() != FormulaKind::True) {
      out.push_back(g);
    }
  }
  return out;
}

Formula conjunction(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::truth();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = Formula::conj(acc, fs[i]);
  return acc;
}

}  // namespace dlcert
