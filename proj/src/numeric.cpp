#include "numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dlcert/errors.hpp"

namespace dlcert::detail {

namespace {
constexpr int kMaxStack = 256;
}

Slots::Slots(const std::vector<std::string>& names) {
  for (const auto& n : names) add(n);
}

int Slots::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

int Slots::at(const std::string& name) const {
  int i = find(name);
  if (i < 0) throw MissingVariable(name);
  return i;
}

int Slots::add(const std::string& name) {
  int i = find(name);
  if (i >= 0) return i;
  i = static_cast<int>(names_.size());
  names_.push_back(name);
  index_[name] = i;
  return i;
}

Code::Code(const Term& t, const Slots& slots) { emit(t, slots, 0); }

void Code::emit(const Term& t, const Slots& slots, int depth) {
  depth_ = std::max(depth_, depth + 1);
  if (depth_ > kMaxStack) throw UnsupportedConstruct("term too deeply nested for evaluation");
  switch (t.kind()) {
    case TermKind::Var:
      ops_.push_back({Op::Load, slots.at(t.name()), 0});
      return;
    case TermKind::Lit:
      ops_.push_back({Op::Push, 0, to_double(t.value())});
      return;
    case TermKind::Neg:
      emit(t.lhs(), slots, depth);
      ops_.push_back({Op::Neg, 0, 0});
      return;
    case TermKind::Pow:
      emit(t.lhs(), slots, depth);
      ops_.push_back({Op::Pow, static_cast<int>(t.exponent()), 0});
      return;
    default:
      break;
  }
  emit(t.lhs(), slots, depth);
  emit(t.rhs(), slots, depth + 1);
  Op op = Op::Add;
  switch (t.kind()) {
    case TermKind::Add: op = Op::Add; break;
    case TermKind::Sub: op = Op::Sub; break;
    case TermKind::Mul: op = Op::Mul; break;
    case TermKind::Div: op = Op::Div; break;
    case TermKind::Min: op = Op::Min; break;
    case TermKind::Max: op = Op::Max; break;
    default: break;
  }
  ops_.push_back({op, 0, 0});
}

double Code::eval(const double* x) const {
  double scale = 0;
  return eval(x, scale);
}

double Code::eval(const double* x, double& scale) const {
  double st[kMaxStack];
  int sp = 0;
  for (const auto& in : ops_) {
    switch (in.op) {
      case Op::Push: st[sp++] = in.value; break;
      case Op::Load: st[sp++] = x[in.slot]; break;
      case Op::Neg: st[sp - 1] = -st[sp - 1]; break;
      case Op::Pow: {
        double b = st[sp - 1], r = 1;
        for (int k = 0; k < in.slot; ++k) r *= b;
        st[sp - 1] = r;
        break;
      }
      default: {
        double b = st[--sp];
        double& a = st[sp - 1];
        switch (in.op) {
          case Op::Add: a += b; break;
          case Op::Sub: a -= b; break;
          case Op::Mul: a *= b; break;
          case Op::Div:
            if (b == 0) throw NumericBlowup("division by zero");
            a /= b;
            break;
          case Op::Min: a = std::min(a, b); break;
          case Op::Max: a = std::max(a, b); break;
          default: break;
        }
      }
    }
    scale = std::max(scale, std::fabs(st[sp - 1]));
  }
  return st[0];
}

NumericFormula::NumericFormula(const Formula& f, const Slots& slots) { build(f, false, slots); }

int NumericFormula::build(const Formula& f, bool negated, const Slots& slots) {
  int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  auto fill_junction = [&](bool conj, const Formula& a, const Formula& b, bool neg_a) {
    nodes_[id].kind = conj != negated ? Node::And : Node::Or;
    int l = build(a, neg_a != negated, slots);
    int r = build(b, negated, slots);
    nodes_[id].kids = {l, r};
  };
  switch (f.kind()) {
    case FormulaKind::True:
      nodes_[id].kind = negated ? Node::False : Node::True;
      break;
    case FormulaKind::False:
      nodes_[id].kind = negated ? Node::True : Node::False;
      break;
    case FormulaKind::Cmp: {
      Node n;
      n.kind = Node::Cmp;
      n.op = negated ? negate(f.op()) : f.op();
      n.l = Code(f.left_term(), slots);
      n.r = Code(f.right_term(), slots);
      nodes_[id] = std::move(n);
      break;
    }
    case FormulaKind::Not: {
      nodes_.pop_back();
      return build(f.lhs(), !negated, slots);
    }
    case FormulaKind::And:
      fill_junction(true, f.lhs(), f.rhs(), false);
      break;
    case FormulaKind::Or:
      fill_junction(false, f.lhs(), f.rhs(), false);
      break;
    case FormulaKind::Implies:
      fill_junction(false, f.lhs(), f.rhs(), true);
      break;
    case FormulaKind::Box:
    case FormulaKind::Diamond:
      throw UnsupportedConstruct("modal formula cannot be evaluated on a state");
  }
  return id;
}

bool NumericFormula::holds(const double* x) const { return holds_at(0, x); }

bool NumericFormula::holds_at(int n, const double* x) const {
  const Node& nd = nodes_[n];
  switch (nd.kind) {
    case Node::True: return true;
    case Node::False: return false;
    case Node::And: return holds_at(nd.kids[0], x) && holds_at(nd.kids[1], x);
    case Node::Or: return holds_at(nd.kids[0], x) || holds_at(nd.kids[1], x);
    case Node::Cmp: {
      double l = nd.l.eval(x), r = nd.r.eval(x);
      switch (nd.op) {
        case CmpOp::Ge: return l >= r;
        case CmpOp::Gt: return l > r;
        case CmpOp::Eq: return l == r;
        case CmpOp::Ne: return l != r;
        case CmpOp::Le: return l <= r;
        case CmpOp::Lt: return l < r;
      }
    }
  }
  return false;
}

double NumericFormula::residual(const double* x, double rel) const { return residual_at(0, x, rel); }

double NumericFormula::residual_at(int n, const double* x, double rel) const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const Node& nd = nodes_[n];
  switch (nd.kind) {
    case Node::True: return -inf;
    case Node::False: return inf;
    case Node::And:
      return std::max(residual_at(nd.kids[0], x, rel), residual_at(nd.kids[1], x, rel));
    case Node::Or:
      return std::min(residual_at(nd.kids[0], x, rel), residual_at(nd.kids[1], x, rel));
    case Node::Cmp: {
      double scale = 0;
      double l = nd.l.eval(x, scale), r = nd.r.eval(x, scale);
      double slack = rel * scale;
      switch (nd.op) {
        case CmpOp::Ge:
        case CmpOp::Gt: return r - l - slack;
        case CmpOp::Le:
        case CmpOp::Lt: return l - r - slack;
        case CmpOp::Eq: return std::fabs(l - r) - slack;
        case CmpOp::Ne: return -inf;
      }
    }
  }
  return inf;
}

}  // namespace dlcert::detail
