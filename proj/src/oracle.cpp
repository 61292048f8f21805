#include "dlcert/oracle.hpp"

#include <algorithm>
#include <queue>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "dlcert/errors.hpp"
#include "dlcert/printer.hpp"
#include "dlcert/seed.hpp"

namespace dlcert {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Proved: return "proved";
    case Verdict::Refuted: return "refuted";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

// ---- exact evaluation ----

std::optional<Rational> eval_exact(const Term& t, const Point& at) {
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = at.find(t.name());
      if (it == at.end()) throw MissingVariable(t.name());
      return it->second;
    }
    case TermKind::Lit:
      return t.value();
    case TermKind::Neg: {
      auto a = eval_exact(t.lhs(), at);
      if (!a) return std::nullopt;
      return Rational(-*a);
    }
    case TermKind::Pow: {
      auto a = eval_exact(t.lhs(), at);
      if (!a) return std::nullopt;
      Rational r;
      mpz_pow_ui(r.get_num_mpz_t(), a->get_num_mpz_t(), t.exponent());
      mpz_pow_ui(r.get_den_mpz_t(), a->get_den_mpz_t(), t.exponent());
      return r;
    }
    default: {
      auto a = eval_exact(t.lhs(), at);
      if (!a) return std::nullopt;
      auto b = eval_exact(t.rhs(), at);
      if (!b) return std::nullopt;
      switch (t.kind()) {
        case TermKind::Add: return Rational(*a + *b);
        case TermKind::Sub: return Rational(*a - *b);
        case TermKind::Mul: return Rational(*a * *b);
        case TermKind::Div:
          if (*b == 0) return std::nullopt;
          return Rational(*a / *b);
        case TermKind::Min: return *a < *b ? *a : *b;
        default: return *a > *b ? *a : *b;
      }
    }
  }
}

std::optional<bool> holds_exact(const Formula& f, const Point& at) {
  switch (f.kind()) {
    case FormulaKind::True: return true;
    case FormulaKind::False: return false;
    case FormulaKind::Cmp: {
      auto l = eval_exact(f.left_term(), at);
      auto r = eval_exact(f.right_term(), at);
      if (!l || !r) return std::nullopt;
      switch (f.op()) {
        case CmpOp::Ge: return *l >= *r;
        case CmpOp::Gt: return *l > *r;
        case CmpOp::Eq: return *l == *r;
        case CmpOp::Ne: return *l != *r;
        case CmpOp::Le: return *l <= *r;
        case CmpOp::Lt: return *l < *r;
      }
      return std::nullopt;
    }
    case FormulaKind::Not: {
      auto a = holds_exact(f.lhs(), at);
      if (!a) return std::nullopt;
      return !*a;
    }
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies: {
      auto a = holds_exact(f.lhs(), at);
      auto b = holds_exact(f.rhs(), at);
      if (!a || !b) return std::nullopt;
      if (f.kind() == FormulaKind::And) return *a && *b;
      if (f.kind() == FormulaKind::Or) return *a || *b;
      return !*a || *b;
    }
    default:
      throw UnsupportedConstruct("modal formula in an arithmetic obligation: " + to_string(f));
  }
}

// ---- sign calculus ----

namespace {

unsigned mul_sign(unsigned a, unsigned b) {
  unsigned out = 0;
  for (unsigned x : {kNeg, kZero, kPos}) {
    if (!(a & x)) continue;
    for (unsigned y : {kNeg, kZero, kPos}) {
      if (!(b & y)) continue;
      if (x == kZero || y == kZero)
        out |= kZero;
      else
        out |= (x == y) ? kPos : kNeg;
    }
  }
  return out;
}

unsigned pow_sign(unsigned a, unsigned e) {
  if (e == 0) return kPos;
  if (e % 2 == 1) return a;
  unsigned out = 0;
  if (a & kZero) out |= kZero;
  if (a & (kNeg | kPos)) out |= kPos;
  return out;
}

unsigned rational_sign(const Rational& q) {
  int s = sgn(q);
  return s > 0 ? kPos : (s < 0 ? kNeg : kZero);
}

unsigned flip_sign(unsigned s) {
  unsigned out = s & kZero;
  if (s & kNeg) out |= kPos;
  if (s & kPos) out |= kNeg;
  return out;
}

unsigned var_sign(const SignMap& signs, const std::string& v) {
  auto it = signs.find(v);
  return it == signs.end() ? kAnySign : it->second;
}

unsigned monomial_sign(const Monomial& m, const Rational& c, const SignMap& signs) {
  unsigned s = rational_sign(c);
  for (const auto& [v, e] : m.factors()) s = mul_sign(s, pow_sign(var_sign(signs, v), e));
  return s;
}

}  // namespace

bool proves_nonnegative(const Polynomial& p, const SignMap& signs, bool strict) {
  bool any_strict = false;
  for (const auto& [m, c] : p.terms()) {
    unsigned s = monomial_sign(m, c, signs);
    if (s & kNeg) return false;
    if (s == kPos) any_strict = true;
  }
  return !strict || any_strict;
}

namespace {

enum class Rel { GE, GT, EQ, NE };

struct Atom {
  Polynomial p;
  Rel rel;
};

bool strictly_positive(const Polynomial& p, const SignMap& s) { return proves_nonnegative(p, s, true); }
bool strictly_negative(const Polynomial& p, const SignMap& s) { return proves_nonnegative(-p, s, true); }

// p rel 0 with p = num/den; clears den when its sign is provable.
std::optional<Atom> normalize(const Formula& cmp, const SignMap& signs) {
  Fraction f;
  try {
    f = to_fraction(Term::sub(cmp.left_term(), cmp.right_term()),
                    [](const std::string&) { return false; });
  } catch (const NotPolynomial&) {
    return std::nullopt;
  } catch (const Error&) {
    return std::nullopt;
  }
  Polynomial p = f.num;
  bool negated = false;
  if (!(f.den == Polynomial(Rational(1)))) {
    if (strictly_positive(f.den, signs)) {
    } else if (strictly_negative(f.den, signs)) {
      negated = true;
    } else {
      return std::nullopt;
    }
  }
  // num/den op 0 becomes num op' 0, with op' flipped for a negative den.
  CmpOp op = negated ? flip(cmp.op()) : cmp.op();
  switch (op) {
    case CmpOp::Ge: return Atom{p, Rel::GE};
    case CmpOp::Gt: return Atom{p, Rel::GT};
    case CmpOp::Le: return Atom{-p, Rel::GE};
    case CmpOp::Lt: return Atom{-p, Rel::GT};
    case CmpOp::Eq: return Atom{p, Rel::EQ};
    case CmpOp::Ne: return Atom{p, Rel::NE};
  }
  return std::nullopt;
}

unsigned allowed_by(Rel rel) {
  switch (rel) {
    case Rel::GT: return kPos;
    case Rel::GE: return kPos | kZero;
    case Rel::EQ: return kZero;
    case Rel::NE: return kPos | kNeg;
  }
  return kAnySign;
}

// Tightens per-variable sign facts from atoms; returns false on an
// inconsistency.
bool derive_signs(const std::vector<Atom>& atoms, SignMap& signs) {
  for (int round = 0; round < 8; ++round) {
    bool changed = false;
    auto restrict = [&](const std::string& v, unsigned s) {
      unsigned old = var_sign(signs, v);
      unsigned now = old & s;
      if (now != old) {
        signs[v] = now;
        changed = true;
      }
    };
    for (const auto& a : atoms) {
      const auto& ts = a.p.terms();
      if (ts.size() == 1 && !ts.begin()->first.is_one()) {
        const auto& [m, c] = *ts.begin();
        for (const auto& [v, e] : m.factors()) {
          if (e % 2 == 0) continue;
          unsigned rest = rational_sign(c);
          for (const auto& [w, k] : m.factors())
            if (w != v) rest = mul_sign(rest, pow_sign(var_sign(signs, w), k));
          if (rest == kPos)
            restrict(v, allowed_by(a.rel));
          else if (rest == kNeg)
            restrict(v, flip_sign(allowed_by(a.rel)));
        }
      } else if (ts.size() == 2 && a.p.degree() == 1 && a.p.vars().size() == 1) {
        std::string v = *a.p.vars().begin();
        Rational coef = a.p.coefficients(v)[1].constant_value();
        Rational beta = -a.p.constant_value() / coef;
        int bs = sgn(beta);
        bool up = coef > 0;  // v rel beta, otherwise v rel' beta reversed
        switch (a.rel) {
          case Rel::GE:
            if (up && bs > 0) restrict(v, kPos);
            if (up && bs == 0) restrict(v, kPos | kZero);
            if (!up && bs < 0) restrict(v, kNeg);
            if (!up && bs == 0) restrict(v, kNeg | kZero);
            break;
          case Rel::GT:
            if (up && bs >= 0) restrict(v, kPos);
            if (!up && bs <= 0) restrict(v, kNeg);
            break;
          case Rel::EQ:
            restrict(v, rational_sign(beta));
            break;
          case Rel::NE:
            if (bs == 0) restrict(v, kPos | kNeg);
            break;
        }
      }
    }
    for (const auto& [v, s] : signs)
      if (s == 0) return false;
    if (!changed) break;
  }
  return true;
}

bool contradictory(const Atom& a, const SignMap& s) {
  switch (a.rel) {
    case Rel::GE: return strictly_negative(a.p, s);
    case Rel::GT: return proves_nonnegative(-a.p, s, false);
    case Rel::EQ: return strictly_positive(a.p, s) || strictly_negative(a.p, s);
    case Rel::NE: return a.p.is_zero();
  }
  return false;
}

struct Prepared {
  std::vector<Atom> atoms;
  SignMap signs;
  bool inconsistent = false;
};

void flatten(const Formula& f, std::vector<Formula>& cmps, bool& has_false) {
  for (const auto& c : conjuncts(f)) {
    switch (c.kind()) {
      case FormulaKind::Cmp:
        cmps.push_back(c);
        break;
      case FormulaKind::False:
        has_false = true;
        break;
      case FormulaKind::Not:
        if (c.lhs().kind() == FormulaKind::Cmp)
          cmps.push_back(Formula::cmp(c.lhs().left_term(), negate(c.lhs().op()), c.lhs().right_term()));
        else if (c.lhs().kind() == FormulaKind::True)
          has_false = true;
        break;
      default:
        break;  // disjunctions and the like are dropped (sound weakening)
    }
  }
}

Prepared prepare(const std::vector<Formula>& assumptions) {
  Prepared out;
  std::vector<Formula> cmps;
  bool has_false = false;
  for (const auto& a : assumptions) flatten(a, cmps, has_false);
  if (has_false) {
    out.inconsistent = true;
    return out;
  }
  // Two passes: polynomial atoms first supply the signs needed to clear
  // denominators of the rest.
  std::vector<bool> done(cmps.size(), false);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < cmps.size(); ++i) {
      if (done[i]) continue;
      if (auto a = normalize(cmps[i], out.signs)) {
        out.atoms.push_back(*a);
        done[i] = true;
      }
    }
    if (!derive_signs(out.atoms, out.signs)) {
      out.inconsistent = true;
      return out;
    }
  }
  for (const auto& a : out.atoms) {
    if (a.p.is_constant()) {
      Rational c = a.p.constant_value();
      bool ok = a.rel == Rel::GE ? c >= 0 : a.rel == Rel::GT ? c > 0 : a.rel == Rel::EQ ? c == 0 : c != 0;
      if (!ok) out.inconsistent = true;
    } else if (contradictory(a, out.signs)) {
      out.inconsistent = true;
    }
  }
  return out;
}

// Proves G >= 0 (or > 0) by repeatedly eliminating a variable through an
// assumption c*v + r ~ 0 with c of known strict sign, replacing the
// assumption's value by a fresh slack symbol of the matching sign. The
// substitution is applied either everywhere or only in the monomials whose
// sign is not known to be good. Nodes are expanded best-first, fewest
// doubtful monomials first.
class SlackSearch {
 public:
  SlackSearch(const std::vector<Atom>& atoms, SignMap signs, const OracleOptions& opts)
      : atoms_(atoms), signs_(std::move(signs)), opts_(opts) {}

  bool prove(const Atom& goal) {
    switch (goal.rel) {
      case Rel::GE: return run(goal.p, false);
      case Rel::GT: return run(goal.p, true);
      case Rel::EQ: return run(goal.p, false) && run(-goal.p, false);
      case Rel::NE: return run(goal.p, true) || run(-goal.p, true);
    }
    return false;
  }

 private:
  struct Node {
    Polynomial g;
    std::vector<bool> used;
    int depth = 0;
    std::size_t score = 0;
    std::size_t order = 0;
  };
  struct Worse {
    bool operator()(const Node& a, const Node& b) const {
      if (a.score != b.score) return a.score > b.score;
      if (a.g.terms().size() != b.g.terms().size()) return a.g.terms().size() > b.g.terms().size();
      return a.order > b.order;
    }
  };

  std::size_t doubtful(const Polynomial& g) const {
    std::size_t n = 0;
    for (const auto& [m, c] : g.terms())
      if (monomial_sign(m, c, signs_) & kNeg) ++n;
    return n;
  }

  std::string key(const Node& n) const {
    std::string k = n.g.to_string();
    k.push_back('|');
    for (bool u : n.used) k.push_back(u ? '1' : '0');
    return k;
  }

  bool run(const Polynomial& g0, bool strict) {
    if (proves_nonnegative(g0, signs_, strict)) return true;
    std::priority_queue<Node, std::vector<Node>, Worse> open;
    std::unordered_set<std::string> seen;
    std::size_t order = 0;
    Node root{g0, std::vector<bool>(atoms_.size(), false), 0, doubtful(g0), order++};
    seen.insert(key(root));
    open.push(std::move(root));
    std::size_t expanded = 0;
    while (!open.empty() && expanded < opts_.node_budget) {
      Node n = open.top();
      open.pop();
      ++expanded;
      if (n.depth >= opts_.max_depth) continue;
      for (auto& child : expand(n)) {
        if (proves_nonnegative(child.g, signs_, strict)) return true;
        std::string k = key(child);
        if (!seen.insert(k).second) continue;
        child.score = doubtful(child.g);
        child.order = order++;
        open.push(std::move(child));
      }
    }
    return false;
  }

  std::vector<Node> expand(const Node& n) {
    const Polynomial& g = n.g;
    std::set<std::string> bad;
    for (const auto& [m, c] : g.terms())
      if (monomial_sign(m, c, signs_) & kNeg)
        for (const auto& [v, e] : m.factors()) bad.insert(v);
    if (bad.empty()) bad = g.vars();

    std::vector<Node> out;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (n.used[i] || atoms_[i].rel == Rel::NE) continue;
      const Atom& a = atoms_[i];
      // A single monomial only restates sign facts.
      if (a.p.terms().size() == 1) continue;
      for (const auto& v : a.p.vars()) {
        if (!g.mentions(v)) continue;
        if (a.rel != Rel::EQ && !bad.count(v)) continue;
        if (a.p.degree_in(v) != 1) continue;
        auto cs = a.p.coefficients(v);
        const Polynomial& c = cs[1];
        bool neg_c = strictly_negative(c, signs_);
        if (!neg_c && !strictly_positive(c, signs_)) continue;
        std::string slack = "$" + std::to_string(slack_counter_++);
        Polynomial base = a.rel == Rel::EQ ? -cs[0] : Polynomial::var(slack) - cs[0];
        if (a.rel != Rel::EQ) signs_[slack] = a.rel == Rel::GT ? kPos : (kPos | kZero);

        // Full substitution v = base / c, scaled by c^k.
        auto gs = g.coefficients(v);
        unsigned k = static_cast<unsigned>(gs.size() - 1);
        Polynomial full;
        Polynomial bpow(Rational(1));
        for (unsigned j = 0; j <= k; ++j) {
          if (j > 0) bpow *= base;
          if (!gs[j].is_zero()) full += gs[j] * bpow * c.pow(k - j);
        }
        if (neg_c && k % 2 == 1) full = -full;
        push_child(out, n, i, std::move(full));

        // Partial: g = v*q + rest with q collecting doubtful monomials.
        if (a.rel == Rel::EQ || k != 1) continue;
        Polynomial q, rest;
        for (const auto& [m, coef] : g.terms()) {
          if (m.degree_in(v) == 1 && (monomial_sign(m, coef, signs_) & kNeg))
            q += Polynomial::monomial(m.without(v), coef);
          else
            rest += Polynomial::monomial(m, coef);
        }
        if (q.is_zero() || rest.is_zero()) continue;
        bool only_v = true;
        for (const auto& [m, coef] : rest.terms())
          if (m.degree_in(v) > 0) only_v = false;
        if (only_v) continue;  // same as the full substitution
        Polynomial part = q * base + c * rest;
        if (neg_c) part = -part;
        push_child(out, n, i, std::move(part));
      }
    }
    return out;
  }

  void push_child(std::vector<Node>& out, const Node& n, std::size_t atom, Polynomial g) {
    Node c;
    c.g = std::move(g);
    c.used = n.used;
    c.used[atom] = true;
    c.depth = n.depth + 1;
    out.push_back(std::move(c));
  }

  const std::vector<Atom>& atoms_;
  SignMap signs_;
  const OracleOptions& opts_;
  std::size_t slack_counter_ = 0;
};

bool prove_goal(const Prepared& prep, const Formula& goal, const std::vector<Formula>& assumptions,
                const OracleOptions& opts);

bool prove_case(const std::vector<Formula>& assumptions, const Formula& goal,
                const OracleOptions& opts) {
  for (const auto& a : assumptions)
    for (const auto& c : conjuncts(a))
      if (c == goal) return true;
  Prepared prep = prepare(assumptions);
  if (prep.inconsistent) return true;
  return prove_goal(prep, goal, assumptions, opts);
}

bool prove_goal(const Prepared& prep, const Formula& goal, const std::vector<Formula>& assumptions,
                const OracleOptions& opts) {
  switch (goal.kind()) {
    case FormulaKind::True:
      return true;
    case FormulaKind::False:
      return false;
    case FormulaKind::And:
      return prove_goal(prep, goal.lhs(), assumptions, opts) &&
             prove_goal(prep, goal.rhs(), assumptions, opts);
    case FormulaKind::Or:
      return prove_goal(prep, goal.lhs(), assumptions, opts) ||
             prove_goal(prep, goal.rhs(), assumptions, opts);
    case FormulaKind::Implies: {
      std::vector<Formula> more = assumptions;
      more.push_back(goal.lhs());
      return prove_case(more, goal.rhs(), opts);
    }
    case FormulaKind::Not:
      if (goal.lhs().kind() == FormulaKind::Cmp)
        return prove_goal(prep,
                          Formula::cmp(goal.lhs().left_term(), negate(goal.lhs().op()),
                                       goal.lhs().right_term()),
                          assumptions, opts);
      return false;
    case FormulaKind::Cmp: {
      for (const auto& a : assumptions)
        for (const auto& c : conjuncts(a))
          if (c == goal) return true;
      auto atom = normalize(goal, prep.signs);
      if (!atom) return false;
      if (atom->p.is_constant()) {
        Rational c = atom->p.constant_value();
        switch (atom->rel) {
          case Rel::GE: return c >= 0;
          case Rel::GT: return c > 0;
          case Rel::EQ: return c == 0;
          case Rel::NE: return c != 0;
        }
      }
      SlackSearch search(prep.atoms, prep.signs, opts);
      return search.prove(*atom);
    }
    default:
      return false;
  }
}

// ---- min/max case splitting ----

std::optional<Term> find_min_max(const Term& t) {
  switch (t.kind()) {
    case TermKind::Min:
    case TermKind::Max:
      return t;
    case TermKind::Var:
    case TermKind::Lit:
      return std::nullopt;
    case TermKind::Neg:
    case TermKind::Pow:
      return find_min_max(t.lhs());
    default:
      if (auto a = find_min_max(t.lhs())) return a;
      return find_min_max(t.rhs());
  }
}

std::optional<Term> find_min_max(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Cmp:
      if (auto a = find_min_max(f.left_term())) return a;
      return find_min_max(f.right_term());
    case FormulaKind::Not:
      return find_min_max(f.lhs());
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      if (auto a = find_min_max(f.lhs())) return a;
      return find_min_max(f.rhs());
    default:
      return std::nullopt;
  }
}

Term replace(const Term& t, const Term& target, const Term& with) {
  if (t == target) return with;
  switch (t.kind()) {
    case TermKind::Var:
    case TermKind::Lit:
      return t;
    case TermKind::Neg:
      return Term::neg(replace(t.lhs(), target, with));
    case TermKind::Pow:
      return Term::pow(replace(t.lhs(), target, with), t.exponent());
    default: {
      Term l = replace(t.lhs(), target, with);
      Term r = replace(t.rhs(), target, with);
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

Formula replace(const Formula& f, const Term& target, const Term& with) {
  switch (f.kind()) {
    case FormulaKind::Cmp:
      return Formula::cmp(replace(f.left_term(), target, with), f.op(),
                          replace(f.right_term(), target, with));
    case FormulaKind::Not:
      return Formula::negation(replace(f.lhs(), target, with));
    case FormulaKind::And:
      return Formula::conj(replace(f.lhs(), target, with), replace(f.rhs(), target, with));
    case FormulaKind::Or:
      return Formula::disj(replace(f.lhs(), target, with), replace(f.rhs(), target, with));
    case FormulaKind::Implies:
      return Formula::implies(replace(f.lhs(), target, with), replace(f.rhs(), target, with));
    default:
      return f;
  }
}

bool prove_split(std::vector<Formula> assumptions, Formula goal, const OracleOptions& opts,
                 int depth) {
  std::optional<Term> mm = find_min_max(goal);
  for (std::size_t i = 0; !mm && i < assumptions.size(); ++i) mm = find_min_max(assumptions[i]);
  if (!mm) return prove_case(assumptions, goal, opts);
  if (depth >= 4) return false;
  const Term& a = mm->lhs();
  const Term& b = mm->rhs();
  bool is_min = mm->kind() == TermKind::Min;
  // min(a,b) = a when a <= b, = b when b <= a; max dually.
  for (int branch = 0; branch < 2; ++branch) {
    const Term& pick = branch == 0 ? a : b;
    const Term& other = branch == 0 ? b : a;
    Formula cond = Formula::cmp(pick, is_min ? CmpOp::Le : CmpOp::Ge, other);
    std::vector<Formula> as;
    for (const auto& f : assumptions) as.push_back(replace(f, *mm, pick));
    as.push_back(cond);
    if (!prove_split(as, replace(goal, *mm, pick), opts, depth + 1)) return false;
  }
  return true;
}

// ---- sampling ----

struct PivotPlan {
  Polynomial c, r;  // v = -r / c
  std::string var;
};

class Sampler {
 public:
  explicit Sampler(const Obligation& ob) : ob_(ob) {
    std::set<std::string> vs;
    for (const auto& a : ob.assumptions) collect_vars(a, vs);
    collect_vars(ob.goal, vs);
    vars_.assign(vs.begin(), vs.end());
    Prepared prep = prepare(ob.assumptions);
    signs_ = prep.signs;
    std::set<std::string> chosen, seen;
    for (const auto& a : prep.atoms) {
      if (a.rel != Rel::EQ) continue;
      std::optional<std::string> best;
      for (const auto& v : a.p.vars()) {
        if (chosen.count(v) || a.p.degree_in(v) != 1) continue;
        auto cs = a.p.coefficients(v);
        if (!cs[1].is_constant()) continue;
        if (!best || (seen.count(*best) && !seen.count(v))) best = v;
      }
      if (!best) {
        for (const auto& v : a.p.vars())
          if (!chosen.count(v) && a.p.degree_in(v) == 1) {
            best = v;
            break;
          }
      }
      for (const auto& v : a.p.vars()) seen.insert(v);
      if (!best) continue;
      auto cs = a.p.coefficients(*best);
      plans_.push_back({cs[1], cs[0], *best});
      chosen.insert(*best);
    }
    pivots_ = chosen;
  }

  std::optional<Point> try_sample(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    Point p;
    for (const auto& v : vars_) p[v] = draw(rng, var_sign(signs_, v));
    if (!solve_pivots(p)) return std::nullopt;
    if (!violates(p)) return std::nullopt;
    return p;
  }

  Point minimize(Point p) const {
    for (const auto& v : vars_) {
      if (pivots_.count(v)) continue;
      Point q = p;
      q[v] = 0;
      if (p[v] != 0 && solve_pivots(q) && violates(q)) {
        p = q;
        continue;
      }
      for (int k = 0; k < 40 && p[v] != 0; ++k) {
        q = p;
        q[v] = p[v] / 2;
        if (!solve_pivots(q) || !violates(q)) break;
        p = q;
      }
    }
    return p;
  }

 private:
  static Rational draw(std::mt19937_64& rng, unsigned sign_hint) {
    std::uniform_int_distribution<int> pick(0, 99);
    unsigned options = sign_hint;
    int roll = pick(rng);
    if ((options & kZero) && (options == kZero || roll < 12)) return 0;
    Rational mag;
    int kind = pick(rng);
    if (kind < 30) {
      mag = std::uniform_int_distribution<int>(1, 4)(rng);
    } else if (kind < 80) {
      int n = std::uniform_int_distribution<int>(1, 64)(rng);
      int k = std::uniform_int_distribution<int>(0, 4)(rng);
      mag = Rational(n, 1 << k);
      mag.canonicalize();
    } else {
      mag = std::uniform_int_distribution<int>(1, 100)(rng);
    }
    bool can_pos = options & kPos;
    bool can_neg = options & kNeg;
    if (can_pos && can_neg) return pick(rng) < 50 ? mag : Rational(-mag);
    if (can_neg) return -mag;
    return mag;
  }

  bool solve_pivots(Point& p) const {
    for (const auto& plan : plans_) {
      Rational c = plan.c.evaluate(p);
      if (c == 0) return false;
      p[plan.var] = -plan.r.evaluate(p) / c;
    }
    return true;
  }

  bool violates(const Point& p) const {
    for (const auto& a : ob_.assumptions) {
      auto h = holds_exact(a, p);
      if (!h || !*h) return false;
    }
    auto g = holds_exact(ob_.goal, p);
    return g && !*g;
  }

  const Obligation& ob_;
  std::vector<std::string> vars_;
  SignMap signs_;
  std::vector<PivotPlan> plans_;
  std::set<std::string> pivots_;
};

}  // namespace

std::optional<SampleHit> search_counterexample(const Obligation& ob, std::uint64_t seed,
                                               std::size_t samples, bool parallel) {
  Sampler sampler(ob);
  std::optional<SampleHit> hit;
  if (!parallel) {
    for (std::size_t i = 0; i < samples; ++i) {
      if (auto p = sampler.try_sample(mix_seed(seed, i))) {
        hit = SampleHit{i, *p};
        break;
      }
    }
  } else {
    const std::size_t block = 512;
    for (std::size_t start = 0; start < samples && !hit; start += block) {
      std::size_t end = std::min(samples, start + block);
      std::vector<std::optional<Point>> found(end - start);
#pragma omp parallel for schedule(static)
      for (long i = static_cast<long>(start); i < static_cast<long>(end); ++i)
        found[static_cast<std::size_t>(i) - start] =
            sampler.try_sample(mix_seed(seed, static_cast<std::size_t>(i)));
      for (std::size_t i = 0; i < found.size(); ++i)
        if (found[i]) {
          hit = SampleHit{start + i, *found[i]};
          break;
        }
    }
  }
  if (hit) hit->point = sampler.minimize(hit->point);
  return hit;
}

OracleResult arith_oracle(const Obligation& ob, const OracleOptions& opts) {
  for (const auto& a : ob.assumptions)
    if (!is_first_order(a)) throw UnsupportedConstruct("modal assumption: " + to_string(a));
  if (!is_first_order(ob.goal)) throw UnsupportedConstruct("modal goal: " + to_string(ob.goal));

  if (prove_split(ob.assumptions, ob.goal, opts, 0)) return {Verdict::Proved, std::nullopt, "symbolic"};
  if (!opts.sampling) return {Verdict::Unknown, std::nullopt, "not proved symbolically"};
  if (auto hit = search_counterexample(ob, opts.seed, opts.samples, opts.parallel))
    return {Verdict::Refuted, hit->point, "sample " + std::to_string(hit->index)};
  return {Verdict::Unknown, std::nullopt,
          "not proved symbolically; no counterexample in " + std::to_string(opts.samples) +
              " samples"};
}

}  // namespace dlcert
