#include "laws.hpp"

#include <set>
#include <sstream>

#include "dlcert/parser.hpp"
#include "dlcert/printer.hpp"

using namespace dlcert;

namespace laws {

namespace {
const std::vector<std::string> kPool = {"x", "y", "z", "A", "B", "kf", "T0", "u_1"};
}

Rational Gen::literal() {
  switch (below(4)) {
    case 0: return Rational(below(10));
    case 1: return Rational(below(1000));
    case 2: {
      Rational q(below(50), 1 + below(12));
      q.canonicalize();
      return q;
    }
    default: {
      Rational q(below(100000), 1000);
      q.canonicalize();
      return q;
    }
  }
}

std::string Gen::ident() { return kPool[below(static_cast<int>(kPool.size()))]; }

Term Gen::term(int depth) {
  if (depth <= 0 || below(4) == 0)
    return below(2) ? Term::var(ident()) : Term::lit(literal());
  int d = depth - 1;
  switch (below(9)) {
    case 0: return Term::add(term(d), term(d));
    case 1: return Term::sub(term(d), term(d));
    case 2: return Term::neg(term(d));
    case 3: return Term::mul(term(d), term(d));
    case 4: return Term::div(term(d), term(d));
    case 5: return Term::pow(term(d), static_cast<unsigned>(below(5)));
    case 6: return Term::min(term(d), term(d));
    case 7: return Term::max(term(d), term(d));
    default: return Term::var(ident());
  }
}

namespace {
const CmpOp kOps[] = {CmpOp::Ge, CmpOp::Gt, CmpOp::Eq, CmpOp::Ne, CmpOp::Le, CmpOp::Lt};
}

Formula Gen::formula(int depth) {
  if (depth <= 0 || below(4) == 0) {
    switch (below(8)) {
      case 0: return Formula::truth();
      case 1: return Formula::falsity();
      default: return Formula::cmp(term(2), kOps[below(6)], term(2));
    }
  }
  int d = depth - 1;
  switch (below(7)) {
    case 0: return Formula::negation(formula(d));
    case 1: return Formula::conj(formula(d), formula(d));
    case 2: return Formula::disj(formula(d), formula(d));
    case 3: return Formula::implies(formula(d), formula(d));
    case 4: return Formula::box(program(d), formula(d));
    case 5: return Formula::diamond(program(d), formula(d));
    default: return Formula::cmp(term(d), kOps[below(6)], term(d));
  }
}

Program Gen::program(int depth) {
  auto first_order = [&](int d) {
    Formula f = Formula::cmp(term(d), kOps[below(6)], term(d));
    return below(3) ? f : Formula::conj(f, Formula::cmp(term(1), kOps[below(6)], term(1)));
  };
  auto ode = [&](int d) {
    std::vector<OdeEquation> eqs;
    std::set<std::string> used;
    int n = 1 + below(3);
    for (int i = 0; i < n; ++i) {
      std::string v = ident();
      if (used.insert(v).second) eqs.push_back({v, term(d)});
    }
    return Program::ode(eqs, below(2) ? Formula::truth() : first_order(1));
  };
  if (depth <= 0 || below(4) == 0) {
    switch (below(3)) {
      case 0: return Program::test(first_order(1));
      case 1: return Program::assign(ident(), term(2));
      default: return ode(1);
    }
  }
  int d = depth - 1;
  switch (below(6)) {
    case 0: return Program::test(formula(d));
    case 1: return Program::assign(ident(), term(d));
    case 2: return ode(d);
    case 3: return Program::choice(program(d), program(d));
    case 4: return Program::seq(program(d), program(d));
    default: return Program::loop(program(d));
  }
}

Term Gen::poly_term(int depth, const std::vector<std::string>& vars) {
  if (depth <= 0 || below(3) == 0) {
    if (below(3)) return Term::var(vars[below(static_cast<int>(vars.size()))]);
    return Term::lit(literal());
  }
  int d = depth - 1;
  switch (below(6)) {
    case 0: return Term::add(poly_term(d, vars), poly_term(d, vars));
    case 1: return Term::sub(poly_term(d, vars), poly_term(d, vars));
    case 2: return Term::neg(poly_term(d, vars));
    case 3: return Term::mul(poly_term(d, vars), poly_term(d, vars));
    case 4: return Term::pow(poly_term(d, vars), static_cast<unsigned>(below(4)));
    default: return Term::div(poly_term(d, vars), Term::lit(Rational(1 + below(9))));
  }
}

Polynomial Gen::polynomial(const std::vector<std::string>& vars, int max_terms, int max_deg) {
  Polynomial p;
  int n = 1 + below(max_terms);
  for (int i = 0; i < n; ++i) {
    Rational c(below(21) - 10, 1 + below(4));
    c.canonicalize();
    Polynomial m(c);
    int deg = below(max_deg + 1);
    for (int k = 0; k < deg; ++k) m *= Polynomial::var(vars[below(static_cast<int>(vars.size()))]);
    p += m;
  }
  return p;
}

VectorField Gen::field(const std::vector<std::string>& state,
                       const std::vector<std::string>& params) {
  std::vector<std::string> all = state;
  all.insert(all.end(), params.begin(), params.end());
  VectorField vf;
  for (const auto& x : state) vf.rhs.push_back({x, polynomial(all, 3, 2)});
  return vf;
}

const char* law_name(Law l) {
  switch (l) {
    case Law::LieLinearity: return "Lie linearity";
    case Law::Leibniz: return "Leibniz rule";
    case Law::PowerRule: return "power rule";
    case Law::Idempotence: return "canonicalization idempotence";
    case Law::RoundTrip: return "parse/print round-trip";
  }
  return "?";
}

namespace {

const std::vector<std::string> kState = {"x", "y", "z"};
const std::vector<std::string> kVars = {"x", "y", "z", "a", "b"};

// Empty string on success.
std::string one_case(Law law, Gen& g) {
  switch (law) {
    case Law::LieLinearity: {
      VectorField vf = g.field(kState, {"a", "b"});
      Polynomial p = g.polynomial(kVars, 4, 3), q = g.polynomial(kVars, 4, 3);
      if (lie_derivative(p + q, vf) == lie_derivative(p, vf) + lie_derivative(q, vf)) return "";
      return "p = " + p.to_string() + ", q = " + q.to_string();
    }
    case Law::Leibniz: {
      VectorField vf = g.field(kState, {"a", "b"});
      Polynomial p = g.polynomial(kVars, 4, 3), q = g.polynomial(kVars, 4, 3);
      Polynomial lhs = lie_derivative(p * q, vf);
      Polynomial rhs = lie_derivative(p, vf) * q + p * lie_derivative(q, vf);
      if (lhs == rhs) return "";
      return "p = " + p.to_string() + ", q = " + q.to_string();
    }
    case Law::PowerRule: {
      VectorField vf = g.field(kState, {"a", "b"});
      Polynomial p = g.polynomial(kVars, 3, 2);
      unsigned n = 1 + static_cast<unsigned>(g.below(4));
      Polynomial lhs = lie_derivative(p.pow(n), vf);
      Polynomial rhs = Polynomial(Rational(n)) * p.pow(n - 1) * lie_derivative(p, vf);
      if (lhs == rhs) return "";
      return "p = " + p.to_string() + ", n = " + std::to_string(n);
    }
    case Law::Idempotence: {
      Term t = g.poly_term(5, kVars);
      Polynomial once = to_polynomial(t);
      Polynomial twice = to_polynomial(once.to_term());
      if (once == twice && to_polynomial(parse_term(once.to_string())) == once) return "";
      return "t = " + to_string(t);
    }
    case Law::RoundTrip: {
      Term t = g.term(8);
      std::string ts = to_string(t);
      if (!(parse_term(ts) == t)) return "term " + ts;
      Formula f = g.formula(4);
      std::string fs = to_string(f);
      if (!(parse_formula(fs) == f)) return "formula " + fs;
      Program p = g.program(4);
      std::string ps = to_string(p);
      if (!(parse_program(ps) == p)) return "program " + ps;
      return "";
    }
  }
  return "unknown law";
}

}  // namespace

LawReport check_law(Law law, int cases, std::uint64_t seed) {
  Gen g(seed);
  LawReport r;
  for (int i = 0; i < cases; ++i) {
    std::string bad;
    try {
      bad = one_case(law, g);
    } catch (const std::exception& e) {
      bad = std::string("exception: ") + e.what();
    }
    ++r.cases;
    if (!bad.empty()) {
      if (r.failures++ == 0) r.first_failure = "case " + std::to_string(i) + ": " + bad;
    }
  }
  return r;
}

}  // namespace laws
