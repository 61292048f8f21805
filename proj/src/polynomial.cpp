#include "dlcert/polynomial.hpp"

#include <algorithm>
#include <unordered_map>

#include "dlcert/errors.hpp"
#include "dlcert/printer.hpp"

namespace dlcert {

// ---- Monomial ----

Monomial::Monomial(const std::string& var, unsigned exp) {
  if (exp > 0) f_.emplace_back(var, exp);
}

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (const auto& [v, e] : f_) d += e;
  return d;
}

unsigned Monomial::degree_in(const std::string& var) const {
  for (const auto& [v, e] : f_)
    if (v == var) return e;
  return 0;
}

Monomial Monomial::without(const std::string& var) const {
  Monomial m;
  for (const auto& f : f_)
    if (f.first != var) m.f_.push_back(f);
  return m;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial m;
  auto i = a.f_.begin();
  auto j = b.f_.begin();
  while (i != a.f_.end() || j != b.f_.end()) {
    if (j == b.f_.end() || (i != a.f_.end() && i->first < j->first)) {
      m.f_.push_back(*i++);
    } else if (i == a.f_.end() || j->first < i->first) {
      m.f_.push_back(*j++);
    } else {
      m.f_.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  return m;
}

bool MonomialOrder::operator()(const Monomial& a, const Monomial& b) const {
  unsigned da = a.degree(), db = b.degree();
  if (da != db) return da > db;
  const auto& fa = a.factors();
  const auto& fb = b.factors();
  std::size_t n = std::min(fa.size(), fb.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (fa[k].first != fb[k].first) return fa[k].first < fb[k].first;
    if (fa[k].second != fb[k].second) return fa[k].second > fb[k].second;
  }
  return fa.size() < fb.size();
}

// ---- Polynomial ----

Polynomial::Polynomial(const Rational& c) {
  Rational q(c);
  q.canonicalize();
  if (q != 0) terms_.emplace(Monomial(), q);
}

Polynomial Polynomial::var(const std::string& name) {
  return monomial(Monomial(name), Rational(1));
}

Polynomial Polynomial::monomial(const Monomial& m, const Rational& c) {
  Polynomial p;
  Rational q(c);
  q.canonicalize();
  if (q != 0) p.terms_.emplace(m, q);
  return p;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Polynomial::constant_value() const {
  auto it = terms_.find(Monomial());
  return it == terms_.end() ? Rational(0) : it->second;
}

unsigned Polynomial::degree() const {
  return terms_.empty() ? 0 : terms_.begin()->first.degree();
}

unsigned Polynomial::degree_in(const std::string& var) const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree_in(var));
  return d;
}

std::set<std::string> Polynomial::vars() const {
  std::set<std::string> out;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m.factors()) out.insert(v);
  return out;
}

bool Polynomial::mentions(const std::string& var) const {
  for (const auto& [m, c] : terms_)
    if (m.degree_in(var) > 0) return true;
  return false;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial p;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) p.add_term(ma * mb, ca * cb);
  return p;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) { return *this = *this * o; }

Polynomial Polynomial::operator-() const {
  Polynomial p;
  for (const auto& [m, c] : terms_) p.terms_.emplace(m, -c);
  return p;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result(Rational(1));
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1u) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

Polynomial Polynomial::derivative(const std::string& var) const {
  Polynomial p;
  for (const auto& [m, c] : terms_) {
    unsigned e = m.degree_in(var);
    if (e == 0) continue;
    p.add_term(m.without(var) * Monomial(var, e - 1), c * e);
  }
  return p;
}

std::vector<Polynomial> Polynomial::coefficients(const std::string& var) const {
  std::vector<Polynomial> out(degree_in(var) + 1);
  for (const auto& [m, c] : terms_) out[m.degree_in(var)].add_term(m.without(var), c);
  return out;
}

Polynomial Polynomial::substitute(const std::string& var, const Polynomial& value) const {
  auto cs = coefficients(var);
  Polynomial result;
  Polynomial power(Rational(1));
  for (std::size_t k = 0; k < cs.size(); ++k) {
    if (k > 0) power *= value;
    if (!cs[k].is_zero()) result += cs[k] * power;
  }
  return result;
}

Rational Polynomial::evaluate(const Point& at) const {
  Rational sum = 0;
  for (const auto& [m, c] : terms_) {
    Rational prod = c;
    for (const auto& [v, e] : m.factors()) {
      auto it = at.find(v);
      if (it == at.end()) throw MissingVariable(v);
      Rational x;
      mpz_pow_ui(x.get_num_mpz_t(), it->second.get_num_mpz_t(), e);
      mpz_pow_ui(x.get_den_mpz_t(), it->second.get_den_mpz_t(), e);
      prod *= x;
    }
    sum += prod;
  }
  return sum;
}

double Polynomial::evaluate(const std::map<std::string, double>& at) const {
  double sum = 0;
  for (const auto& [m, c] : terms_) {
    double prod = c.get_d();
    for (const auto& [v, e] : m.factors()) {
      auto it = at.find(v);
      if (it == at.end()) throw MissingVariable(v);
      for (unsigned k = 0; k < e; ++k) prod *= it->second;
    }
    sum += prod;
  }
  return sum;
}

Term Polynomial::to_term() const {
  Term acc;
  for (const auto& [m, c] : terms_) {
    Rational mag = abs(c);
    Term mono;
    for (const auto& [v, e] : m.factors()) {
      Term f = e == 1 ? Term::var(v) : Term::pow(Term::var(v), e);
      mono = mono ? Term::mul(mono, f) : f;
    }
    Term t = !mono ? Term::lit(mag) : (mag == 1 ? mono : Term::mul(Term::lit(mag), mono));
    if (!acc)
      acc = c < 0 ? Term::neg(t) : t;
    else
      acc = c < 0 ? Term::sub(acc, t) : Term::add(acc, t);
  }
  return acc ? acc : Term::lit(0);
}

std::string Polynomial::to_string(const std::vector<std::string>* order) const {
  if (terms_.empty()) return "0";
  std::unordered_map<std::string, std::size_t> rank;
  if (order)
    for (std::size_t i = 0; i < order->size(); ++i) rank.emplace((*order)[i], i);
  auto ranked = [&](const std::string& v) {
    auto it = rank.find(v);
    return it == rank.end() ? rank.size() : it->second;
  };
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    auto fs = m.factors();
    if (order)
      std::stable_sort(fs.begin(), fs.end(), [&](const auto& a, const auto& b) {
        return ranked(a.first) < ranked(b.first);
      });
    Rational mag = abs(c);
    std::string mono;
    for (const auto& [v, e] : fs) {
      if (!mono.empty()) mono += "*";
      mono += v;
      if (e > 1) mono += "^" + std::to_string(e);
    }
    std::string body;
    if (mono.empty())
      body = rational_to_string(mag);
    else if (mag == 1)
      body = mono;
    else
      body = rational_to_string(mag) + "*" + mono;
    if (first)
      out = c < 0 ? "-" + body : body;
    else
      out += (c < 0 ? " - " : " + ") + body;
    first = false;
  }
  return out;
}

// ---- conversions ----

namespace {

[[noreturn]] void not_polynomial(const Term& t, NotPolynomialReason r) {
  throw NotPolynomial(to_string(t), r);
}

}  // namespace

Polynomial to_polynomial(const Term& t, const std::set<std::string>& params) {
  switch (t.kind()) {
    case TermKind::Var:
      return Polynomial::var(t.name());
    case TermKind::Lit:
      return Polynomial(t.value());
    case TermKind::Add:
      return to_polynomial(t.lhs(), params) + to_polynomial(t.rhs(), params);
    case TermKind::Sub:
      return to_polynomial(t.lhs(), params) - to_polynomial(t.rhs(), params);
    case TermKind::Neg:
      return -to_polynomial(t.lhs(), params);
    case TermKind::Mul:
      return to_polynomial(t.lhs(), params) * to_polynomial(t.rhs(), params);
    case TermKind::Pow:
      return to_polynomial(t.lhs(), params).pow(t.exponent());
    case TermKind::Div: {
      Polynomial den = to_polynomial(t.rhs(), params);
      if (den.is_constant()) {
        if (den.is_zero()) throw Error("division by zero in " + to_string(t));
        return to_polynomial(t.lhs(), params) * Polynomial(1 / den.constant_value());
      }
      bool param_only = true;
      for (const auto& v : den.vars())
        if (!params.count(v)) param_only = false;
      not_polynomial(t, param_only ? NotPolynomialReason::DivisionByParameter
                                   : NotPolynomialReason::DivisionByState);
    }
    case TermKind::Min:
    case TermKind::Max:
      not_polynomial(t, NotPolynomialReason::MinMax);
  }
  return {};
}

namespace {

Fraction normalize(Fraction f) {
  if (f.den.is_constant()) {
    f.num *= Polynomial(1 / f.den.constant_value());
    f.den = Polynomial(Rational(1));
  }
  return f;
}

bool state_free(const Polynomial& p, const std::function<bool(const std::string&)>& is_state) {
  for (const auto& v : p.vars())
    if (is_state(v)) return false;
  return true;
}

}  // namespace

Fraction to_fraction(const Term& t, const std::function<bool(const std::string&)>& is_state) {
  switch (t.kind()) {
    case TermKind::Var:
      return {Polynomial::var(t.name())};
    case TermKind::Lit:
      return {Polynomial(t.value())};
    case TermKind::Add:
    case TermKind::Sub: {
      Fraction a = to_fraction(t.lhs(), is_state);
      Fraction b = to_fraction(t.rhs(), is_state);
      if (t.kind() == TermKind::Sub) b.num = -b.num;
      if (a.den == b.den) return normalize({a.num + b.num, a.den});
      return normalize({a.num * b.den + b.num * a.den, a.den * b.den});
    }
    case TermKind::Neg: {
      Fraction a = to_fraction(t.lhs(), is_state);
      return {-a.num, a.den};
    }
    case TermKind::Mul: {
      Fraction a = to_fraction(t.lhs(), is_state);
      Fraction b = to_fraction(t.rhs(), is_state);
      return normalize({a.num * b.num, a.den * b.den});
    }
    case TermKind::Pow: {
      Fraction a = to_fraction(t.lhs(), is_state);
      return normalize({a.num.pow(t.exponent()), a.den.pow(t.exponent())});
    }
    case TermKind::Div: {
      Fraction a = to_fraction(t.lhs(), is_state);
      Fraction b = to_fraction(t.rhs(), is_state);
      if (b.num.is_zero()) throw Error("division by zero in " + to_string(t));
      if (!state_free(b.num, is_state)) not_polynomial(t, NotPolynomialReason::DivisionByState);
      return normalize({a.num * b.den, a.den * b.num});
    }
    case TermKind::Min:
    case TermKind::Max:
      not_polynomial(t, NotPolynomialReason::MinMax);
  }
  return {};
}

// ---- vector fields ----

bool VectorField::has(const std::string& var) const { return find(var) != nullptr; }

const Polynomial* VectorField::find(const std::string& var) const {
  for (const auto& [v, p] : rhs)
    if (v == var) return &p;
  return nullptr;
}

std::set<std::string> VectorField::state() const {
  std::set<std::string> out;
  for (const auto& [v, p] : rhs) out.insert(v);
  return out;
}

VectorField VectorField::from_ode(const Program& ode) {
  if (ode.kind() != ProgramKind::Ode) throw ShapeUnsupported("expected an ODE, got " + to_string(ode));
  VectorField vf;
  std::set<std::string> xs = ode_vars(ode);
  std::set<std::string> params;
  for (const auto& eq : ode.equations())
    for (const auto& v : free_vars(eq.rhs))
      if (!xs.count(v)) params.insert(v);
  for (const auto& eq : ode.equations()) vf.rhs.emplace_back(eq.var, to_polynomial(eq.rhs, params));
  vf.domain = ode.domain();
  return vf;
}

namespace {

void check_bound(const Polynomial& p, const VectorField& vf) {
  if (!vf.params) return;
  for (const auto& v : p.vars())
    if (!vf.has(v) && !vf.params->count(v)) throw UnboundVariable(v);
}

}  // namespace

Polynomial lie_derivative(const Polynomial& p, const VectorField& vf) {
  check_bound(p, vf);
  for (const auto& [x, f] : vf.rhs) check_bound(f, vf);
  Polynomial out;
  for (const auto& [x, f] : vf.rhs) {
    if (!p.mentions(x)) continue;
    out += p.derivative(x) * f;
  }
  return out;
}

Fraction lie_derivative(const Fraction& f, const VectorField& vf) {
  for (const auto& v : f.den.vars())
    if (vf.has(v)) throw NotPolynomial(f.den.to_string(), NotPolynomialReason::DivisionByState);
  return {lie_derivative(f.num, vf), f.den};
}

Rational evaluate(const Polynomial& p, const Point& at) { return p.evaluate(at); }
double evaluate(const Polynomial& p, const std::map<std::string, double>& at) {
  return p.evaluate(at);
}

}  // namespace dlcert
