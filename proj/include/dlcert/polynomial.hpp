#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dlcert/ast.hpp"
#include "dlcert/rational.hpp"

namespace dlcert {

// Product of variables with positive exponents, factors sorted by name.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(const std::string& var, unsigned exp = 1);

  const std::vector<std::pair<std::string, unsigned>>& factors() const { return f_; }
  unsigned degree() const;
  unsigned degree_in(const std::string& var) const;
  bool is_one() const { return f_.empty(); }
  Monomial without(const std::string& var) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) = default;

 private:
  std::vector<std::pair<std::string, unsigned>> f_;
};

// Graded order: higher total degree first, then lexicographic on factors.
struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational, MonomialOrder>;

  Polynomial() = default;
  Polynomial(const Rational& c);  // NOLINT(implicit)
  static Polynomial var(const std::string& name);
  static Polynomial monomial(const Monomial& m, const Rational& c);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_value() const;  // coefficient of 1
  unsigned degree() const;
  unsigned degree_in(const std::string& var) const;
  std::set<std::string> vars() const;
  bool mentions(const std::string& var) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator-() const;
  Polynomial pow(unsigned e) const;
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

  Polynomial derivative(const std::string& var) const;
  Polynomial substitute(const std::string& var, const Polynomial& value) const;
  // coefficients()[k] is the coefficient of var^k.
  std::vector<Polynomial> coefficients(const std::string& var) const;

  Rational evaluate(const Point& at) const;
  double evaluate(const std::map<std::string, double>& at) const;

  Term to_term() const;
  // Canonical text. `order`, if given, ranks variables inside monomials.
  std::string to_string(const std::vector<std::string>* order = nullptr) const;

 private:
  void add_term(const Monomial& m, const Rational& c);
  Terms terms_;
};

// Quotient of polynomials, with the denominator constrained by the caller.
struct Fraction {
  Polynomial num;
  Polynomial den = Polynomial(Rational(1));
};

// Exact conversion; Div is allowed only by nonzero rational constants.
// `params` is used to tell DivisionByState from DivisionByParameter.
Polynomial to_polynomial(const Term& t, const std::set<std::string>& params = {});

// Conversion allowing division by any term free of state variables.
Fraction to_fraction(const Term& t, const std::function<bool(const std::string&)>& is_state);

struct VectorField {
  std::vector<std::pair<std::string, Polynomial>> rhs;
  Formula domain = Formula::truth();
  // When set, only ODE variables and these may appear in right-hand sides
  // or in arguments of lie_derivative.
  std::optional<std::set<std::string>> params;

  bool has(const std::string& var) const;
  const Polynomial* find(const std::string& var) const;
  std::set<std::string> state() const;

  // Throws NotPolynomial if a right-hand side is not polynomial.
  static VectorField from_ode(const Program& ode);
};

// Sum over ODE variables x of (dp/dx) * f_x. Throws UnboundVariable when a
// declared parameter set leaves a variable unaccounted for.
Polynomial lie_derivative(const Polynomial& p, const VectorField& vf);
// Lie derivative of num/den where den is free of ODE variables.
Fraction lie_derivative(const Fraction& f, const VectorField& vf);

Rational evaluate(const Polynomial& p, const Point& at);
double evaluate(const Polynomial& p, const std::map<std::string, double>& at);

}  // namespace dlcert
