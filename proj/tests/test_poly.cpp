#include "doctest.h"

#include <cmath>

#include "dlcert/errors.hpp"
#include "dlcert/polynomial.hpp"
#include "dlcert/simulate.hpp"
#include "laws.hpp"
#include "support.hpp"

using namespace dlcert;

namespace {

Polynomial P(const std::string& text) { return to_polynomial(parse_term(text)); }

VectorField field(const std::string& entry) {
  return VectorField::from_ode(support::program(support::model(entry), "ode"));
}

}  // namespace

TEST_CASE("normal form") {
  CHECK(P("(A + B)^2") == P("A^2 + 2*A*B + B^2"));
  CHECK(P("(A + B)^2").to_string() == "A^2 + 2*A*B + B^2");
  CHECK(P("x - x").is_zero());
  Polynomial rate = P("T*A*B");
  CHECK(rate.terms().size() == 1);
  CHECK(rate.terms().begin()->second == 1);
  CHECK(P("T*A*B").degree() == 3);
  CHECK(P("x/4 + x/4") == P("1/2*x"));
  CHECK(P("x^0") == Polynomial(Rational(1)));
  Polynomial q = P("3*x^2*y - 2*x + 0*y + 5");
  CHECK(q.terms().size() == 3);
  for (const auto& [m, c] : q.terms()) CHECK(c != 0);
}

TEST_CASE("graded order puts higher degree first") {
  auto terms = P("1 + x + y^2 + x*y^3").terms();
  std::vector<unsigned> degs;
  for (const auto& [m, c] : terms) degs.push_back(m.degree());
  CHECK(degs == std::vector<unsigned>{4, 2, 1, 0});
}

TEST_CASE("non-polynomial terms") {
  try {
    to_polynomial(parse_term("min(A/kA, B/kB)"));
    FAIL("no error");
  } catch (const NotPolynomial& e) {
    CHECK(e.reason() == NotPolynomialReason::MinMax);
  }
  try {
    to_polynomial(parse_term("A/B"));
    FAIL("no error");
  } catch (const NotPolynomial& e) {
    CHECK(e.reason() == NotPolynomialReason::DivisionByState);
    CHECK(e.subterm() == "A/B");
  }
  try {
    to_polynomial(parse_term("A/kA"), {"kA"});
    FAIL("no error");
  } catch (const NotPolynomial& e) {
    CHECK(e.reason() == NotPolynomialReason::DivisionByParameter);
  }
}

TEST_CASE("fractions over parameters") {
  auto is_state = [](const std::string& v) { return v == "A" || v == "B"; };
  Fraction f = to_fraction(parse_term("A/kA + B/kB"), is_state);
  CHECK(f.num == P("A*kB + B*kA"));
  CHECK(f.den == P("kA*kB"));
  CHECK_THROWS_AS(to_fraction(parse_term("kA/A"), is_state), NotPolynomial);
}

TEST_CASE("Lie derivatives on corpus fields") {
  CHECK(lie_derivative(P("A + B"), field("rev_basic")).is_zero());
  CHECK(lie_derivative(P("c"), field("rev_basic")).is_zero());
  CHECK(lie_derivative(P("T"), field("conserve")) == P("(hT*A0*B0*kr1 + kr2)*kT"));
  CHECK(lie_derivative(P("A"), field("rev_basic")) == P("-A*kf + B*kr"));
}

TEST_CASE("declared parameters bound the variables") {
  VectorField vf = field("rev_basic");
  vf.params = std::set<std::string>{"kf", "kr"};
  CHECK(lie_derivative(P("A*kf"), vf) == P("kf*(-A*kf + B*kr)"));
  CHECK_THROWS_AS(lie_derivative(P("A*q"), vf), UnboundVariable);
}

TEST_CASE("evaluation") {
  CHECK(evaluate(P("A^2 + B"), Point{{"A", 2}, {"B", 3}}) == 7);
  CHECK(evaluate(P("A0*kr"), Point{{"A0", 1}, {"kr", 1}}) == 1);
  Model fx = support::model("fixedexp");
  Term taylor = parse_term("taylorHi(x, t)", fx);
  CHECK(evaluate(to_polynomial(taylor), Point{{"t", 0}, {"x", 5}, {"kT", 3}, {"A0", 7}, {"B0", 2}}) ==
        5);
  CHECK(evaluate(P("x*y"), std::map<std::string, double>{{"x", 1.5}, {"y", -2}}) == -3.0);
  CHECK_THROWS_AS(evaluate(P("x*y"), Point{{"x", 1}}), MissingVariable);
}

TEST_CASE("substitution and coefficients") {
  Polynomial p = P("x^2*y + x + 3");
  CHECK(p.substitute("x", P("y + 1")) == P("(y + 1)^2*y + y + 4"));
  auto c = p.coefficients("x");
  REQUIRE(c.size() == 3);
  CHECK(c[0] == P("3"));
  CHECK(c[1] == P("1"));
  CHECK(c[2] == P("y"));
  CHECK(p.derivative("x") == P("2*x*y + 1"));
}

// Lie derivative against a central difference of simulated flows.
TEST_CASE("Lie derivative matches the flow") {
  struct Sys {
    const char* entry;
    std::vector<std::string> fixed;
  };
  const std::vector<Sys> systems = {{"rev_basic", {}},
                                    {"conserve", {}},
                                    {"fixedexp", {"isOn"}},
                                    {"dynexp", {"isOn"}},
                                    {"bangbang", {"isOn"}}};
  laws::Gen g(3);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  const double h = 1e-3;
  int checked = 0;
  for (const auto& sys : systems) {
    Program ode = support::program(support::model(sys.entry), "ode");
    std::vector<OdeEquation> fwd, back;
    for (const auto& eq : ode.equations()) {
      fwd.push_back(eq);
      back.push_back({eq.var, Term::neg(eq.rhs)});
    }
    Program f = Program::ode(fwd, Formula::truth());
    Program b = Program::ode(back, Formula::truth());
    VectorField vf = VectorField::from_ode(f);
    std::set<std::string> names;
    collect_vars(f, names);
    std::vector<std::string> vars(names.begin(), names.end());
    for (int k = 0; k < 20; ++k) {
      State x0;
      for (const auto& v : vars) x0[v] = u(g.rng());
      for (const auto& v : sys.fixed) x0[v] = 1;
      Polynomial p = g.polynomial(vars, 4, 3);
      SimConfig cfg;
      cfg.dt = h / 4;
      cfg.horizon = h;
      Trace tf = simulate_program(f, x0, cfg);
      Trace tb = simulate_program(b, x0, cfg);
      double pf = evaluate(p, tf.state(tf.samples.size() - 1));
      double pb = evaluate(p, tb.state(tb.samples.size() - 1));
      double fd = (pf - pb) / (2 * h);
      double exact = evaluate(lie_derivative(p, vf), x0);
      CHECK_MESSAGE(std::fabs(fd - exact) <= 1e-4 * std::max(1.0, std::fabs(exact)),
                    sys.entry << " p = " << p.to_string());
      ++checked;
    }
  }
  CHECK(checked == 100);
}

TEST_CASE("algebraic laws, short run") {
  for (laws::Law l : {laws::Law::LieLinearity, laws::Law::Leibniz, laws::Law::PowerRule,
                      laws::Law::Idempotence}) {
    laws::LawReport r = laws::check_law(l, 200, 5);
    CHECK_MESSAGE(r.failures == 0, laws::law_name(l) << ": " << r.first_failure);
  }
}
