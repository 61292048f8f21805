#include "doctest.h"

#include "dlcert/errors.hpp"
#include "dlcert/parser.hpp"
#include "dlcert/printer.hpp"
#include "laws.hpp"
#include "support.hpp"

using namespace dlcert;

TEST_CASE("printer renders the basic shapes") {
  CHECK(to_string(Term::mul(Term::lit(2), Term::var("A"))) == "2*A");
  Program ode = Program::ode({{"A", Term::neg(Term::var("A"))}}, Formula::truth());
  Formula f = Formula::box(ode, Formula::cmp(Term::var("A"), CmpOp::Ge, Term::lit(0)));
  CHECK(to_string(f) == "[{A' = -A}] A >= 0");
  Term m = Term::min(Term::div(Term::var("A"), Term::var("kA")),
                     Term::div(Term::var("B"), Term::var("kB")));
  CHECK(to_string(m) == "min(A/kA, B/kB)");
}

TEST_CASE("operator precedence") {
  Term t = parse_term("-x^2 + 3*y/z - 1");
  CHECK(t == Term::sub(Term::add(Term::neg(Term::pow(Term::var("x"), 2)),
                                 Term::div(Term::mul(Term::lit(3), Term::var("y")), Term::var("z"))),
                       Term::lit(1)));
  CHECK(parse_term("3/4") == Term::lit(Rational(3, 4)));
  CHECK(parse_term("0.125") == Term::lit(Rational(1, 8)));
  CHECK(parse_term("007") == Term::lit(Rational(7)));
  CHECK(parse_term("010/08") == Term::lit(Rational(5, 4)));
  Formula f = parse_formula("!a > 0 & b > 0 | c > 0 -> d > 0");
  REQUIRE(f.kind() == FormulaKind::Implies);
  CHECK(f.lhs().kind() == FormulaKind::Or);
  CHECK(f.lhs().lhs().kind() == FormulaKind::And);
  CHECK(f.lhs().lhs().lhs().kind() == FormulaKind::Not);
}

TEST_CASE("if/else and while desugar") {
  Formula p = parse_formula("x > 0");
  Program a = parse_program("y := 1;");
  Program b = parse_program("y := 2;");
  Program expect = Program::choice(Program::seq(Program::test(p), a),
                                   Program::seq(Program::test(Formula::negation(p)), b));
  CHECK(parse_program("if (x > 0) {y := 1;} else {y := 2;}") == expect);

  Program w = parse_program("while (x > 0) {x := x - 1;}");
  Program body = parse_program("x := x - 1;");
  CHECK(w == Program::seq(Program::loop(Program::seq(Program::test(p), body)),
                          Program::test(Formula::negation(p))));

  laws::Gen g(7);
  for (int i = 0; i < 200; ++i) {
    Formula c = g.formula(2);
    Program l = g.program(2), r = g.program(2);
    std::string text =
        "if (" + to_string(c) + ") {" + to_string(l) + "} else {" + to_string(r) + "}";
    Program want = Program::choice(Program::seq(Program::test(c), l),
                                   Program::seq(Program::test(Formula::negation(c)), r));
    REQUIRE_MESSAGE(parse_program(text) == want, text);
  }
}

TEST_CASE("model files") {
  Model m = support::model("rev_basic");
  CHECK(m.name == "rev_basic");
  Program ode = support::program(m, "ode");
  REQUIRE(ode.kind() == ProgramKind::Ode);
  REQUIRE(ode.equations().size() == 2);
  CHECK(ode.equations()[0].var == "A");
  CHECK(ode.equations()[0].rhs == parse_term("-A*kf + B*kr"));
  CHECK(ode.equations()[1].rhs == parse_term("A*kf - B*kr"));
  CHECK(m.theorem == parse_formula("A0 > 0 & kr > 0 & kf > 0 & A = A0 & B = 0 -> "
                                   "[{A' = -A*kf + B*kr, B' = A*kf - B*kr}] A <= A0"));

  Model trivial = parse_model("theorem true -> [?true;] true");
  REQUIRE(trivial.theorem.kind() == FormulaKind::Implies);
  CHECK(trivial.theorem.rhs() ==
        Formula::box(Program::test(Formula::truth()), Formula::truth()));
}

TEST_CASE("definitions expand") {
  Model m = parse_model(
      "model d\n"
      "def sq(x) = x*x\n"
      "def k = sq(a) + 1\n"
      "const a > 0\n"
      "theorem const -> [{y' = k}] y >= 0\n");
  Formula box = m.theorem.rhs();
  CHECK(box.program().equations()[0].rhs == parse_term("a*a + 1"));
  CHECK(m.find_def("k") != nullptr);
}

TEST_CASE("model errors") {
  try {
    parse_model("model m\nprogram ode = {A' = }\n");
    FAIL("no error");
  } catch (const SyntaxError& e) {
    CHECK(e.position().line == 2);
    CHECK(e.position().column == 21);
  }
  CHECK_THROWS_AS(parse_model("theorem f(x) > 0"), UndefinedName);
  CHECK_THROWS_AS(parse_model("def a = b + 1\ndef b = a\ntheorem a > 0"), RecursiveDefinition);
  CHECK_THROWS_AS(parse_model("def a = a\ntheorem a > 0"), RecursiveDefinition);
}

TEST_CASE("CRLF and comments") {
  Model lf = parse_model("model m // name\nconst a > 0\ntheorem const -> [?true;] a > 0\n");
  Model crlf = parse_model("model m // name\r\nconst a > 0\r\ntheorem const -> [?true;] a > 0\r\n");
  CHECK(lf.theorem == crlf.theorem);
  CHECK(parse_model("model m\ntheorem x > 0").theorem ==
        parse_model("model m\ntheorem x > 0").theorem);
}

TEST_CASE("certificates") {
  Model bb = support::model("bangbang");
  Certificate c = support::cert("bangbang", bb);
  CHECK(c.model == "bangbang");
  REQUIRE(c.loop_invariant);
  CHECK(*c.loop_invariant == parse_formula("T <= Tmax"));
  REQUIRE(c.cuts.size() == 1);
  CHECK(c.cuts[0].method == CutMethod::DIIneq);
  CHECK(c.cuts[0].formula ==
        parse_formula("Tmax - T > (eps - t)*(hT*A0*B0*kr1 + kr2)*kT"));

  Model fx = support::model("fixedexp");
  Certificate f = support::cert("fixedexp", fx);
  REQUIRE(f.cuts.size() == 3);
  CHECK(f.cuts[0].formula == parse_formula("t >= 0"));
  CHECK(f.cuts[1].formula == parse_formula("A0*B0*T*kT >= 0"));
  CHECK(f.cuts[2].method == CutMethod::Darboux);
  CHECK(f.cuts[2].cofactor == parse_term("A0*B0*kT"));
  CHECK(f.cuts[2].formula ==
        parse_formula("(1 + 2*t*(kT*A0*B0))*Told - T >= 0"));

  Certificate minimal = parse_certificate("certificate for m\nloop_invariant x >= 0\n");
  CHECK(minimal.cuts.empty());
  CHECK(minimal.loop_invariant);

  CHECK_THROWS_AS(parse_certificate("certificate for m\ncut x >= 0 by magic\n"), UnknownMethod);
  CHECK_THROWS_AS(parse_certificate("certificate for m\ncut x >= 0 by\n"), SyntaxError);

  Certificate v = support::cert("rev_persist", support::model("rev_persist"));
  REQUIRE(v.variant);
  CHECK(v.cuts_before_variant == 1);
  CHECK(v.cuts.size() == 2);
}

TEST_CASE("round-trip sample") {
  laws::LawReport r = laws::check_law(laws::Law::RoundTrip, 300, 11);
  CHECK_MESSAGE(r.failures == 0, r.first_failure);
}
