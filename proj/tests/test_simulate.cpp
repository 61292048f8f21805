#include "doctest.h"

#include <cmath>
#include <cstring>
#include <sstream>

#include "dlcert/errors.hpp"
#include "dlcert/oracle.hpp"
#include "dlcert/printer.hpp"
#include "dlcert/simulate.hpp"
#include "support.hpp"

using namespace dlcert;

namespace {

double closed_form(double t) { return 0.5 + 0.5 * std::exp(-2 * t); }

// Largest deviation from the closed form on the shared time grid.
double rev_error(double dt) {
  SimConfig cfg;
  cfg.dt = dt;
  cfg.horizon = 2;
  Trace tr = simulate(support::model("rev_basic"), {{"kf", 1}, {"kr", 1}, {"A0", 1}}, cfg);
  double worst = 0;
  for (std::size_t i = 0; i < tr.samples.size(); ++i)
    worst = std::max(worst, std::fabs(tr.value(i, "A") - closed_form(tr.samples[i].time)));
  return worst;
}

State bangbang_params() {
  return {{"kr1", 1}, {"kr2", 0.5}, {"kA", 1}, {"kB", 1}, {"kC", 1}, {"kT", 2},
          {"T", 1},   {"eps", 0.1}, {"hT", 1}, {"A0", 1}, {"B0", 1}, {"Tmax", 3},
          {"A", 1},   {"B", 1},     {"C", 0}};
}

}  // namespace

TEST_CASE("closed form of the reversible system") {
  SimConfig cfg;
  cfg.horizon = 2;
  Trace tr = simulate(support::model("rev_basic"), {{"kf", 1}, {"kr", 1}, {"A0", 1}}, cfg);
  CHECK(tr.stop_reason == StopReason::HorizonReached);
  for (double t : {0.5, 1.0, 2.0}) {
    std::size_t i = static_cast<std::size_t>(std::llround(t / cfg.dt));
    REQUIRE(i < tr.samples.size());
    CHECK(std::fabs(tr.samples[i].time - t) < 1e-12);
    CHECK(std::fabs(tr.value(i, "A") - closed_form(t)) <= 1e-6);
  }
}

TEST_CASE("fourth-order convergence") {
  double coarse = rev_error(0.1), fine = rev_error(0.05);
  double ratio = coarse / fine;
  CHECK(ratio >= 8);
  CHECK(ratio <= 32);
}

TEST_CASE("empty horizon") {
  SimConfig cfg;
  cfg.horizon = 0;
  Trace tr = simulate(support::model("rev_basic"), {{"kf", 1}, {"kr", 1}, {"A0", 1}}, cfg);
  CHECK(tr.samples.size() == 1);
  CHECK(tr.stop_reason == StopReason::HorizonReached);
  CHECK(tr.value(0, "A") == 1);
  CHECK(tr.value(0, "B") == 0);
}

TEST_CASE("determinism") {
  SimConfig cfg;
  cfg.horizon = 3;
  cfg.seed = 9;
  cfg.duration_policy = DurationPolicy::UniformRandom;
  Model m = support::model("bangbang");
  Trace a = simulate(m, bangbang_params(), cfg);
  Trace b = simulate(m, bangbang_params(), cfg);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].time == b.samples[i].time);
    REQUIRE(a.samples[i].values.size() == b.samples[i].values.size());
    // unassigned variables are NaN, so compare bit patterns
    CHECK(std::memcmp(a.samples[i].values.data(), b.samples[i].values.data(),
                      a.samples[i].values.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("bang-bang traces respect the domain and the controller") {
  Model m = support::model("bangbang");
  Formula guard = parse_formula("Tmax - T <= eps*rate*kT", m);
  for (auto policy : {DurationPolicy::MaxDomain, DurationPolicy::UniformRandom}) {
    SimConfig cfg;
    cfg.horizon = 20;
    cfg.max_iterations = 400;
    cfg.duration_policy = policy;
    Trace tr = simulate(m, bangbang_params(), cfg);
    REQUIRE(tr.samples.size() > 10);
    std::size_t last_iter = static_cast<std::size_t>(-1);
    for (std::size_t i = 0; i < tr.samples.size(); ++i) {
      State s = tr.state(i);
      if (std::isnan(s["t"])) continue;  // before the first control step
      CHECK(s["t"] <= s["eps"] + 1e-6);
      CHECK(s["A"] >= -1e-6);
      CHECK(s["T"] <= s["Tmax"] + 1e-9);
      if (tr.samples[i].iteration != last_iter && s["t"] == 0) {
        last_iter = tr.samples[i].iteration;
        Point p;
        for (const auto& [k, v] : s) p[k] = Rational(v);
        bool fires = holds_exact(guard, p).value();
        CHECK(s["isOn"] == (fires ? 0 : 1));
      }
    }
  }
}

TEST_CASE("domain exit is located") {
  SimConfig cfg;
  cfg.dt = 0.01;
  cfg.horizon = 10;
  Trace tr = simulate_program(parse_program("{x' = 1 & x <= 0.123}"), {{"x", 0}}, cfg);
  CHECK(tr.stop_reason == StopReason::DomainExit);
  CHECK(std::fabs(tr.value(tr.samples.size() - 1, "x") - 0.123) <= 1e-9);
}

TEST_CASE("loops stop at the iteration budget") {
  SimConfig cfg;
  cfg.max_iterations = 5;
  cfg.horizon = 100;
  Trace tr = simulate_program(parse_program("{x := x + 1; {t' = 1 & t <= 1} t := 0;}*"),
                              {{"x", 0}, {"t", 0}}, cfg);
  CHECK(tr.stop_reason == StopReason::LoopBudgetExhausted);
  CHECK(tr.value(tr.samples.size() - 1, "x") == 5);
}

TEST_CASE("simulation errors") {
  Model m = support::model("rev_basic");
  SimConfig cfg;
  CHECK_THROWS_AS(simulate(m, {{"kf", -1}, {"kr", 1}, {"A0", 1}}, cfg), PreconditionViolated);
  CHECK_THROWS_AS(simulate(m, {{"kf", 1}, {"A0", 1}}, cfg), MissingVariable);
  cfg.horizon = 3;
  cfg.dt = 0.01;
  CHECK_THROWS_AS(simulate_program(parse_program("{x' = x^2}"), {{"x", 1}}, cfg), NumericBlowup);
}

TEST_CASE("parameter sampling") {
  Formula c = parse_formula("kf > 0 & kr > 0 & A0 > 0");
  State s = sample_params(c, 42);
  CHECK(s.at("kf") > 0);
  CHECK(s.at("kr") > 0);
  CHECK(s.at("A0") > 0);
  CHECK(sample_params(c, 42) == s);
  CHECK_THROWS_AS(sample_params(parse_formula("eps > 0 & eps < 0"), 1), SamplingExhausted);

  Model bb = support::model("bangbang");
  State p = sample_params(bb.constants, 3);
  for (const char* k : {"kr1", "kA", "kB", "kC", "kT"}) CHECK(p.at(k) > 0);
  CHECK(p.at("kr2") >= 0);

  State fixed = sample_params(parse_formula("a > 0 & b = 2*a"), 5, {"z"});
  CHECK(fixed.at("b") == 2 * fixed.at("a"));
  CHECK(fixed.count("z") == 1);
  for (const auto& [k, v] : s) {
    CHECK(v >= 1e-2);
    CHECK(v <= 1e2);
  }
}

TEST_CASE("theorem parts") {
  TheoremParts bb = theorem_parts(support::model("bangbang"));
  CHECK(bb.box);
  CHECK(bb.program.kind() == ProgramKind::Loop);
  CHECK(bb.post == parse_formula("T <= Tmax"));
  TheoremParts rp = theorem_parts(support::model("rev_persist"));
  CHECK_FALSE(rp.box);
  CHECK(rp.post.kind() == FormulaKind::Box);
}

TEST_CASE("CSV output") {
  SimConfig cfg;
  cfg.horizon = 0.002;
  Trace tr = simulate(support::model("rev_basic"), {{"kf", 1}, {"kr", 1}, {"A0", 1}}, cfg);
  std::ostringstream out;
  write_csv(out, tr);
  std::istringstream in(out.str());
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header.rfind("time,iteration,", 0) == 0);
  CHECK(header == "time,iteration,A0,kr,kf,A,B");
  CHECK(first == "0,0,1,1,1,1,0");
  std::string line;
  std::getline(in, line);
  CHECK(std::stod(line.substr(0, line.find(','))) == tr.samples[1].time);
}
