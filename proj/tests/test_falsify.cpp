#include "doctest.h"

#include <cmath>

#include "dlcert/errors.hpp"
#include "dlcert/falsify.hpp"
#include "dlcert/printer.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace dlcert;

namespace {

Model mutant(const std::string& entry, const std::string& name) {
  return parse_model(read_file(support::corpus_dir() / entry / "mutants" / name / "model.dlm"));
}

}  // namespace

TEST_CASE("monitor") {
  Model bb = support::model("bangbang");
  SimConfig cfg;
  cfg.horizon = 10;
  cfg.max_iterations = 300;
  State p = {{"kr1", 2},  {"kr2", 0.5}, {"kA", 1}, {"kB", 1},  {"kC", 1},
             {"kT", 3},   {"T", 1},     {"eps", 0.05}, {"hT", 1}, {"A0", 1},
             {"B0", 1},   {"Tmax", 2},  {"A", 1},  {"B", 1},   {"C", 0}};
  CHECK(monitor(simulate(bb, p, cfg), parse_formula("T <= Tmax"), 1e-9).empty());

  SimConfig c2;
  c2.horizon = 0.01;
  Trace flat = simulate_program(parse_program("{A' = 0}"), {{"A", 1}}, c2);
  auto v = monitor(flat, parse_formula("A <= 0"), 1e-9);
  CHECK(v.size() == flat.samples.size());
  for (const auto& x : v) CHECK(std::fabs(x.residual - 1) < 1e-6);
  CHECK(monitor(flat, parse_formula("A != 1"), 1e-9).empty());
  CHECK(monitor(flat, parse_formula("A >= 1"), 1e-9).empty());
  CHECK_THROWS_AS(monitor(flat, parse_formula("q > 0"), 1e-9), MissingVariable);

  Trace rev = simulate(support::model("rev_basic"), {{"kf", 1}, {"kr", 1}, {"A0", 1}}, SimConfig{});
  CHECK(monitor(rev, parse_formula("A <= A0"), 1e-9).empty());
}

TEST_CASE("falsify finds the under-predicting guard") {
  FalsifyStats stats;
  auto hit = falsify(mutant("bangbang", "halfguard"), FalsifyOptions{}, &stats);
  REQUIRE(hit);
  CHECK(to_string(hit->violation.formula) == "T <= Tmax");
  CHECK(hit->violation.residual > 1e-9);
  CHECK(hit->params.count("kT") == 1);
}

TEST_CASE("falsify stays quiet on the safe controller") {
  FalsifyStats stats;
  CHECK_FALSE(falsify(support::model("bangbang"), FalsifyOptions{}, &stats));
  CHECK(stats.trials == 500);
  CHECK(stats.skipped < 50);
}

TEST_CASE("a false property fails at the first sample") {
  FalsifyOptions o;
  o.trials = 1;
  auto hit = falsify(support::model("rev_basic"), Formula::falsity(), o);
  REQUIRE(hit);
  CHECK(hit->violation.trial == 0);
  CHECK(hit->violation.sample_index == 0);
  CHECK(hit->violation.time == 0);
}

TEST_CASE("determinism per seed") {
  FalsifyOptions o;
  o.trials = 200;
  o.seed = 4;
  Model m = mutant("bangbang", "flipguard");
  auto a = falsify(m, o), b = falsify(m, o);
  REQUIRE(a.has_value() == b.has_value());
  if (a) {
    CHECK(a->violation.trial == b->violation.trial);
    CHECK(a->violation.residual == b->violation.residual);
    CHECK(a->params == b->params);
  }
}

TEST_CASE("persistence") {
  Model m = support::model("rev_persist");
  SimConfig cfg;
  cfg.horizon = 3;
  Trace tr = simulate(m, {{"kf", 1}, {"kr", 1}, {"A0", 1}, {"eps", 0.1}}, cfg);
  Formula goal = theorem_parts(m).post.lhs();
  auto t = empirical_persistence(tr, goal, 1e-12);
  REQUIRE(t);
  CHECK(std::fabs(*t - std::log(5.0) / 2) <= 2 * cfg.dt);

  CHECK(empirical_persistence(tr, Formula::truth(), 0) == 0.0);

  SimConfig c2;
  c2.horizon = 1;
  Trace grow = simulate_program(parse_program("{x' = 1}"), {{"x", 0}}, c2);
  CHECK_FALSE(empirical_persistence(grow, parse_formula("x <= 0.5"), 1e-9));
}

TEST_CASE("violation JSON") {
  Violation v;
  v.trial = 3;
  v.time = 0.25;
  v.formula = parse_formula("T <= Tmax");
  v.residual = 0.5;
  auto j = nlohmann::json::parse(violation_json(v));
  CHECK(j["trial"] == 3);
  CHECK(j["time"] == 0.25);
  CHECK(j["formula"] == "T <= Tmax");
  CHECK(j["residual"] == 0.5);
}
