#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dlcert/ast.hpp"
#include "dlcert/polynomial.hpp"

namespace dlcert {

enum class Verdict { Proved, Refuted, Unknown };

const char* verdict_name(Verdict v);

// Real-arithmetic proof obligation: the conjunction of `assumptions`
// implies `goal`. All formulas are first-order.
struct Obligation {
  std::vector<Formula> assumptions;
  Formula goal;
  std::string origin;
};

struct OracleOptions {
  std::uint64_t seed = 0;
  std::size_t samples = 10000;
  bool sampling = true;
  bool parallel = true;
  std::size_t node_budget = 6000;
  int max_depth = 6;
};

struct OracleResult {
  Verdict verdict = Verdict::Unknown;
  std::optional<Point> witness;
  std::string detail;
};

// Sound but incomplete decision procedure. Proved comes only from the
// symbolic stages; Refuted always carries a rational point satisfying every
// assumption exactly at which the goal is false.
OracleResult arith_oracle(const Obligation& ob, const OracleOptions& opts = {});

// The sampling stage alone. Returns the lowest violating sample index and
// the minimised point. The serial and parallel paths agree exactly.
struct SampleHit {
  std::size_t index = 0;
  Point point;
};
std::optional<SampleHit> search_counterexample(const Obligation& ob, std::uint64_t seed,
                                               std::size_t samples, bool parallel);

// Exact evaluation; nullopt when a division by zero occurs.
std::optional<Rational> eval_exact(const Term& t, const Point& at);
std::optional<bool> holds_exact(const Formula& f, const Point& at);

// Sign facts used by the symbolic stage, exposed for tests.
enum SignBits : unsigned { kNeg = 1, kZero = 2, kPos = 4, kAnySign = 7 };
using SignMap = std::map<std::string, unsigned>;
bool proves_nonnegative(const Polynomial& p, const SignMap& signs, bool strict);

}  // namespace dlcert
