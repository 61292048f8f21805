#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dlcert/ast.hpp"
#include "dlcert/parser.hpp"
#include "dlcert/simulate.hpp"

namespace dlcert {

struct Violation {
  std::size_t trial = 0;
  std::size_t sample_index = 0;
  double time = 0;
  Formula formula;
  double residual = 0;
};

// Samples at which `f` is false by more than `tol`. A comparison l >= r is
// flagged only when r - l exceeds tol plus a 1e-9 relative slack; `!=` is
// never flagged. Throws MissingVariable.
std::vector<Violation> monitor(const Trace& trace, const Formula& f, double tol);

struct FalsifyOptions {
  std::size_t trials = 500;
  std::uint64_t seed = 0;
  double dt = 1e-3;
  double horizon = 5;
  std::size_t max_iterations = 100;
  double tol = 1e-9;
  bool parallel = true;
};

struct FalsifyResult {
  State params;
  SimConfig config;
  Violation violation;
};

struct FalsifyStats {
  std::size_t trials = 0;
  std::size_t skipped = 0;
};

// Property defaults to the postcondition of a box theorem. Trials whose
// parameters cannot be sampled or whose simulation fails are skipped. The
// reported violation is the one with the lowest trial index, so serial and
// parallel runs agree.
std::optional<FalsifyResult> falsify(const Model& model, const Formula& property,
                                     const FalsifyOptions& opts = {}, FalsifyStats* stats = nullptr);
std::optional<FalsifyResult> falsify(const Model& model, const FalsifyOptions& opts = {},
                                     FalsifyStats* stats = nullptr);

// Earliest sample time after which the goal holds at every later sample.
std::optional<double> empirical_persistence(const Trace& trace, const Formula& goal, double tol);

std::string violation_json(const Violation& v);

}  // namespace dlcert
