#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dlcert/ast.hpp"
#include "dlcert/parser.hpp"

namespace dlcert {

using State = std::map<std::string, double>;

enum class DurationPolicy { MaxDomain, UniformRandom };

struct SimConfig {
  double dt = 1e-3;
  double horizon = 10;
  std::size_t max_iterations = 1000;
  std::uint64_t seed = 0;
  DurationPolicy duration_policy = DurationPolicy::MaxDomain;
};

enum class StopReason { HorizonReached, DomainExit, LoopBudgetExhausted };

const char* stop_reason_name(StopReason r);

struct Sample {
  double time = 0;
  std::size_t iteration = 0;
  std::vector<double> values;  // aligned with Trace::variables
};

struct Trace {
  std::vector<std::string> variables;
  std::vector<Sample> samples;
  StopReason stop_reason = StopReason::HorizonReached;

  State state(std::size_t i) const;
  double value(std::size_t i, const std::string& var) const;  // throws MissingVariable
};

// Runs the program of the model's theorem from the state given by `params`
// plus values forced by equations in the theorem's antecedent. Throws
// PreconditionViolated, MissingVariable, NumericBlowup.
Trace simulate(const Model& model, const State& params, const SimConfig& cfg);

// Runs `program` from `initial`; every variable read before being assigned
// must have a value.
Trace simulate_program(const Program& program, const State& initial, const SimConfig& cfg,
                       const std::vector<std::string>& order = {});

// The program a theorem talks about and the formula it must satisfy: for
// P -> [a]Q gives (a, Q), for P -> <a>Q gives (a, Q) with Q possibly modal.
struct TheoremParts {
  Formula pre;
  Program program;
  Formula post;
  bool box = true;
};
TheoremParts theorem_parts(const Model& model);

// Rejection sampling, log-uniform in [1e-2, 1e2], of the free variables of
// `constraints` plus `extra`. Variables fixed by an equation `x = e` are
// computed rather than sampled. Throws SamplingExhausted.
State sample_params(const Formula& constraints, std::uint64_t seed,
                    const std::vector<std::string>& extra = {});

void write_csv(std::ostream& out, const Trace& trace);

}  // namespace dlcert
