#include "dlcert/falsify.hpp"

#include <random>

#include "json.hpp"

#include "dlcert/errors.hpp"
#include "dlcert/printer.hpp"
#include "dlcert/seed.hpp"
#include "numeric.hpp"

namespace dlcert {

namespace {

constexpr double kRelTol = 1e-9;

// One simulated trial: sampled parameters, a duration policy and a trace.
struct Trial {
  bool skipped = true;
  std::optional<FalsifyResult> hit;
};

Trial run_trial(const Model& model, const TheoremParts& parts, const Formula& property,
                const std::vector<std::string>& extra, const FalsifyOptions& opts,
                std::size_t index) {
  Trial out;
  std::uint64_t s = mix_seed(opts.seed, index);
  SimConfig cfg;
  cfg.dt = opts.dt;
  cfg.horizon = opts.horizon;
  cfg.max_iterations = opts.max_iterations;
  cfg.seed = s;
  cfg.duration_policy =
      (std::mt19937_64(s)() & 1) ? DurationPolicy::UniformRandom : DurationPolicy::MaxDomain;
  try {
    State params = sample_params(parts.pre, s, extra);
    Trace tr = simulate(model, params, cfg);
    out.skipped = false;
    auto vs = monitor(tr, property, opts.tol);
    if (!vs.empty()) {
      vs.front().trial = index;
      out.hit = FalsifyResult{params, cfg, vs.front()};
    }
  } catch (const Error&) {
    out.skipped = true;
  }
  return out;
}

}  // namespace

std::vector<Violation> monitor(const Trace& trace, const Formula& f, double tol) {
  detail::Slots slots(trace.variables);
  detail::NumericFormula nf(f, slots);
  std::vector<Violation> out;
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    double r = nf.residual(trace.samples[i].values.data(), kRelTol);
    if (r > tol) out.push_back({0, i, trace.samples[i].time, f, r});
  }
  return out;
}

std::optional<FalsifyResult> falsify(const Model& model, const Formula& property,
                                     const FalsifyOptions& opts, FalsifyStats* stats) {
  TheoremParts parts = theorem_parts(model);
  // Variables the program reads without assigning them also need values.
  std::set<std::string> read;
  collect_vars(parts.program, read);
  collect_vars(property, read);
  std::set<std::string> assigned;
  std::vector<std::string> extra;
  {
    std::set<std::string> pre = free_vars(parts.pre);
    std::vector<Program> stack{parts.program};
    while (!stack.empty()) {
      Program p = stack.back();
      stack.pop_back();
      if (p.kind() == ProgramKind::Assign) assigned.insert(p.var());
      else if (p.kind() == ProgramKind::Loop) stack.push_back(p.lhs());
      else if (p.kind() == ProgramKind::Seq || p.kind() == ProgramKind::Choice) {
        stack.push_back(p.lhs());
        stack.push_back(p.rhs());
      }
    }
    for (const auto& v : read)
      if (!assigned.count(v) && !pre.count(v)) extra.push_back(v);
  }

  const std::size_t n = opts.trials;
  std::size_t found = n;
  std::optional<FalsifyResult> best;
  std::size_t skipped = 0;

  if (opts.parallel) {
    // Blocks keep the lowest violating index without running every trial.
    constexpr std::size_t kBlock = 64;
    for (std::size_t base = 0; base < n && found == n; base += kBlock) {
      std::size_t end = std::min(n, base + kBlock);
      std::vector<Trial> block(end - base);
#pragma omp parallel for schedule(dynamic)
      for (std::size_t i = base; i < end; ++i)
        block[i - base] = run_trial(model, parts, property, extra, opts, i);
      for (std::size_t i = base; i < end; ++i) {
        Trial& t = block[i - base];
        if (t.skipped) ++skipped;
        if (t.hit) {
          found = i;
          best = std::move(t.hit);
          break;
        }
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      Trial t = run_trial(model, parts, property, extra, opts, i);
      if (t.skipped) ++skipped;
      if (t.hit) {
        found = i;
        best = std::move(t.hit);
        break;
      }
    }
  }
  if (stats) {
    stats->trials = found == n ? n : found + 1;
    stats->skipped = skipped;
  }
  return best;
}

std::optional<FalsifyResult> falsify(const Model& model, const FalsifyOptions& opts,
                                     FalsifyStats* stats) {
  TheoremParts parts = theorem_parts(model);
  if (!parts.box || !is_first_order(parts.post))
    throw ShapeUnsupported("falsification needs a box theorem with a first-order postcondition");
  return falsify(model, parts.post, opts, stats);
}

std::optional<double> empirical_persistence(const Trace& trace, const Formula& goal, double tol) {
  if (trace.samples.empty()) return std::nullopt;
  detail::Slots slots(trace.variables);
  detail::NumericFormula nf(goal, slots);
  std::size_t i = trace.samples.size();
  while (i > 0 && nf.residual(trace.samples[i - 1].values.data(), kRelTol) <= tol) --i;
  if (i == trace.samples.size()) return std::nullopt;
  return trace.samples[i].time;
}

std::string violation_json(const Violation& v) {
  nlohmann::json j;
  j["trial"] = v.trial;
  j["time"] = v.time;
  j["formula"] = to_string(v.formula);
  j["residual"] = v.residual;
  return j.dump();
}

}  // namespace dlcert
