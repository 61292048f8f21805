#include "dlcert/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>

#include "dlcert/errors.hpp"
#include "dlcert/printer.hpp"
#include "dlcert/seed.hpp"
#include "numeric.hpp"

namespace dlcert {

using detail::Code;
using detail::NumericFormula;
using detail::Slots;

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::HorizonReached: return "HorizonReached";
    case StopReason::DomainExit: return "DomainExit";
    case StopReason::LoopBudgetExhausted: return "LoopBudgetExhausted";
  }
  return "?";
}

State Trace::state(std::size_t i) const {
  State s;
  for (std::size_t k = 0; k < variables.size(); ++k) s[variables[k]] = samples.at(i).values[k];
  return s;
}

double Trace::value(std::size_t i, const std::string& var) const {
  for (std::size_t k = 0; k < variables.size(); ++k)
    if (variables[k] == var) return samples.at(i).values[k];
  throw MissingVariable(var);
}

namespace {

constexpr double kBlowup = 1e12;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void assigned_vars(const Program& p, std::set<std::string>& out) {
  switch (p.kind()) {
    case ProgramKind::Assign: out.insert(p.var()); return;
    case ProgramKind::Test:
    case ProgramKind::Ode: return;
    case ProgramKind::Loop: assigned_vars(p.lhs(), out); return;
    default:
      assigned_vars(p.lhs(), out);
      assigned_vars(p.rhs(), out);
  }
}

struct CProg {
  ProgramKind kind = ProgramKind::Test;
  NumericFormula cond;  // test condition or evolution domain
  int var = -1;
  Code value;
  std::vector<int> xs;
  std::vector<Code> rhs;
  std::vector<CProg> kids;
  bool has_ode = false;
};

CProg compile(const Program& p, const Slots& slots) {
  CProg c;
  c.kind = p.kind();
  switch (p.kind()) {
    case ProgramKind::Test:
      c.cond = NumericFormula(p.condition(), slots);
      break;
    case ProgramKind::Assign:
      c.var = slots.at(p.var());
      c.value = Code(p.value(), slots);
      break;
    case ProgramKind::Ode:
      for (const auto& eq : p.equations()) {
        c.xs.push_back(slots.at(eq.var));
        c.rhs.emplace_back(eq.rhs, slots);
      }
      c.cond = NumericFormula(p.domain(), slots);
      c.has_ode = true;
      break;
    case ProgramKind::Loop:
      c.kids.push_back(compile(p.lhs(), slots));
      c.has_ode = c.kids[0].has_ode;
      break;
    default:
      c.kids.push_back(compile(p.lhs(), slots));
      c.kids.push_back(compile(p.rhs(), slots));
      c.has_ode = c.kids[0].has_ode || c.kids[1].has_ode;
  }
  return c;
}

class Machine {
 public:
  Machine(const CProg& prog, std::vector<double> x0, const SimConfig& cfg)
      : prog_(prog), cfg_(cfg), x_(std::move(x0)), rng_(mix_seed(cfg.seed, 0)) {}

  std::vector<Sample> run() {
    record();
    exec(prog_);
    if (time_ >= cfg_.horizon) reason_ = StopReason::HorizonReached;
    record_if_changed();
    return std::move(samples_);
  }

  StopReason reason() const { return reason_; }

 private:
  struct Snapshot {
    std::vector<double> x;
    double time;
    std::size_t iter, used, nsamples;
    bool done;
    StopReason reason;
  };

  Snapshot save() const { return {x_, time_, iter_, used_, samples_.size(), done_, reason_}; }
  void restore(const Snapshot& s) {
    x_ = s.x;
    time_ = s.time;
    iter_ = s.iter;
    used_ = s.used;
    samples_.resize(s.nsamples);
    done_ = s.done;
    reason_ = s.reason;
  }

  void record() { samples_.push_back({time_, iter_, x_}); }
  void record_if_changed() {
    if (samples_.empty() || samples_.back().values != x_ || samples_.back().iteration != iter_)
      record();
  }

  bool exec(const CProg& p) {
    if (done_) return true;
    switch (p.kind) {
      case ProgramKind::Test:
        return p.cond.holds(x_.data());
      case ProgramKind::Assign: {
        double v = p.value.eval(x_.data());
        if (!std::isfinite(v)) throw NumericBlowup("non-finite value assigned");
        x_[p.var] = v;
        return true;
      }
      case ProgramKind::Seq:
        return exec(p.kids[0]) && exec(p.kids[1]);
      case ProgramKind::Choice: {
        bool swap = cfg_.duration_policy == DurationPolicy::UniformRandom && (rng_() & 1);
        const CProg& first = p.kids[swap ? 1 : 0];
        const CProg& second = p.kids[swap ? 0 : 1];
        Snapshot s = save();
        if (exec(first)) return true;
        restore(s);
        return exec(second);
      }
      case ProgramKind::Loop:
        while (!done_) {
          if (used_ >= cfg_.max_iterations) {
            reason_ = StopReason::LoopBudgetExhausted;
            done_ = true;
            break;
          }
          Snapshot s = save();
          ++iter_;
          ++used_;
          if (!exec(p.kids[0])) {
            restore(s);
            break;
          }
          if (!p.kids[0].has_ode) record_if_changed();
        }
        return true;
      case ProgramKind::Ode:
        return ode(p);
    }
    return false;
  }

  void derivative(const CProg& p, const std::vector<double>& y, std::vector<double>& k) const {
    for (std::size_t i = 0; i < p.xs.size(); ++i) k[i] = p.rhs[i].eval(y.data());
  }

  void rk4(const CProg& p, const std::vector<double>& y0, double h, std::vector<double>& out) {
    std::size_t n = p.xs.size();
    k1_.resize(n);
    k2_.resize(n);
    k3_.resize(n);
    k4_.resize(n);
    tmp_ = y0;
    derivative(p, y0, k1_);
    for (std::size_t i = 0; i < n; ++i) tmp_[p.xs[i]] = y0[p.xs[i]] + 0.5 * h * k1_[i];
    derivative(p, tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[p.xs[i]] = y0[p.xs[i]] + 0.5 * h * k2_[i];
    derivative(p, tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) tmp_[p.xs[i]] = y0[p.xs[i]] + h * k3_[i];
    derivative(p, tmp_, k4_);
    out = y0;
    for (std::size_t i = 0; i < n; ++i) {
      double v = y0[p.xs[i]] + h / 6 * (k1_[i] + 2 * k2_[i] + 2 * k3_[i] + k4_[i]);
      if (!std::isfinite(v) || std::fabs(v) > kBlowup)
        throw NumericBlowup("state exceeds 1e12 in magnitude");
      out[p.xs[i]] = v;
    }
  }

  // Integrates from (x, time) until `stop` or domain exit. Returns true on
  // domain exit.
  bool integrate(const CProg& p, std::vector<double>& x, double& time, double stop, bool rec) {
    const double t0 = time;
    std::vector<double> y, ym, ylo;
    for (std::size_t k = 0;; ++k) {
      double next = t0 + static_cast<double>(k + 1) * cfg_.dt;
      bool last = next >= stop - 1e-12 * std::max(1.0, std::fabs(stop));
      if (last) next = stop;
      double h = next - time;
      if (h <= 0) return false;
      rk4(p, x, h, y);
      if (!p.cond.holds(y.data())) {
        double lo = 0, hi = h;
        ylo = x;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::fabs(time)); ++it) {
          double mid = 0.5 * (lo + hi);
          rk4(p, x, mid, ym);
          if (p.cond.holds(ym.data())) {
            lo = mid;
            ylo = ym;
            if (p.cond.residual(ym.data()) > -1e-9) break;
          } else {
            hi = mid;
          }
        }
        x = ylo;
        time += lo;
        if (rec) record_state(x, time);
        return true;
      }
      x = y;
      time = next;
      if (rec) record_state(x, time);
      if (last) return false;
    }
  }

  void record_state(const std::vector<double>& x, double time) {
    samples_.push_back({time, iter_, x});
  }

  bool ode(const CProg& p) {
    if (!p.cond.holds(x_.data())) return false;
    record_if_changed();
    double stop = cfg_.horizon;
    if (cfg_.duration_policy == DurationPolicy::UniformRandom) {
      std::vector<double> x = x_;
      double t = time_;
      integrate(p, x, t, cfg_.horizon, false);
      double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
      stop = time_ + u * (t - time_);
    }
    bool exited = integrate(p, x_, time_, stop, true);
    if (exited) {
      reason_ = StopReason::DomainExit;
    } else if (time_ >= cfg_.horizon) {
      reason_ = StopReason::HorizonReached;
      done_ = true;
    }
    return true;
  }

  const CProg& prog_;
  const SimConfig& cfg_;
  std::vector<double> x_;
  double time_ = 0;
  std::size_t iter_ = 0, used_ = 0;
  bool done_ = false;
  StopReason reason_ = StopReason::HorizonReached;
  std::mt19937_64 rng_;
  std::vector<Sample> samples_;
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

void check_config(const SimConfig& cfg) {
  if (!(cfg.dt > 0)) throw Error("dt must be positive");
  if (!(cfg.horizon >= 0)) throw Error("horizon must be nonnegative");
}

// Fills unset variables from equations `x = e` whose other side is known.
void solve_equations(const std::vector<Formula>& facts, const Slots& slots, std::vector<double>& x) {
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& f : facts) {
      if (f.kind() != FormulaKind::Cmp || f.op() != CmpOp::Eq) continue;
      for (int side = 0; side < 2; ++side) {
        const Term& v = side == 0 ? f.left_term() : f.right_term();
        const Term& e = side == 0 ? f.right_term() : f.left_term();
        if (v.kind() != TermKind::Var) continue;
        int i = slots.find(v.name());
        if (i < 0 || !std::isnan(x[i])) continue;
        bool known = true;
        for (const auto& w : free_vars(e)) {
          int j = slots.find(w);
          if (j < 0 || std::isnan(x[j])) known = false;
        }
        if (!known) continue;
        x[i] = Code(e, slots).eval(x.data());
        changed = true;
        break;
      }
    }
  }
}

}  // namespace

TheoremParts theorem_parts(const Model& model) {
  const Formula& thm = model.theorem;
  if (!thm || thm.kind() != FormulaKind::Implies)
    throw ShapeUnsupported("theorem is not an implication");
  const Formula& goal = thm.rhs();
  if (goal.kind() != FormulaKind::Box && goal.kind() != FormulaKind::Diamond)
    throw ShapeUnsupported("theorem consequent is not a modality");
  return {thm.lhs(), goal.program(), goal.lhs(), goal.kind() == FormulaKind::Box};
}

Trace simulate_program(const Program& program, const State& initial, const SimConfig& cfg,
                       const std::vector<std::string>& order) {
  check_config(cfg);
  std::set<std::string> used;
  collect_vars(program, used);
  Slots slots;
  for (const auto& v : order)
    if (used.count(v) || initial.count(v)) slots.add(v);
  for (const auto& v : used) slots.add(v);
  for (const auto& [k, v] : initial) slots.add(k);
  std::vector<double> x(slots.size(), kNaN);
  for (const auto& [k, v] : initial) x[slots.at(k)] = v;
  std::set<std::string> assigned;
  assigned_vars(program, assigned);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::isnan(x[i]) && !assigned.count(slots.names()[i])) throw MissingVariable(slots.names()[i]);
  CProg prog = compile(program, slots);
  Machine m(prog, x, cfg);
  Trace tr;
  tr.variables = slots.names();
  tr.samples = m.run();
  tr.stop_reason = m.reason();
  return tr;
}

Trace simulate(const Model& model, const State& params, const SimConfig& cfg) {
  check_config(cfg);
  TheoremParts parts = theorem_parts(model);
  std::set<std::string> used = free_vars(model.theorem);
  collect_vars(parts.program, used);
  collect_vars(model.constants, used);
  Slots slots;
  for (const auto& v : model.variables)
    if (used.count(v)) slots.add(v);
  for (const auto& v : used) slots.add(v);
  for (const auto& [k, v] : params) slots.add(k);
  std::vector<double> x(slots.size(), kNaN);
  for (const auto& [k, v] : params) x[slots.at(k)] = v;

  std::vector<Formula> facts = conjuncts(parts.pre);
  solve_equations(facts, slots, x);
  for (const auto& f : facts) {
    for (const auto& v : free_vars(f))
      if (std::isnan(x[slots.at(v)])) throw MissingVariable(v);
    NumericFormula nf(f, slots);
    if (nf.residual(x.data(), 1e-9) > 1e-9) throw PreconditionViolated(to_string(f));
  }
  State init;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isnan(x[i])) init[slots.names()[i]] = x[i];
  return simulate_program(parts.program, init, cfg, slots.names());
}

State sample_params(const Formula& constraints, std::uint64_t seed,
                    const std::vector<std::string>& extra) {
  std::set<std::string> vars = free_vars(constraints);
  vars.insert(extra.begin(), extra.end());
  Slots slots(std::vector<std::string>(vars.begin(), vars.end()));
  std::vector<Formula> facts = conjuncts(constraints);

  // Variables an equation will determine are not sampled.
  std::set<std::string> determined;
  for (const auto& f : facts) {
    if (f.kind() != FormulaKind::Cmp || f.op() != CmpOp::Eq) continue;
    const Term& l = f.left_term();
    const Term& r = f.right_term();
    if (l.kind() == TermKind::Var && !determined.count(l.name()))
      determined.insert(l.name());
    else if (r.kind() == TermKind::Var && !determined.count(r.name()))
      determined.insert(r.name());
  }
  std::vector<NumericFormula> checks;
  for (const auto& f : facts) checks.emplace_back(f, slots);

  std::mt19937_64 rng(mix_seed(seed, 0));
  std::uniform_real_distribution<double> u(std::log(1e-2), std::log(1e2));
  std::vector<double> x(slots.size());
  for (int attempt = 0; attempt < 10000; ++attempt) {
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = determined.count(slots.names()[i]) ? kNaN : std::exp(u(rng));
    try {
      solve_equations(facts, slots, x);
    } catch (const NumericBlowup&) {
      continue;
    }
    bool ok = std::none_of(x.begin(), x.end(), [](double v) { return std::isnan(v); });
    for (const auto& c : checks) {
      if (!ok) break;
      try {
        ok = c.holds(x.data());
      } catch (const NumericBlowup&) {
        ok = false;
      }
    }
    if (!ok) continue;
    State s;
    for (std::size_t i = 0; i < x.size(); ++i) s[slots.names()[i]] = x[i];
    return s;
  }
  throw SamplingExhausted("no parameters satisfying " + to_string(constraints) +
                          " after 10000 samples");
}

void write_csv(std::ostream& out, const Trace& trace) {
  out << "time,iteration";
  for (const auto& v : trace.variables) out << ',' << v;
  out << '\n';
  char buf[64];
  for (const auto& s : trace.samples) {
    std::snprintf(buf, sizeof buf, "%.17g", s.time);
    out << buf << ',' << s.iteration;
    for (double v : s.values) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace dlcert
