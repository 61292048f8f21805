#include "dlcert/certify.hpp"

#include <functional>

#include "dlcert/errors.hpp"
#include "dlcert/printer.hpp"
#include "dlcert/seed.hpp"

namespace dlcert {

// ---- symbolic execution ----

namespace {

std::optional<bool> ground_value(const Formula& f) {
  if (!free_vars(f).empty() || !is_first_order(f)) return std::nullopt;
  return holds_exact(f, {});
}

void exec(const Program& p, std::vector<SymbolicPath>& paths) {
  switch (p.kind()) {
    case ProgramKind::Test: {
      std::vector<SymbolicPath> kept;
      for (auto& path : paths) {
        Formula c = substitute(p.condition(), path.store);
        auto g = ground_value(c);
        if (g && !*g) continue;
        if (!g && c.kind() != FormulaKind::True)
          path.condition =
              path.condition.kind() == FormulaKind::True ? c : Formula::conj(path.condition, c);
        kept.push_back(std::move(path));
      }
      paths = std::move(kept);
      return;
    }
    case ProgramKind::Assign:
      for (auto& path : paths) {
        Term v = substitute(p.value(), path.store);
        path.store[p.var()] = v;
      }
      return;
    case ProgramKind::Seq:
      exec(p.lhs(), paths);
      exec(p.rhs(), paths);
      return;
    case ProgramKind::Choice: {
      std::vector<SymbolicPath> left = paths;
      std::vector<SymbolicPath> right = paths;
      exec(p.lhs(), left);
      exec(p.rhs(), right);
      paths = std::move(left);
      paths.insert(paths.end(), right.begin(), right.end());
      return;
    }
    case ProgramKind::Ode:
    case ProgramKind::Loop:
      throw UnsupportedConstruct("symbolic execution of " + to_string(p));
  }
}

}  // namespace

std::vector<SymbolicPath> symbolic_exec(const Program& ctrl, const Formula& post) {
  std::vector<SymbolicPath> paths{{Formula::truth(), {}, post}};
  exec(ctrl, paths);
  for (auto& path : paths) path.post = substitute(post, path.store);
  return paths;
}

// ---- min/max branches ----

namespace {

void branches_of(const Term& t, std::vector<MinMaxBranch>& out) {
  switch (t.kind()) {
    case TermKind::Var:
    case TermKind::Lit:
      out.push_back({{}, t});
      return;
    case TermKind::Neg:
    case TermKind::Pow: {
      std::vector<MinMaxBranch> inner;
      branches_of(t.lhs(), inner);
      for (auto& b : inner)
        out.push_back({b.conditions, t.kind() == TermKind::Neg ? Term::neg(b.term)
                                                               : Term::pow(b.term, t.exponent())});
      return;
    }
    default: {
      std::vector<MinMaxBranch> ls, rs;
      branches_of(t.lhs(), ls);
      branches_of(t.rhs(), rs);
      for (const auto& l : ls)
        for (const auto& r : rs) {
          std::vector<Formula> conds = l.conditions;
          conds.insert(conds.end(), r.conditions.begin(), r.conditions.end());
          switch (t.kind()) {
            case TermKind::Add: out.push_back({conds, Term::add(l.term, r.term)}); break;
            case TermKind::Sub: out.push_back({conds, Term::sub(l.term, r.term)}); break;
            case TermKind::Mul: out.push_back({conds, Term::mul(l.term, r.term)}); break;
            case TermKind::Div: out.push_back({conds, Term::div(l.term, r.term)}); break;
            case TermKind::Min:
            case TermKind::Max: {
              CmpOp op = t.kind() == TermKind::Min ? CmpOp::Le : CmpOp::Ge;
              auto a = conds;
              a.push_back(Formula::cmp(l.term, op, r.term));
              out.push_back({a, l.term});
              auto b = conds;
              b.push_back(Formula::cmp(r.term, op, l.term));
              out.push_back({b, r.term});
              break;
            }
            default:
              break;
          }
        }
    }
  }
}

}  // namespace

std::vector<MinMaxBranch> min_max_branches(const Term& t) {
  std::vector<MinMaxBranch> out;
  branches_of(t, out);
  return out;
}

// ---- checking machinery ----

namespace {

Term zero() { return Term::lit(0); }

Formula ge0(const Term& t) { return Formula::cmp(t, CmpOp::Ge, zero()); }

Term over(const Polynomial& num, const Polynomial& den) {
  if (den == Polynomial(Rational(1))) return num.to_term();
  return Term::div(num.to_term(), den.to_term());
}

class Checker {
 public:
  explicit Checker(const CheckOptions& opts) : opts_(opts) {}

  Verdict discharge(const std::string& origin, const std::vector<Formula>& as, const Formula& goal,
                    bool sampling = true) {
    OracleOptions o;
    o.seed = mix_seed(opts_.seed, counter_++);
    o.samples = opts_.samples;
    o.parallel = opts_.parallel;
    o.sampling = sampling;
    OracleResult r = arith_oracle({as, goal, origin}, o);
    add(origin, goal, r.verdict, r.witness, r.detail);
    return r.verdict;
  }

  // Symbolic attempt that leaves no trace in the report.
  bool quietly_proves(const std::vector<Formula>& as, const Formula& goal) {
    OracleOptions o;
    o.sampling = false;
    return arith_oracle({as, goal, ""}, o).verdict == Verdict::Proved;
  }

  void add(const std::string& origin, const Formula& goal, Verdict v,
           std::optional<Point> witness = std::nullopt, std::string detail = {},
           bool skipped = false) {
    ObligationReport r;
    r.origin = origin;
    r.goal = goal ? to_string(goal) : std::string();
    r.verdict = v;
    r.witness = std::move(witness);
    r.detail = std::move(detail);
    r.skipped = skipped;
    reports_.push_back(std::move(r));
    goals_.push_back(goal);
  }

  Verdict unknown(const std::string& origin, const Formula& goal, const std::string& why) {
    add(origin, goal, Verdict::Unknown, std::nullopt, why);
    return Verdict::Unknown;
  }

  CertResult finish(std::optional<std::size_t> failed_step = std::nullopt) const {
    CertResult res;
    res.obligations = reports_;
    res.failed_step = failed_step;
    for (std::size_t i = 0; i < reports_.size(); ++i) {
      const auto& r = reports_[i];
      if (r.skipped || r.verdict == Verdict::Proved) continue;
      res.verdict = r.verdict;
      res.witness = r.witness;
      res.reason = r.origin + ": " + (r.detail.empty() ? "not proved" : r.detail);
      if (goals_[i]) res.obligation = goals_[i];
      break;
    }
    return res;
  }

  const CheckOptions& options() const { return opts_; }

 private:
  CheckOptions opts_;
  std::size_t counter_ = 0;
  std::vector<ObligationReport> reports_;
  std::vector<Formula> goals_;
};

std::function<bool(const std::string&)> state_of(const VectorField& vf) {
  return [&vf](const std::string& v) { return vf.has(v); };
}

bool all_proved(const std::vector<Verdict>& vs) {
  for (auto v : vs)
    if (v != Verdict::Proved) return false;
  return true;
}

std::vector<Formula> with(std::vector<Formula> as, const std::vector<Formula>& more) {
  as.insert(as.end(), more.begin(), more.end());
  return as;
}

std::vector<Formula> with(std::vector<Formula> as, const Formula& f) {
  as.push_back(f);
  return as;
}

Verdict di_eq_branches(Checker& c, const std::vector<MinMaxBranch>& branches, std::size_t expected,
                       const VectorField& vf, const std::vector<Formula>& as,
                       const std::string& origin) {
  if (branches.size() < expected) {
    return c.unknown(origin, Formula(),
                     "only " + std::to_string(branches.size()) + " of " +
                         std::to_string(expected) + " min/max branches covered");
  }
  std::vector<Verdict> vs;
  for (std::size_t k = 0; k < branches.size(); ++k) {
    std::string name = branches.size() > 1 ? origin + "[branch " + std::to_string(k + 1) + "]"
                                           : origin;
    const Term& t = branches[k].term;
    Formula goal = Formula::cmp(Term::var("d/dt"), CmpOp::Eq, zero());
    Fraction f;
    Polynomial lie;
    try {
      f = to_fraction(t, state_of(vf));
      lie = lie_derivative(f.num, vf);
    } catch (const Error& e) {
      vs.push_back(c.unknown(name, Formula::cmp(t, CmpOp::Eq, zero()), e.what()));
      continue;
    }
    goal = Formula::cmp(lie.to_term(), CmpOp::Eq, zero());
    if (lie.is_zero()) {
      c.add(name, goal, Verdict::Proved, std::nullopt, "Lie derivative vanishes identically");
      vs.push_back(Verdict::Proved);
    } else {
      vs.push_back(c.discharge(name, as, goal));
    }
  }
  return all_proved(vs) ? Verdict::Proved
                        : (std::find(vs.begin(), vs.end(), Verdict::Refuted) != vs.end()
                               ? Verdict::Refuted
                               : Verdict::Unknown);
}

Verdict di_eq(Checker& c, const Term& diff, const VectorField& vf, const std::vector<Formula>& as,
              const std::string& origin) {
  auto branches = min_max_branches(diff);
  return di_eq_branches(c, branches, branches.size(), vf, as, origin);
}

Verdict di_ineq(Checker& c, const Formula& cmp, const VectorField& vf,
                const std::vector<Formula>& as, const std::string& origin) {
  if (cmp.kind() != FormulaKind::Cmp) return c.unknown(origin, cmp, "not a comparison");
  const Term& l = cmp.left_term();
  const Term& r = cmp.right_term();
  switch (cmp.op()) {
    case CmpOp::Eq:
      return di_eq(c, Term::sub(l, r), vf, as, origin);
    case CmpOp::Ne:
      return c.unknown(origin, cmp, "differential invariants do not cover '!='");
    default:
      break;
  }
  if (contains_min_max(cmp)) return c.unknown(origin, cmp, "min/max in a differential inequality");
  bool up = cmp.op() == CmpOp::Ge || cmp.op() == CmpOp::Gt;
  Term p = up ? Term::sub(l, r) : Term::sub(r, l);
  try {
    Fraction f = to_fraction(p, state_of(vf));
    Polynomial lie = lie_derivative(f.num, vf);
    return c.discharge(origin, as, ge0(over(lie, f.den)));
  } catch (const Error& e) {
    return c.unknown(origin, cmp, e.what());
  }
}

Verdict darboux(Checker& c, const Term& p, const Term& g, const VectorField& vf,
                const std::vector<Formula>& as, const std::string& origin) {
  if (contains_min_max(p) || contains_min_max(g))
    return c.unknown(origin, ge0(p), "min/max in a Darboux inequality");
  try {
    Fraction f = to_fraction(p, state_of(vf));
    Polynomial lie = lie_derivative(f.num, vf);
    Term premise;
    try {
      Polynomial gp = to_polynomial(g);
      premise = over(lie - gp * f.num, f.den);
    } catch (const NotPolynomial&) {
      premise = Term::sub(over(lie, f.den), Term::mul(g, over(f.num, f.den)));
    }
    return c.discharge(origin, as, ge0(premise));
  } catch (const Error& e) {
    return c.unknown(origin, ge0(p), e.what());
  }
}

bool affine_in_state(const VectorField& vf) {
  for (const auto& [x, f] : vf.rhs)
    for (const auto& [m, coef] : f.terms()) {
      unsigned d = 0;
      for (const auto& [v, e] : m.factors())
        if (vf.has(v)) d += e;
      if (d > 1) return false;
    }
  return true;
}

Verdict dv(Checker& c, const Term& p, const Term& d, const VectorField& vf,
           const std::vector<Formula>& as, const Formula& constants, const std::string& origin) {
  for (const auto& v : free_vars(d))
    if (vf.has(v)) return c.unknown(origin + ".bound", Formula::cmp(d, CmpOp::Gt, zero()),
                                    "bound mentions ODE variable '" + v + "'");
  if (!affine_in_state(vf))
    throw SideConditionUnsupported(
        "global existence of solutions is only established for right-hand sides affine in the ODE "
        "variables");
  c.add(origin + ".global", Formula::truth(), Verdict::Proved, std::nullopt,
        "right-hand sides are affine in the ODE variables");
  if (contains_min_max(p)) return c.unknown(origin, ge0(p), "min/max in a variant");
  Verdict vb = c.discharge(origin + ".bound", conjuncts(constants),
                           Formula::cmp(d, CmpOp::Gt, zero()));
  Verdict vp;
  try {
    Fraction f = to_fraction(p, state_of(vf));
    Polynomial lie = lie_derivative(f.num, vf);
    std::vector<Formula> a2 = with(as, vf.domain);
    a2.push_back(Formula::cmp(p, CmpOp::Lt, zero()));
    vp = c.discharge(origin + ".progress", a2, ge0(Term::sub(over(lie, f.den), d)));
  } catch (const Error& e) {
    vp = c.unknown(origin + ".progress", ge0(p), e.what());
  }
  return vb == Verdict::Proved && vp == Verdict::Proved ? Verdict::Proved
         : (vb == Verdict::Refuted || vp == Verdict::Refuted) ? Verdict::Refuted
                                                               : Verdict::Unknown;
}

// Premise of one cut; conjunctions are checked conjunct by conjunct.
Verdict cut_premise(Checker& c, const Formula& formula, CutMethod method, const Term& cofactor,
                    const VectorField& vf, const std::vector<Formula>& as,
                    const std::string& origin) {
  auto parts = conjuncts(formula);
  std::vector<Verdict> vs;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Formula& f = parts[k];
    std::string name = origin + "." + method_name(method) +
                       (parts.size() > 1 ? "[" + std::to_string(k + 1) + "]" : "");
    if (method == CutMethod::DomainConstraint) {
      vs.push_back(c.discharge(name, with(as, vf.domain), f));
      continue;
    }
    if (f.kind() != FormulaKind::Cmp) {
      vs.push_back(c.unknown(name, f, "cut conjunct is not a comparison"));
      continue;
    }
    switch (method) {
      case CutMethod::DIEq:
        if (f.op() != CmpOp::Eq)
          vs.push_back(c.unknown(name, f, "di_eq needs an equation"));
        else
          vs.push_back(di_eq(c, Term::sub(f.left_term(), f.right_term()), vf, as, name));
        break;
      case CutMethod::DIIneq:
        vs.push_back(di_ineq(c, f, vf, as, name));
        break;
      case CutMethod::Darboux: {
        CmpOp op = f.op();
        if (op == CmpOp::Eq || op == CmpOp::Ne) {
          vs.push_back(c.unknown(name, f, "darboux needs an inequality"));
          break;
        }
        bool up = op == CmpOp::Ge || op == CmpOp::Gt;
        Term p = up ? Term::sub(f.left_term(), f.right_term())
                    : Term::sub(f.right_term(), f.left_term());
        vs.push_back(darboux(c, p, cofactor, vf, as, name));
        break;
      }
      default:
        break;
    }
  }
  return all_proved(vs) ? Verdict::Proved
                        : (std::find(vs.begin(), vs.end(), Verdict::Refuted) != vs.end()
                               ? Verdict::Refuted
                               : Verdict::Unknown);
}

}  // namespace

// ---- public single-rule checks ----

CertResult check_di_eq(const Term& difference, const VectorField& vf,
                       const std::vector<Formula>& assumptions, const CheckOptions& opts) {
  Checker c(opts);
  di_eq(c, difference, vf, assumptions, "di_eq");
  return c.finish();
}

CertResult check_di_eq(const Polynomial& difference, const VectorField& vf,
                       const std::vector<Formula>& assumptions, const CheckOptions& opts) {
  return check_di_eq(difference.to_term(), vf, assumptions, opts);
}

CertResult check_di_eq_branches(const std::vector<MinMaxBranch>& branches,
                                std::size_t expected_branches, const VectorField& vf,
                                const std::vector<Formula>& assumptions,
                                const CheckOptions& opts) {
  Checker c(opts);
  di_eq_branches(c, branches, expected_branches, vf, assumptions, "di_eq");
  return c.finish();
}

CertResult check_di_ineq(const Formula& comparison, const VectorField& vf,
                         const std::vector<Formula>& assumptions, const CheckOptions& opts) {
  Checker c(opts);
  di_ineq(c, comparison, vf, with(assumptions, vf.domain), "di_ineq");
  return c.finish();
}

CertResult check_darboux(const Term& p, const Term& cofactor, const VectorField& vf,
                         const std::vector<Formula>& assumptions, const CheckOptions& opts) {
  Checker c(opts);
  darboux(c, p, cofactor, vf, with(assumptions, vf.domain), "darboux");
  return c.finish();
}

CertResult check_dv(const Term& progress, const Term& bound, const VectorField& vf,
                    const std::vector<Formula>& assumptions, const Formula& constants,
                    const CheckOptions& opts) {
  Checker c(opts);
  dv(c, progress, bound, vf, assumptions, constants, "dv");
  return c.finish();
}

CertResult check_cut_chain(const std::vector<CutStep>& cuts, const VectorField& vf,
                           const std::vector<Formula>& base_assumptions,
                           const CheckOptions& opts) {
  Checker c(opts);
  std::vector<Formula> as = with(base_assumptions, vf.domain);
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    Verdict v = cut_premise(c, cuts[i].formula, cuts[i].method, cuts[i].cofactor, vf, as,
                            "cut[" + std::to_string(i) + "]");
    if (v != Verdict::Proved) return c.finish(i);
    as.push_back(cuts[i].formula);
  }
  return c.finish();
}

// ---- theorem checking ----

namespace {

std::string at_symbol(const std::string& v, int stage) { return v + "@" + std::to_string(stage); }

Substitution renaming(const std::set<std::string>& vars, int stage) {
  Substitution s;
  for (const auto& v : vars) s[v] = Term::var(at_symbol(v, stage));
  return s;
}

std::vector<Formula> subst_all(const std::vector<Formula>& fs, const Substitution& s) {
  std::vector<Formula> out;
  for (const auto& f : fs) out.push_back(substitute(f, s));
  return out;
}

// One continuous phase: an ODE entered from a known symbolic state.
struct Phase {
  Program ode;                     // with discrete values substituted
  Substitution init;               // ODE variable -> initial value
  std::vector<Formula> constant;   // facts about symbols fixed during the phase
  std::vector<Formula> invariant;  // facts about the current state, valid throughout
};

struct PhaseOutcome {
  bool ok = true;
  std::vector<Formula> established;  // cut formulas, current-state
};

PhaseOutcome run_cuts(Checker& c, const Phase& ph, const VectorField& vf,
                      const std::vector<CutStep>& cuts, const Substitution& kappa,
                      const std::string& prefix) {
  PhaseOutcome out;
  const Formula& domain = ph.ode.domain();
  Formula domain_init = substitute(domain, ph.init);
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    std::string name = prefix + ".cut[" + std::to_string(i) + "]";
    Formula cut = substitute(cuts[i].formula, kappa);
    Term cofactor = cuts[i].cofactor ? substitute(cuts[i].cofactor, kappa) : Term();
    std::vector<Formula> init_as = with(ph.constant, domain_init);
    init_as = with(init_as, subst_all(ph.invariant, ph.init));
    init_as = with(init_as, subst_all(out.established, ph.init));
    Formula cut_init = substitute(cut, ph.init);
    if (!c.quietly_proves(init_as, cut_init)) {
      c.add(name + ".init", cut_init, Verdict::Unknown, std::nullopt,
            "initial condition does not hold on this path; cut not used", true);
      continue;
    }
    c.add(name + ".init", cut_init, Verdict::Proved);
    std::vector<Formula> as = with(ph.constant, ph.invariant);
    as = with(as, domain);
    as = with(as, out.established);
    if (cut_premise(c, cut, cuts[i].method, cofactor, vf, as, name) != Verdict::Proved) {
      out.ok = false;
      return out;
    }
    out.established.push_back(cut);
  }
  return out;
}

// Proves the postcondition after the ODE: first arithmetically from the
// established cuts, otherwise by a differential invariant per conjunct.
bool prove_post(Checker& c, const Phase& ph, const VectorField& vf,
                const std::vector<Formula>& established, const Formula& post,
                const std::string& prefix) {
  std::vector<Formula> as = with(ph.constant, ph.invariant);
  as = with(as, ph.ode.domain());
  as = with(as, established);
  for (const auto& f : established)
    if (f == post) {
      c.add(prefix + ".post", post, Verdict::Proved, std::nullopt, "established by a cut");
      return true;
    }
  if (c.quietly_proves(as, post)) {
    c.add(prefix + ".post", post, Verdict::Proved, std::nullopt, "arithmetic");
    return true;
  }
  auto parts = conjuncts(post);
  bool ok = true;
  Formula domain_init = substitute(ph.ode.domain(), ph.init);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Formula& f = parts[k];
    std::string name = prefix + ".post" + (parts.size() > 1 ? "[" + std::to_string(k + 1) + "]" : "");
    if (c.quietly_proves(as, f)) {
      c.add(name, f, Verdict::Proved, std::nullopt, "arithmetic");
      continue;
    }
    bool di_applicable = f.kind() == FormulaKind::Cmp && f.op() != CmpOp::Ne &&
                         !(f.op() == CmpOp::Eq ? false : contains_min_max(f));
    if (!di_applicable) {
      ok = c.discharge(name, as, f) == Verdict::Proved && ok;
      continue;
    }
    std::vector<Formula> init_as = with(ph.constant, domain_init);
    init_as = with(init_as, subst_all(ph.invariant, ph.init));
    init_as = with(init_as, subst_all(established, ph.init));
    Formula f_init = substitute(f, ph.init);
    if (!c.quietly_proves(init_as, f_init)) {
      // Neither route applies; report the arithmetic obligation with a witness.
      ok = c.discharge(name, as, f) == Verdict::Proved && ok;
      continue;
    }
    c.add(name + ".init", f_init, Verdict::Proved);
    ok = (f.op() == CmpOp::Eq
              ? di_eq(c, Term::sub(f.left_term(), f.right_term()), vf, as, name + ".di")
              : di_ineq(c, f, vf, as, name + ".di")) == Verdict::Proved &&
         ok;
  }
  return ok;
}

struct StepShape {
  std::optional<Program> discrete;
  std::optional<Program> ode;
};

StepShape split_step(const Program& p) {
  if (p.kind() == ProgramKind::Ode) return {std::nullopt, p};
  if (is_discrete(p)) return {p, std::nullopt};
  if (p.kind() == ProgramKind::Seq && p.rhs().kind() == ProgramKind::Ode && is_discrete(p.lhs()))
    return {p.lhs(), p.rhs()};
  throw ShapeUnsupported("expected a discrete program followed by at most one ODE, got " +
                         to_string(p));
}

// [D; ode] post from facts gamma about the pre-state.
void box_step(Checker& c, const std::vector<Formula>& gamma, const StepShape& shape,
              const Formula& post, const std::vector<CutStep>& cuts, const std::string& prefix) {
  std::vector<SymbolicPath> paths =
      shape.discrete ? symbolic_exec(*shape.discrete, Formula::truth())
                     : std::vector<SymbolicPath>{{Formula::truth(), {}, Formula::truth()}};
  if (!shape.ode) {
    for (std::size_t k = 0; k < paths.size(); ++k)
      c.discharge(prefix + ".path[" + std::to_string(k + 1) + "].post",
                  with(gamma, paths[k].condition), substitute(post, paths[k].store));
    return;
  }
  const Program& ode = *shape.ode;
  std::set<std::string> xs = ode_vars(ode);
  std::set<std::string> assigned = shape.discrete ? bound_vars(*shape.discrete) : std::set<std::string>{};
  std::set<std::string> renamed = xs;
  renamed.insert(assigned.begin(), assigned.end());
  Substitution r0 = renaming(renamed, 0);

  for (std::size_t k = 0; k < paths.size(); ++k) {
    const SymbolicPath& path = paths[k];
    std::string name = paths.size() > 1 ? prefix + ".path[" + std::to_string(k + 1) + "]" : prefix;
    Substitution kappa;
    for (const auto& y : assigned)
      if (!xs.count(y)) kappa[y] = substitute(path.store.at(y), r0);
    Phase ph;
    ph.ode = substitute(ode, kappa);
    for (const auto& x : xs) {
      auto it = path.store.find(x);
      ph.init[x] = substitute(it == path.store.end() ? Term::var(x) : it->second, r0);
    }
    ph.constant = subst_all(with(gamma, path.condition), r0);
    ph.constant.push_back(substitute(ph.ode.domain(), ph.init));
    VectorField vf = VectorField::from_ode(ph.ode);
    PhaseOutcome o = run_cuts(c, ph, vf, cuts, kappa, name);
    if (!o.ok) continue;
    prove_post(c, ph, vf, o.established, substitute(post, kappa), name);
  }
}

}  // namespace

CertResult check_theorem(const Model& model, const Certificate& cert, const CheckOptions& opts) {
  if (!cert.model.empty() && !model.name.empty() && cert.model != model.name)
    throw Error("certificate is for model '" + cert.model + "', not '" + model.name + "'");
  const Formula& thm = model.theorem;
  if (!thm || thm.kind() != FormulaKind::Implies)
    throw ShapeUnsupported("theorem is not an implication");
  const Formula& pre = thm.lhs();
  const Formula& goal = thm.rhs();
  if (!is_first_order(pre)) throw ShapeUnsupported("modal antecedent");
  Checker c(opts);
  std::vector<Formula> gamma = conjuncts(pre);

  if (goal.kind() == FormulaKind::Box && is_first_order(goal.lhs())) {
    const Program& prog = goal.program();
    const Formula& post = goal.lhs();
    if (prog.kind() == ProgramKind::Loop) {
      if (!cert.loop_invariant) {
        c.unknown("loop", post, "certificate gives no loop invariant");
        return c.finish();
      }
      const Formula& inv = *cert.loop_invariant;
      StepShape shape = split_step(prog.lhs());
      std::set<std::string> bound = bound_vars(prog);
      std::vector<Formula> carried;
      for (const auto& f : gamma) {
        bool touches = false;
        for (const auto& v : free_vars(f))
          if (bound.count(v)) touches = true;
        if (!touches) carried.push_back(f);
      }
      c.discharge("loop.init", gamma, inv);
      box_step(c, with(carried, inv), shape, inv, cert.cuts, "loop.step");
      c.discharge("loop.use", with(carried, inv), post);
      return c.finish();
    }
    box_step(c, gamma, split_step(prog), post, cert.cuts, "box");
    return c.finish();
  }

  if (goal.kind() == FormulaKind::Diamond && goal.program().kind() == ProgramKind::Ode) {
    const Program& ode = goal.program();
    const Formula& after = goal.lhs();
    bool persist = after.kind() == FormulaKind::Box && after.program() == ode &&
                   is_first_order(after.lhs());
    if (!persist && !is_first_order(after))
      throw ShapeUnsupported("unsupported diamond postcondition: " + to_string(after));
    if (ode.domain().kind() != FormulaKind::True)
      throw ShapeUnsupported("reachability under an evolution domain");
    if (!cert.variant) {
      c.unknown("dv", after, "certificate gives no variant");
      return c.finish();
    }
    std::set<std::string> xs = ode_vars(ode);
    Substitution r0 = renaming(xs, 0);
    Phase ph;
    ph.ode = ode;
    for (const auto& x : xs) ph.init[x] = Term::var(at_symbol(x, 0));
    ph.constant = subst_all(gamma, r0);
    VectorField vf = VectorField::from_ode(ode);
    std::vector<CutStep> before(cert.cuts.begin(), cert.cuts.begin() + cert.cuts_before_variant);
    std::vector<CutStep> later(cert.cuts.begin() + cert.cuts_before_variant, cert.cuts.end());
    PhaseOutcome o = run_cuts(c, ph, vf, before, {}, "reach");
    if (!o.ok) return c.finish();
    const Variant& var = *cert.variant;
    std::vector<Formula> as = with(ph.constant, o.established);
    dv(c, var.progress, var.bound, vf, as, conjunction(ph.constant), "reach.dv");
    Formula reached = ge0(var.progress);
    std::vector<Formula> at_goal = with(as, reached);
    if (!persist) {
      c.discharge("reach.post", at_goal, after);
      return c.finish();
    }
    // Second phase starts where the variant reached zero.
    Substitution r1 = renaming(xs, 1);
    Phase ph2;
    ph2.ode = ode;
    for (const auto& x : xs) ph2.init[x] = Term::var(at_symbol(x, 1));
    ph2.constant = with(ph.constant, subst_all(with(o.established, reached), r1));
    ph2.invariant = o.established;
    PhaseOutcome o2 = run_cuts(c, ph2, vf, later, {}, "persist");
    if (!o2.ok) return c.finish();
    prove_post(c, ph2, vf, o2.established, after.lhs(), "persist");
    return c.finish();
  }

  throw ShapeUnsupported("unsupported theorem shape: " + to_string(goal));
}

}  // namespace dlcert
