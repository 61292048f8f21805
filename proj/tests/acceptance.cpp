// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "dlcert/certify.hpp"
#include "dlcert/cli.hpp"
#include "dlcert/corpus.hpp"
#include "dlcert/falsify.hpp"
#include "dlcert/oracle.hpp"
#include "dlcert/printer.hpp"
#include "dlcert/simulate.hpp"
#include "laws.hpp"
#include "support.hpp"

using namespace dlcert;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<CorpusEntry> g_entries;
std::vector<EntryOutcome> g_outcomes;

const EntryOutcome* outcome(const std::string& name) {
  for (const auto& o : g_outcomes)
    if (o.name == name) return &o;
  return nullptr;
}

const CorpusEntry* entry(const std::string& name) {
  for (const auto& e : g_entries)
    if (e.name == name) return &e;
  return nullptr;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome corpus_certification() {
  std::ostringstream out, err;
  int code = cli::run({"corpus", "--root", support::corpus_dir().string()}, out, err);
  std::size_t proved = 0;
  double secs = 0;
  for (const auto& o : g_outcomes) {
    proved += o.verdict == Verdict::Proved;
    secs += o.seconds;
  }
  bool pass = code == cli::kOk && g_outcomes.size() == 8 && proved == 8 && secs < 60;
  std::string d = std::to_string(proved) + "/" + std::to_string(g_outcomes.size()) +
                  " proved in " + fmt("%.2f", secs) + " s";
  for (const auto& o : g_outcomes)
    if (o.verdict != Verdict::Proved) d += "; " + o.name + ": " + o.reason;
  return {pass, d};
}

Outcome mutation_suite() {
  std::size_t total = 0, caught = 0;
  std::string missed;
  for (const auto& o : g_outcomes) {
    for (const auto& m : o.mutants) {
      ++total;
      if (m.caught)
        ++caught;
      else
        missed += " " + o.name + "/" + m.name;
    }
  }
  std::string d = std::to_string(caught) + "/" + std::to_string(total) + " mutants caught";
  if (!missed.empty()) d += ", missed:" + missed;
  return {total >= 10 && caught == total, d};
}

Outcome energy_conservation() {
  const CorpusEntry* e = entry("conserve");
  const Model& m = e->model;
  Term diff = parse_term("E0 - E", m);
  VectorField vf = VectorField::from_ode(support::program(m, "ode"));
  auto is_state = [&](const std::string& v) { return vf.has(v); };
  auto branches = min_max_branches(diff);
  bool symbolic = branches.size() == 2;
  for (const auto& b : branches) symbolic &= lie_derivative(to_fraction(b.term, is_state), vf).num.is_zero();

  State p = {{"kA", 1}, {"kB", 1}, {"kC", 1}, {"kT", 1}, {"kr1", 1}, {"kr2", 0}, {"hT", 1},
             {"A0", 1}, {"B0", 1}, {"A", 1},  {"B", 1},  {"C", 0},  {"T", 1}};
  SimConfig cfg;
  cfg.horizon = 5;
  cfg.dt = 1e-3;
  Trace tr = simulate(m, p, cfg);
  Term energy = parse_term("E", m);
  auto at = [&](std::size_t i) {
    Point pt;
    for (const auto& [k, v] : tr.state(i)) pt[k] = Rational(v);
    return to_double(*eval_exact(energy, pt));
  };
  double e0 = at(0), worst = 0;
  for (std::size_t i = 0; i < tr.samples.size(); ++i) worst = std::max(worst, std::fabs(at(i) - e0));
  bool numeric = worst <= 1e-6 * std::fabs(e0) && tr.samples.back().time >= 5 - 1e-9;

  // Tolerance justification: the RK4 error shrinks about 16x when dt halves.
  auto rev_err = [](double dt) {
    SimConfig c;
    c.dt = dt;
    c.horizon = 2;
    Trace t = simulate(entry("rev_basic")->model, {{"kf", 1}, {"kr", 1}, {"A0", 1}}, c);
    double w = 0;
    for (std::size_t i = 0; i < t.samples.size(); ++i)
      w = std::max(w, std::fabs(t.value(i, "A") - (0.5 + 0.5 * std::exp(-2 * t.samples[i].time))));
    return w;
  };
  double ratio = rev_err(0.1) / rev_err(0.05);
  bool order = ratio >= 8 && ratio <= 32;

  std::string d = "branches " + std::to_string(branches.size()) + (symbolic ? " zero" : " NONZERO") +
                  ", max |E(t)-E(0)| " + fmt("%.2e", worst) + " vs bound " +
                  fmt("%.2e", 1e-6 * std::fabs(e0)) + ", dt-halving ratio " + fmt("%.1f", ratio);
  return {symbolic && numeric && order, d};
}

bool cut_proved(const CertResult& r, const std::string& tag) {
  bool any = false;
  for (const auto& o : r.obligations) {
    if (o.origin.find(tag) == std::string::npos) continue;
    if (o.verdict != Verdict::Proved) return false;
    any = true;
  }
  return any;
}

Outcome darboux_checks() {
  std::string d;
  bool pass = true;
  auto check = [&](const char* name, const char* cofactor) {
    const CorpusEntry* e = entry(name);
    bool has = false;
    for (const auto& c : e->cert.cuts)
      has |= c.method == CutMethod::Darboux && c.cofactor == parse_term(cofactor);
    CertResult r = check_theorem(e->model, e->cert);
    bool ok = has && r.proved() && cut_proved(r, ".darboux");
    pass &= ok;
    d += std::string(d.empty() ? "" : ", ") + name + " [" + cofactor + "] " + (ok ? "ok" : "FAILED");
  };
  check("fixedexp", "A0*B0*kT");
  check("dynexp", "A0*B0*kT");
  check("rev_avoid", "-(kf + kr)");
  return {pass, d};
}

Outcome variant_check() {
  const CorpusEntry* e = entry("rev_approach");
  bool bound = e->cert.variant && e->cert.variant->bound == parse_term("eps*(kf + kr)");
  CertResult r = check_theorem(e->model, e->cert);
  bool global = cut_proved(r, "dv.global");
  bool premise = cut_proved(r, "dv.progress") && cut_proved(r, "dv.bound");
  std::string d = std::string("bound d = eps*(kf + kr) ") + (bound ? "present" : "MISSING") +
                  ", progress premise " + (premise ? "proved" : "NOT proved") +
                  ", global solution " + (global ? "ok" : "FAILED");
  return {bound && global && premise && r.proved(), d};
}

Outcome closed_form() {
  SimConfig cfg;
  cfg.horizon = 3;
  cfg.dt = 1e-3;
  Trace tr = simulate(entry("rev_basic")->model, {{"kf", 1}, {"kr", 1}, {"A0", 1}}, cfg);
  double worst = 0;
  for (double t : {0.5, 1.0, 2.0}) {
    std::size_t i = static_cast<std::size_t>(std::llround(t / cfg.dt));
    worst = std::max(worst, std::fabs(tr.value(i, "A") - (0.5 + 0.5 * std::exp(-2 * t))));
  }
  const Model& pm = entry("rev_persist")->model;
  Trace pt = simulate(pm, {{"kf", 1}, {"kr", 1}, {"A0", 1}, {"eps", 0.1}}, cfg);
  auto cross = empirical_persistence(pt, theorem_parts(pm).post.lhs(), 1e-12);
  double expect = std::log(5.0) / 2;
  bool pers = cross && std::fabs(*cross - expect) <= 2 * cfg.dt;
  std::string d = "max |A - closed form| " + fmt("%.2e", worst) + ", crossing " +
                  (cross ? fmt("%.4f", *cross) : std::string("none")) + " vs ln(5)/2 = " +
                  fmt("%.4f", expect);
  return {worst <= 1e-6 && pers, d};
}

Outcome algebraic_laws() {
  bool pass = true;
  std::string d;
  for (laws::Law l : {laws::Law::LieLinearity, laws::Law::Leibniz, laws::Law::PowerRule,
                      laws::Law::Idempotence, laws::Law::RoundTrip}) {
    laws::LawReport r = laws::check_law(l, 1000, 2024);
    pass &= r.cases == 1000 && r.failures == 0;
    d += std::string(d.empty() ? "" : ", ") + laws::law_name(l) + " " +
         std::to_string(r.cases - r.failures) + "/" + std::to_string(r.cases);
    if (r.failures) d += " (" + r.first_failure + ")";
  }
  return {pass, d};
}

Outcome soundness_vs_simulation() {
  bool pass = true;
  std::string d;
  for (const auto& o : g_outcomes) {
    const CorpusEntry* e = entry(o.name);
    if (o.verdict != Verdict::Proved || !theorem_parts(e->model).box) continue;
    FalsifyOptions fo;
    fo.trials = 500;
    fo.seed = 0;
    FalsifyStats st;
    auto hit = falsify(e->model, fo, &st);
    pass &= !hit && st.skipped < st.trials;
    d += std::string(d.empty() ? "" : ", ") + o.name + " " +
         (hit ? "VIOLATION " + violation_json(hit->violation)
              : "clean (" + std::to_string(st.skipped) + " skipped)");
  }
  return {pass, d};
}

}  // namespace

int main() {
  g_entries = load_corpus(support::corpus_dir());
  CorpusOptions co;
  co.seed = 0;
  co.falsify_trials = 500;
  for (const auto& e : g_entries) g_outcomes.push_back(evaluate_entry(e, co));

  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"corpus certification", corpus_certification},
      {"mutation suite", mutation_suite},
      {"energy conservation", energy_conservation},
      {"Darboux checks", darboux_checks},
      {"variant check", variant_check},
      {"closed-form cross-check", closed_form},
      {"algebraic law suite", algebraic_laws},
      {"soundness vs simulation", soundness_vs_simulation},
  };
  int failed = 0, n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", n - failed, n);
  return failed ? 1 : 0;
}
