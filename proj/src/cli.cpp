#include "dlcert/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dlcert/certify.hpp"
#include "dlcert/corpus.hpp"
#include "dlcert/errors.hpp"
#include "dlcert/falsify.hpp"
#include "dlcert/printer.hpp"
#include "dlcert/simulate.hpp"

#ifndef DLCERT_DEFAULT_CORPUS
#define DLCERT_DEFAULT_CORPUS "corpus"
#endif

namespace dlcert::cli {

namespace {

using nlohmann::json;

int code_for(Verdict v) {
  switch (v) {
    case Verdict::Proved: return kOk;
    case Verdict::Refuted: return kViolation;
    case Verdict::Unknown: return kUnknown;
  }
  return kUnknown;
}

// Worst of two exit codes: violation beats unknown beats ok.
int worse(int a, int b) {
  auto rank = [](int c) { return c == kViolation ? 3 : c == kUsage ? 4 : c == kUnknown ? 2 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

json witness_json(const std::optional<Point>& w) {
  if (!w) return nullptr;
  json j = json::object();
  for (const auto& [k, v] : *w) j[k] = rational_to_string(v);
  return j;
}

std::string witness_text(const Point& w) {
  std::string s;
  for (const auto& [k, v] : w) {
    if (!s.empty()) s += ", ";
    s += k + " = " + rational_to_string(v);
  }
  return s;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Program find_ode(const Program& p) {
  if (p.kind() == ProgramKind::Ode) return p;
  if (p.kind() == ProgramKind::Test || p.kind() == ProgramKind::Assign) return {};
  if (Program l = find_ode(p.lhs())) return l;
  if (p.kind() == ProgramKind::Loop) return {};
  return find_ode(p.rhs());
}

Program find_ode(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Box:
    case FormulaKind::Diamond:
      if (Program o = find_ode(f.program())) return o;
      return find_ode(f.lhs());
    case FormulaKind::Not:
      return find_ode(f.lhs());
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      if (Program o = find_ode(f.lhs())) return o;
      return find_ode(f.rhs());
    default:
      return {};
  }
}

State parse_params(const std::string& text) {
  State s;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--params", "expected k=v, got " + item);
    std::string k = item.substr(0, eq);
    std::string v = item.substr(eq + 1);
    try {
      std::size_t used = 0;
      double d = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      s[k] = d;
    } catch (const std::exception&) {
      s[k] = to_double(parse_rational(v));
    }
  }
  return s;
}

int cmd_check(const std::string& model_file, const std::string& cert_file, std::uint64_t seed,
              std::size_t samples, bool as_json, std::ostream& out) {
  Model m = parse_model(read_file(model_file));
  Certificate c = parse_certificate(read_file(cert_file), m);
  CheckOptions opts;
  opts.seed = seed;
  opts.samples = samples;
  CertResult r = certify(m, c, opts);
  if (as_json) {
    json j;
    j["obligations"] = json::array();
    for (const auto& o : r.obligations) {
      json e;
      e["origin"] = o.origin;
      e["goal"] = o.goal;
      e["verdict"] = o.skipped ? "skipped" : verdict_name(o.verdict);
      e["witness"] = witness_json(o.witness);
      if (!o.detail.empty()) e["detail"] = o.detail;
      j["obligations"].push_back(e);
    }
    j["verdict"] = verdict_name(r.verdict);
    if (!r.reason.empty()) j["reason"] = r.reason;
    j["witness"] = witness_json(r.witness);
    out << j.dump(2) << '\n';
  } else {
    for (const auto& o : r.obligations) {
      out << std::left << std::setw(9) << (o.skipped ? "skipped" : verdict_name(o.verdict)) << ' '
          << o.origin;
      if (!o.goal.empty()) out << "  " << o.goal;
      out << '\n';
      if (o.witness) out << "          witness: " << witness_text(*o.witness) << '\n';
      if (o.skipped || o.verdict != Verdict::Proved)
        if (!o.detail.empty()) out << "          " << o.detail << '\n';
    }
    out << "verdict: " << verdict_name(r.verdict) << '\n';
    if (!r.proved() && !r.reason.empty()) out << "reason: " << r.reason << '\n';
  }
  return code_for(r.verdict);
}

int cmd_simulate(const std::string& model_file, const std::string& params, const SimConfig& cfg,
                 const std::string& out_file, std::ostream& out) {
  Model m = parse_model(read_file(model_file));
  Trace tr = simulate(m, parse_params(params), cfg);
  if (out_file.empty() || out_file == "-") {
    write_csv(out, tr);
  } else {
    std::ofstream f(out_file);
    if (!f) throw Error("cannot write " + out_file);
    write_csv(f, tr);
    out << tr.samples.size() << " samples, " << stop_reason_name(tr.stop_reason) << ", written to "
        << out_file << '\n';
  }
  return kOk;
}

int cmd_falsify(const std::string& model_file, const std::string& property,
                const FalsifyOptions& opts, std::ostream& out) {
  Model m = parse_model(read_file(model_file));
  FalsifyStats stats;
  std::optional<FalsifyResult> r =
      property.empty() ? falsify(m, opts, &stats)
                       : falsify(m, parse_formula(property, m), opts, &stats);
  if (!r) {
    out << "no violation in " << stats.trials << " trials (" << stats.skipped << " skipped)\n";
    return kOk;
  }
  out << violation_json(r->violation) << '\n';
  std::string ps;
  for (const auto& [k, v] : r->params) ps += (ps.empty() ? "" : ",") + k + "=" + fmt(v);
  out << "params: " << ps << '\n';
  out << "policy: "
      << (r->config.duration_policy == DurationPolicy::MaxDomain ? "max" : "random")
      << ", seed: " << r->config.seed << '\n';
  return kViolation;
}

int cmd_lie(const std::string& model_file, const std::string& term, std::ostream& out) {
  Model m = parse_model(read_file(model_file));
  Program ode = find_ode(m.theorem);
  if (!ode) throw Error("the theorem mentions no ODE");
  VectorField vf = VectorField::from_ode(ode);
  Term t = parse_term(term, m);
  Fraction f = to_fraction(t, [&vf](const std::string& v) { return vf.has(v); });
  Polynomial num = lie_derivative(f.num, vf);
  if (f.den == Polynomial(Rational(1)) || num.is_zero())
    out << num.to_string(&m.variables) << '\n';
  else
    out << "(" << num.to_string(&m.variables) << ") / (" << f.den.to_string(&m.variables) << ")\n";
  return kOk;
}

int cmd_corpus(const std::string& root, const CorpusOptions& opts, std::ostream& out) {
  auto entries = load_corpus(root);
  int code = kOk;
  std::size_t mutants = 0, caught = 0;
  double total = 0;
  out << std::left << std::setw(14) << "entry" << std::setw(10) << "verdict" << std::setw(10)
      << "seconds" << "mutants\n";
  for (const auto& e : entries) {
    EntryOutcome o = evaluate_entry(e, opts);
    total += o.seconds;
    std::size_t c = std::count_if(o.mutants.begin(), o.mutants.end(),
                                  [](const auto& m) { return m.caught; });
    mutants += o.mutants.size();
    caught += c;
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.3f", o.seconds);
    out << std::left << std::setw(14) << o.name << std::setw(10) << verdict_name(o.verdict)
        << std::setw(10) << secs << c << "/" << o.mutants.size() << " caught";
    if (!o.figure_tag.empty()) out << "  " << o.figure_tag;
    out << '\n';
    if (o.verdict != Verdict::Proved) out << "    reason: " << o.reason << '\n';
    for (const auto& m : o.mutants) {
      out << "    mutant " << std::setw(14) << m.name << std::setw(10) << verdict_name(m.verdict)
          << (m.falsify_run ? (m.falsified ? "falsified " : "not-falsified ") : "")
          << (m.caught ? "caught" : "MISSED") << '\n';
      if (!m.caught) code = worse(code, kViolation);
    }
    code = worse(code, code_for(o.verdict));
  }
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.3f", total);
  out << entries.size() << " entries, " << caught << "/" << mutants << " mutants caught, " << secs
      << " s\n";
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certificate checker for differential dynamic logic models", "dlcert"};
  app.require_subcommand(1);

  std::string model_file, cert_file, params, out_file, property, term, policy = "max";
  std::string root = DLCERT_DEFAULT_CORPUS;
  std::uint64_t seed = 0;
  std::size_t samples = 10000, trials = 500, max_iter = 1000;
  bool as_json = false;
  SimConfig cfg;
  FalsifyOptions fo;

  auto* check = app.add_subcommand("check", "Check a proof certificate against a model");
  check->add_option("model", model_file, "Model file")->required();
  check->add_option("--cert", cert_file, "Certificate file")->required();
  check->add_option("--seed", seed, "Root seed");
  check->add_option("--samples", samples, "Counterexample samples per obligation");
  check->add_flag("--json", as_json, "JSON output");

  auto* sim = app.add_subcommand("simulate", "Simulate the theorem's program");
  sim->add_option("model", model_file, "Model file")->required();
  sim->add_option("--params", params, "Initial values k=v,...")->required();
  sim->add_option("--dt", cfg.dt, "Step size");
  sim->add_option("--horizon", cfg.horizon, "Time horizon");
  sim->add_option("--seed", seed, "Seed");
  sim->add_option("--max-iterations", max_iter, "Loop iteration budget");
  sim->add_option("--policy", policy, "ODE duration policy")
      ->check(CLI::IsMember({"max", "random"}));
  sim->add_option("--out", out_file, "Trace CSV, '-' for stdout")->required();

  auto* fal = app.add_subcommand("falsify", "Search for property violations by simulation");
  fal->add_option("model", model_file, "Model file")->required();
  fal->add_option("--property", property, "Formula to monitor (default: box postcondition)");
  fal->add_option("--trials", trials, "Number of trials");
  fal->add_option("--seed", seed, "Root seed");
  fal->add_option("--horizon", fo.horizon, "Time horizon per trial");
  fal->add_option("--dt", fo.dt, "Step size");

  auto* lie = app.add_subcommand("lie", "Print a Lie derivative along the model's ODE");
  lie->add_option("model", model_file, "Model file")->required();
  lie->add_option("--term", term, "Definition name or expression")->required();

  auto* corp = app.add_subcommand("corpus", "Check every corpus entry and mutant");
  corp->add_option("--root", root, "Corpus directory");
  corp->add_option("--seed", seed, "Root seed");
  corp->add_option("--trials", trials, "Falsification trials per mutant");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kUsage;
  }

  try {
    if (*check) return cmd_check(model_file, cert_file, seed, samples, as_json, out);
    if (*sim) {
      cfg.seed = seed;
      cfg.max_iterations = max_iter;
      cfg.duration_policy = policy == "random" ? DurationPolicy::UniformRandom : DurationPolicy::MaxDomain;
      return cmd_simulate(model_file, params, cfg, out_file, out);
    }
    if (*fal) {
      fo.trials = trials;
      fo.seed = seed;
      return cmd_falsify(model_file, property, fo, out);
    }
    if (*lie) return cmd_lie(model_file, term, out);
    if (*corp) {
      CorpusOptions co;
      co.seed = seed;
      co.falsify_trials = trials;
      return cmd_corpus(root, co, out);
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace dlcert::cli
