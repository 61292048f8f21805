#include "dlcert/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "dlcert/errors.hpp"
#include "dlcert/falsify.hpp"

namespace fs = std::filesystem;

namespace dlcert {

const char* expectation_name(MutantExpectation e) {
  return e == MutantExpectation::NonProved ? "NonProved" : "FalsifiedOrNonProved";
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Model load_model(const fs::path& p) {
  try {
    return parse_model(read_file(p));
  } catch (const Error& e) {
    throw Error(p.string() + ": " + e.what());
  }
}

Certificate load_cert(const fs::path& p, const Model& m) {
  try {
    return parse_certificate(read_file(p), m);
  } catch (const Error& e) {
    throw Error(p.string() + ": " + e.what());
  }
}

std::string first_comment(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t.rfind("//", 0) == 0) return trim(t.substr(2));
    return "";
  }
  return "";
}

std::vector<std::string> subdirs(const fs::path& dir) {
  std::vector<std::string> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_directory()) out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<CorpusEntry> load_corpus(const fs::path& root) {
  if (!fs::is_directory(root)) throw Error("corpus root " + root.string() + " is not a directory");
  std::vector<std::string> names;
  fs::path index = root / "index.txt";
  if (fs::exists(index)) {
    std::istringstream in(read_file(index));
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (!line.empty() && line[0] != '#') names.push_back(line);
    }
  } else {
    for (const auto& n : subdirs(root))
      if (fs::exists(root / n / "model.dlm")) names.push_back(n);
  }

  std::vector<CorpusEntry> out;
  for (const auto& name : names) {
    CorpusEntry e;
    e.name = name;
    fs::path dir = root / name;
    e.model_file = dir / "model.dlm";
    e.cert_file = dir / "cert.cert";
    e.model = load_model(e.model_file);
    e.cert = load_cert(e.cert_file, e.model);
    e.figure_tag = first_comment(read_file(e.model_file));
    for (const auto& m : subdirs(dir / "mutants")) {
      fs::path mdir = dir / "mutants" / m;
      Mutant mu;
      mu.name = m;
      mu.model_file = fs::exists(mdir / "model.dlm") ? mdir / "model.dlm" : e.model_file;
      mu.cert_file = fs::exists(mdir / "cert.cert") ? mdir / "cert.cert" : e.cert_file;
      fs::path exp = mdir / "expected";
      std::string tag = fs::exists(exp) ? trim(read_file(exp)) : "NonProved";
      if (tag == "NonProved")
        mu.expected = MutantExpectation::NonProved;
      else if (tag == "FalsifiedOrNonProved")
        mu.expected = MutantExpectation::FalsifiedOrNonProved;
      else
        throw Error(exp.string() + ": unknown expectation '" + tag + "'");
      mu.model = load_model(mu.model_file);
      mu.cert = load_cert(mu.cert_file, mu.model);
      e.mutants.push_back(std::move(mu));
    }
    out.push_back(std::move(e));
  }
  return out;
}

CertResult certify(const Model& model, const Certificate& cert, const CheckOptions& opts) {
  try {
    return check_theorem(model, cert, opts);
  } catch (const Error& e) {
    CertResult r;
    r.verdict = Verdict::Unknown;
    r.reason = e.what();
    return r;
  }
}

bool EntryOutcome::ok() const {
  if (verdict != Verdict::Proved) return false;
  return std::all_of(mutants.begin(), mutants.end(), [](const auto& m) { return m.caught; });
}

EntryOutcome evaluate_entry(const CorpusEntry& entry, const CorpusOptions& opts) {
  auto start = std::chrono::steady_clock::now();
  CheckOptions co;
  co.seed = opts.seed;
  co.samples = opts.samples;
  co.parallel = opts.parallel;
  EntryOutcome out;
  out.name = entry.name;
  out.figure_tag = entry.figure_tag;
  CertResult r = certify(entry.model, entry.cert, co);
  out.verdict = r.verdict;
  out.reason = r.reason;
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  for (const auto& m : entry.mutants) {
    MutantOutcome mo;
    mo.name = m.name;
    mo.expected = m.expected;
    CertResult mr = certify(m.model, m.cert, co);
    mo.verdict = mr.verdict;
    mo.reason = mr.reason;
    mo.caught = mr.verdict != Verdict::Proved;
    if (!mo.caught && m.expected == MutantExpectation::FalsifiedOrNonProved) {
      FalsifyOptions fo;
      fo.trials = opts.falsify_trials;
      fo.seed = opts.seed;
      fo.parallel = opts.parallel;
      mo.falsify_run = true;
      try {
        mo.falsified = falsify(m.model, fo).has_value();
      } catch (const Error& e) {
        mo.reason = e.what();
      }
      mo.caught = mo.falsified;
    }
    out.mutants.push_back(std::move(mo));
  }
  return out;
}

}  // namespace dlcert
