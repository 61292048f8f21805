#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dlcert/cli.hpp"
#include "dlcert/corpus.hpp"
#include "dlcert/errors.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace dlcert;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = dlcert::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string corpus(const std::string& rel) { return (support::corpus_dir() / rel).string(); }

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("dlcert_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("bundled corpus loads") {
  auto entries = load_corpus(support::corpus_dir());
  std::vector<std::string> names;
  for (const auto& e : entries) names.push_back(e.name);
  CHECK(names == std::vector<std::string>{"conserve", "bangbang", "fixedexp", "dynexp",
                                          "rev_basic", "rev_avoid", "rev_approach",
                                          "rev_persist"});
  std::size_t mutants = 0;
  for (const auto& e : entries) {
    CHECK_FALSE(e.figure_tag.empty());
    mutants += e.mutants.size();
  }
  CHECK(mutants >= 10);
}

TEST_CASE("empty and broken corpora") {
  CHECK(load_corpus(scratch("empty")).empty());
  CHECK_THROWS_AS(load_corpus(scratch("empty") / "missing"), Error);

  fs::path root = scratch("broken");
  fs::copy(support::corpus_dir() / "rev_basic", root / "rev_basic", fs::copy_options::recursive);
  fs::create_directories(root / "rev_basic" / "mutants" / "garbled");
  std::ofstream(root / "rev_basic" / "mutants" / "garbled" / "model.dlm") << "model x\nconst a >\n";
  try {
    load_corpus(root);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("garbled") != std::string::npos);
  }
}

TEST_CASE("entry evaluation") {
  auto entries = load_corpus(support::corpus_dir());
  for (const auto& e : entries) {
    if (e.name != "rev_avoid" && e.name != "bangbang") continue;
    EntryOutcome o = evaluate_entry(e);
    CHECK_MESSAGE(o.ok(), e.name);
    CHECK(o.verdict == Verdict::Proved);
    for (const auto& m : o.mutants) CHECK_MESSAGE(m.caught, e.name << "/" << m.name);
  }
}

TEST_CASE("cli check") {
  Run r = run_cli({"check", corpus("conserve/model.dlm"), "--cert", corpus("conserve/cert.cert")});
  CHECK(r.code == dlcert::cli::kOk);
  CHECK(r.out.find("verdict: proved") != std::string::npos);

  Run j = run_cli({"check", corpus("rev_avoid/model.dlm"), "--cert", corpus("rev_avoid/cert.cert"),
               "--json"});
  CHECK(j.code == dlcert::cli::kOk);
  auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["verdict"] == "proved");
  REQUIRE(doc["obligations"].is_array());
  for (const auto& o : doc["obligations"]) {
    CHECK(o.contains("origin"));
    CHECK(o.contains("witness"));
    CHECK(o["verdict"] == "proved");
  }

  Run bad = run_cli({"check", corpus("rev_basic/model.dlm"), "--cert",
                 corpus("rev_avoid/mutants/zerocofactor/cert.cert")});
  CHECK(bad.code != dlcert::cli::kOk);
}

TEST_CASE("cli usage errors") {
  CHECK(run_cli({"check", corpus("conserve/model.dlm")}).code == dlcert::cli::kUsage);
  Run unk = run_cli({"check", corpus("conserve/model.dlm"), "--cert", corpus("conserve/cert.cert"),
                 "--bogus"});
  CHECK(unk.code == dlcert::cli::kUsage);
  CHECK_FALSE(unk.err.empty());
  CHECK(run_cli({}).code == dlcert::cli::kUsage);
  CHECK(run_cli({"check", "/nonexistent.dlm", "--cert", "/nonexistent.cert"}).code == dlcert::cli::kUsage);
}

TEST_CASE("cli lie") {
  Run r = run_cli({"lie", corpus("rev_basic/model.dlm"), "--term", "A+B"});
  CHECK(r.code == dlcert::cli::kOk);
  CHECK(r.out == "0\n");
  Run t = run_cli({"lie", corpus("conserve/model.dlm"), "--term", "Ek"});
  CHECK(t.code == dlcert::cli::kOk);
  CHECK(t.out.find("kT") != std::string::npos);
}

TEST_CASE("cli simulate and falsify") {
  fs::path csv = scratch("sim") / "trace.csv";
  Run s = run_cli({"simulate", corpus("rev_basic/model.dlm"), "--params", "kf=1,kr=1,A0=1", "--horizon",
               "1", "--out", csv.string()});
  CHECK(s.code == dlcert::cli::kOk);
  CHECK(fs::file_size(csv) > 1000);

  Run f = run_cli({"falsify", corpus("bangbang/mutants/halfguard/model.dlm"), "--trials", "500"});
  CHECK(f.code == dlcert::cli::kViolation);
  auto line = f.out.substr(0, f.out.find('\n'));
  auto j = nlohmann::json::parse(line);
  CHECK(j["formula"] == "T <= Tmax");

  Run ok = run_cli({"falsify", corpus("rev_basic/model.dlm"), "--trials", "50"});
  CHECK(ok.code == dlcert::cli::kOk);

  Run prop = run_cli({"falsify", corpus("rev_basic/model.dlm"), "--property", "B <= 0", "--trials",
                  "5"});
  CHECK(prop.code == dlcert::cli::kViolation);
}

TEST_CASE("cli corpus is repeatable") {
  Run a = run_cli({"corpus"});
  Run b = run_cli({"corpus"});
  CHECK(a.code == dlcert::cli::kOk);
  CHECK(b.code == dlcert::cli::kOk);
  auto strip = [](const std::string& s) {
    std::string out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) {
      auto cut = line.find_first_of("0123456789.", 24);
      out += line.substr(0, std::min(cut, line.size())) + "\n";
    }
    return out;
  };
  CHECK(strip(a.out) == strip(b.out));
  CHECK(a.out.find("13/13 mutants caught") != std::string::npos);
}
