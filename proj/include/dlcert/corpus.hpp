#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dlcert/certify.hpp"
#include "dlcert/parser.hpp"

namespace dlcert {

enum class MutantExpectation { NonProved, FalsifiedOrNonProved };

const char* expectation_name(MutantExpectation e);

struct Mutant {
  std::string name;
  std::filesystem::path model_file;
  std::filesystem::path cert_file;
  MutantExpectation expected = MutantExpectation::NonProved;
  Model model;
  Certificate cert;
};

struct CorpusEntry {
  std::string name;
  std::filesystem::path model_file;
  std::filesystem::path cert_file;
  std::string figure_tag;  // first comment line of the model file
  Verdict expected_verdict = Verdict::Proved;
  Model model;
  Certificate cert;
  std::vector<Mutant> mutants;
};

// Reads root/<name>/{model.dlm, cert.cert, mutants/<m>/...}. Entries follow
// root/index.txt when present, otherwise name order. A mutant directory may
// replace the model, the certificate or both, and holds an `expected` file.
// Any parse error is rethrown as Error naming the offending file.
std::vector<CorpusEntry> load_corpus(const std::filesystem::path& root);

std::string read_file(const std::filesystem::path& path);

struct CorpusOptions {
  std::uint64_t seed = 0;
  std::size_t samples = 10000;
  std::size_t falsify_trials = 500;
  bool parallel = true;
};

struct MutantOutcome {
  std::string name;
  MutantExpectation expected = MutantExpectation::NonProved;
  Verdict verdict = Verdict::Unknown;
  std::string reason;
  bool falsify_run = false;
  bool falsified = false;
  bool caught = false;
};

struct EntryOutcome {
  std::string name;
  std::string figure_tag;
  Verdict verdict = Verdict::Unknown;
  std::string reason;
  double seconds = 0;
  std::vector<MutantOutcome> mutants;

  bool ok() const;
};

// Certifies an entry and each of its mutants. A mutant whose certificate
// still proves is falsified when its expectation allows it.
EntryOutcome evaluate_entry(const CorpusEntry& entry, const CorpusOptions& opts = {});

// check_theorem with shape and side-condition failures mapped to Unknown.
CertResult certify(const Model& model, const Certificate& cert, const CheckOptions& opts = {});

}  // namespace dlcert
