#pragma once

#include <filesystem>
#include <string>

#include "dlcert/corpus.hpp"
#include "dlcert/parser.hpp"

namespace support {

inline std::filesystem::path corpus_dir() { return DLCERT_CORPUS_DIR; }

inline dlcert::Model model(const std::string& entry) {
  return dlcert::parse_model(dlcert::read_file(corpus_dir() / entry / "model.dlm"));
}

inline dlcert::Certificate cert(const std::string& entry, const dlcert::Model& m) {
  return dlcert::parse_certificate(dlcert::read_file(corpus_dir() / entry / "cert.cert"), m);
}

inline dlcert::Program program(const dlcert::Model& m, const std::string& name) {
  return m.find_program(name)->body;
}

}  // namespace support
