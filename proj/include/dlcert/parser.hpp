#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dlcert/ast.hpp"

namespace dlcert {

struct Definition {
  std::string name;
  std::vector<std::string> params;
  Term body;  // references to other definitions already expanded
};

struct NamedProgram {
  std::string name;
  Program body;
};

// A parsed model. All definition and program references are expanded, so
// the ASTs below mention only variables.
struct Model {
  std::string name;
  std::vector<Definition> defs;
  std::vector<NamedProgram> programs;
  Formula constants = Formula::truth();
  Formula theorem;
  // Identifiers in order of first textual appearance.
  std::vector<std::string> variables;

  const Definition* find_def(const std::string& name) const;
  const NamedProgram* find_program(const std::string& name) const;
};

enum class CutMethod { DIEq, DIIneq, Darboux, DomainConstraint };

const char* method_name(CutMethod m);

struct CutStep {
  Formula formula;
  CutMethod method = CutMethod::DIIneq;
  Term cofactor;  // Darboux only
};

struct Variant {
  Term progress;
  Term bound;
};

struct Certificate {
  std::string model;
  std::optional<Formula> loop_invariant;
  std::vector<CutStep> cuts;
  std::optional<Variant> variant;
  // Number of cuts listed before the variant; the rest follow it.
  std::size_t cuts_before_variant = 0;
};

// Throws SyntaxError, UndefinedName, RecursiveDefinition.
Model parse_model(const std::string& text);

// With a model, definition names and `const` resolve against it.
Certificate parse_certificate(const std::string& text);
Certificate parse_certificate(const std::string& text, const Model& model);

Term parse_term(const std::string& text);
Term parse_term(const std::string& text, const Model& model);
Formula parse_formula(const std::string& text);
Formula parse_formula(const std::string& text, const Model& model);
Program parse_program(const std::string& text);

}  // namespace dlcert
