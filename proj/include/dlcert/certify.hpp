#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dlcert/ast.hpp"
#include "dlcert/oracle.hpp"
#include "dlcert/parser.hpp"
#include "dlcert/polynomial.hpp"

namespace dlcert {

struct ObligationReport {
  std::string origin;
  std::string goal;
  Verdict verdict = Verdict::Unknown;
  // A cut whose initial condition does not hold on one control path is not
  // used on that path; such entries are informational.
  bool skipped = false;
  std::optional<Point> witness;
  std::string detail;
};

struct CertResult {
  Verdict verdict = Verdict::Proved;
  std::optional<Point> witness;
  std::string reason;
  std::optional<Formula> obligation;
  std::optional<std::size_t> failed_step;
  std::vector<ObligationReport> obligations;

  bool proved() const { return verdict == Verdict::Proved; }
};

struct CheckOptions {
  std::uint64_t seed = 0;
  std::size_t samples = 10000;
  bool parallel = true;
};

// One path through a loop-free discrete program.
struct SymbolicPath {
  Formula condition;   // conjunction of tests over pre-state variables
  Substitution store;  // variable -> value in pre-state variables
  Formula post;        // post with the store applied
};

// Throws UnsupportedConstruct for ODEs and loops.
std::vector<SymbolicPath> symbolic_exec(const Program& ctrl, const Formula& post);

struct MinMaxBranch {
  std::vector<Formula> conditions;
  Term term;
};

// All min/max-free instances of t, one per combination of branch choices.
std::vector<MinMaxBranch> min_max_branches(const Term& t);

// DI for e = e~, given e - e~. Proved when the Lie derivative vanishes
// (identically, or under equational assumptions). A min/max term is checked
// branch by branch; `expected_branches` guards against missing cases.
CertResult check_di_eq(const Term& difference, const VectorField& vf,
                       const std::vector<Formula>& assumptions, const CheckOptions& opts = {});
CertResult check_di_eq(const Polynomial& difference, const VectorField& vf,
                       const std::vector<Formula>& assumptions, const CheckOptions& opts = {});
CertResult check_di_eq_branches(const std::vector<MinMaxBranch>& branches,
                                std::size_t expected_branches, const VectorField& vf,
                                const std::vector<Formula>& assumptions,
                                const CheckOptions& opts = {});

// DI for a single comparison e ~ e~ with ~ in {>=, >, <=, <}.
CertResult check_di_ineq(const Formula& comparison, const VectorField& vf,
                         const std::vector<Formula>& assumptions, const CheckOptions& opts = {});

// Darboux inequality premise for p >= 0 (or p > 0): Lie(p) >= g * p.
CertResult check_darboux(const Term& p, const Term& cofactor, const VectorField& vf,
                         const std::vector<Formula>& assumptions, const CheckOptions& opts = {});

// Differential variant: whenever p < 0, Lie(p) >= d, with d > 0 under the
// constants and a globally defined solution (affine right-hand sides).
// Throws SideConditionUnsupported when the ODE is not affine.
CertResult check_dv(const Term& progress, const Term& bound, const VectorField& vf,
                    const std::vector<Formula>& assumptions, const Formula& constants,
                    const CheckOptions& opts = {});

// Premises of successive cuts, each assuming the domain and earlier cuts.
// failed_step names the first cut that does not prove.
CertResult check_cut_chain(const std::vector<CutStep>& cuts, const VectorField& vf,
                           const std::vector<Formula>& base_assumptions,
                           const CheckOptions& opts = {});

// Throws ShapeUnsupported for theorems outside the supported shapes.
CertResult check_theorem(const Model& model, const Certificate& cert,
                         const CheckOptions& opts = {});

}  // namespace dlcert
