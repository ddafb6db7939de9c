// Copyright 2026 The trustlogic Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef TRUSTLOGIC_WORKSPACE_H_
#define TRUSTLOGIC_WORKSPACE_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trustlogic/axioms.h"
#include "trustlogic/formula.h"
#include "trustlogic/kripke.h"
#include "trustlogic/prover.h"
#include "trustlogic/terms.h"
#include "trustlogic/trust.h"

namespace trustlogic {

// Parse or validation failure in a workspace file; line is 1-based.
class WorkspaceError : public std::runtime_error {
 public:
  WorkspaceError(const std::string& what, size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

struct NamedFormula {
  std::string name;
  Formula formula;
  size_t line = 0;
};

enum class ExpectKind {
  kProved,        // expect proved [from n1,n2] [budget N] : A  (bare "from": empty context)
  kNotProvable,   // expect not-provable [from ...] : A
  kRefuted,       // expect refuted [from ...] : A
  kDerived,       // expect derived n a b P
  kDerivedCount,  // expect derived-count N
  kVerified,      // expect verified n a b P
  kRisk,          // expect risk KofN p1 ... pn = value
};

struct Expectation {
  ExpectKind kind = ExpectKind::kProved;
  size_t line = 0;
  std::string text;
  Formula formula;
  std::optional<std::vector<std::string>> from;
  std::optional<size_t> budget;
  TrustEdge edge;
  size_t count = 0;
  size_t k = 0;
  size_t n = 0;
  std::vector<double> probabilities;
  double value = 0.0;
};

struct Workspace {
  AgentUniverse universe;
  CompiledAxiomSystem system;
  bool box = false;
  std::vector<UnfoldingAxiom> axioms;  // empty: standard system
  std::vector<NamedFormula> assumptions;
  TrustGraphSpec trust_spec;
  ForwardingNetwork network;
  std::vector<Expectation> expectations;

  // Assumptions in file order, restricted to `names` when given. Throws
  // std::invalid_argument on an unknown name.
  FlatContext Context(const std::optional<std::vector<std::string>>& names = std::nullopt) const;
  // Names of the assumptions whose formulas occur in `ctx`, in file order.
  std::vector<std::string> NamesOf(const FlatContext& ctx) const;
  TrustLanguage Language() const;
};

// Line format:
//   agent <id>            order <a> <= <b>        option box on|off
//   edge <b> -> <a>       mode shortest|acyclic   trust <n> <a> <b> <P>
//   assume <name> : <formula>                      axiom [M] => [N][R]
//   expect ...            (see ExpectKind)
// '#' starts a comment. Each trust line also adds the edge b -> a.
// Formulas may use @T(n,a,b,P) and @V(n,a,b,P) for order-n trust and
// validity over the workspace network.
Workspace ParseWorkspace(const std::string& text);
// Throws WorkspaceError (line 0) when the file cannot be read.
Workspace LoadWorkspace(const std::string& path);

// Formula text with trust macros expanded; throws WorkspaceError.
Formula ParseWorkspaceFormula(const Workspace& ws, const std::string& text, size_t line = 0);

enum class ReportVerdict { kProved, kNotProvable, kBudgetExceeded, kDerived, kRefuted, kUndetermined };

std::string ReportVerdictName(ReportVerdict v);
// 0 Proved/Derived, 1 NotProvable/Refuted, 2 Undetermined/BudgetExceeded.
int ExitCode(ReportVerdict v);

struct QueryOptions {
  std::optional<std::vector<std::string>> from;
  size_t budget = 200000;
  size_t worlds = 3;
  bool verify = false;
};

struct QueryReport {
  std::string query;
  ReportVerdict verdict = ReportVerdict::kUndetermined;
  ProofPtr proof;
  // Assumption names of the query context; term variable hi is entry i.
  std::vector<std::string> hypotheses;
  std::vector<std::string> used;
  std::optional<Term> term;
  std::optional<Term> normal;
  size_t normal_steps = 0;
  std::optional<KripkeFrame> frame;
  size_t world = 0;
  size_t candidates = 0;
  std::vector<TrustDerivation> derived;
  std::vector<VerifyReport> verified;
  std::optional<double> risk;
  SearchStats stats;
  std::string note;
};

// Proved reports carry a checked proof, its term and the used assumptions.
QueryReport ProveQuery(const Workspace& ws, const std::string& formula,
                       const QueryOptions& opts = {});
// ProveQuery plus normalization of the extracted term.
QueryReport TermQuery(const Workspace& ws, const std::string& formula,
                      const QueryOptions& opts = {});
// Refuted reports carry a conforming refuting frame.
QueryReport CountermodelQuery(const Workspace& ws, const std::string& formula,
                              const QueryOptions& opts = {});
QueryReport TrustDeriveQuery(const Workspace& ws, const QueryOptions& opts = {});
// threshold is "KofN". Throws std::invalid_argument.
QueryReport RiskQuery(const std::string& threshold, const std::vector<double>& failure);

std::string RenderReport(const QueryReport& r);
std::string ReportToJson(const QueryReport& r, int indent = 2);

struct ExpectationResult {
  Expectation expectation;
  bool ok = false;
  std::string detail;
};

std::vector<ExpectationResult> CheckExpectations(const Workspace& ws,
                                                 const QueryOptions& opts = {});

}  // namespace trustlogic

#endif  // TRUSTLOGIC_WORKSPACE_H_
