// Copyright 2026 The trustlogic Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef TRUSTLOGIC_PROVER_H_
#define TRUSTLOGIC_PROVER_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trustlogic/axioms.h"
#include "trustlogic/formula.h"

namespace trustlogic {

enum class Rule {
  kVar,
  kTopR,
  kBotL,
  kImpR,
  kImpL,
  kModR,
  kAndL1,
  kAndL2,
  kAndR,
  kOrL,
  kOrR1,
  kOrR2,
  kEpsL,
};

std::string RuleName(Rule r);
std::optional<Rule> RuleFromName(const std::string& name);

struct ProofTree;
using ProofPtr = std::shared_ptr<const ProofTree>;

// One derivation step. Subtrees may be shared.
struct ProofTree {
  Rule rule = Rule::kTopR;
  FlatContext context;
  Formula goal;
  // The context formula a left rule acts on; unset for right rules.
  std::optional<Formula> principal;
  std::vector<ProofPtr> premises;
};

struct SearchStats {
  size_t nodes_expanded = 0;
  size_t max_depth = 0;
  size_t subsumption_prunes = 0;
  size_t cache_hits = 0;
};

enum class Verdict { kProved, kNotProvable, kBudgetExceeded };

std::string VerdictName(Verdict v);

struct ProveResult {
  Verdict verdict = Verdict::kNotProvable;
  ProofPtr proof;  // set iff kProved
  SearchStats stats;
};

struct ProverOptions {
  // Search nodes; 0 means unlimited.
  size_t budget = 200000;
};

// (ctx) minus n: for each M B, B when M => n and (M - n)B when the split is
// defined. Non-modal formulas are dropped.
FlatContext ContextMinus(const FlatContext& ctx, const Modality& n,
                         const CompiledAxiomSystem& sys);

ProveResult Prove(const FlatContext& ctx, const Formula& goal,
                  const CompiledAxiomSystem& sys, const ProverOptions& opts = {});

// <G, x:B |- A> = <G |- B -> A>, <G, {M} |- A> = <G |- M A>.
Formula FoldModalContext(const ModalContext& ctx, const Formula& goal);

ProveResult ProveModal(const ModalContext& ctx, const Formula& goal,
                       const CompiledAxiomSystem& sys,
                       const ProverOptions& opts = {});

// Derivation of ctx |- a. Requires a in ctx.
ProofPtr IdentityProof(const FlatContext& ctx, const Formula& a,
                       const CompiledAxiomSystem& sys);

// Checks every node against its rule schema. On failure `why` names the
// offending node.
bool CheckProof(const ProofTree& p, const CompiledAxiomSystem& sys,
                std::string* why = nullptr);

// Root-context formulas the derivation actually draws on.
FlatContext UsedAssumptions(const ProofTree& p, const CompiledAxiomSystem& sys);

size_t ProofSize(const ProofTree& p);
size_t ProofHeight(const ProofTree& p);

// Indented listing, one node per line, conclusion then rule.
std::string RenderProof(const ProofTree& p);

}  // namespace trustlogic

#endif  // TRUSTLOGIC_PROVER_H_
