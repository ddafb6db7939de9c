// Copyright 2026 The trustlogic Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef TRUSTLOGIC_AXIOMS_H_
#define TRUSTLOGIC_AXIOMS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trustlogic/formula.h"

namespace trustlogic {

// head(A) => unfolding(A) for every A. An empty unfolding is an epsilon axiom.
struct UnfoldingAxiom {
  Modality head;
  ModalityList unfolding;
  bool operator==(const UnfoldingAxiom&) const = default;
};

std::string SerializeAxiom(const UnfoldingAxiom& ax);
// Parses "[M] => [N][R]" or "[M] => ." (an optional leading "axiom" is
// accepted). Throws ParseError.
UnfoldingAxiom ParseAxiom(const std::string& text);

// The closure of a generator set in table form: unit reach, the split
// table, and the epsilon set. Modalities not in the table behave as plain K
// modalities (unit only on themselves).
class CompiledAxiomSystem {
 public:
  static constexpr int kUndefined = -1;

  CompiledAxiomSystem() = default;

  // Throws std::invalid_argument if a generator unfolds to more than two
  // modalities or mentions a modality outside `modalities`.
  static CompiledAxiomSystem Compile(std::vector<Modality> modalities,
                                     std::vector<UnfoldingAxiom> generators);

  const std::vector<Modality>& modalities() const { return modalities_; }
  const std::vector<UnfoldingAxiom>& generators() const { return generators_; }
  size_t size() const { return modalities_.size(); }
  std::optional<size_t> IndexOf(const Modality& m) const;

  bool Unit(const Modality& m, const Modality& n) const;
  std::optional<Modality> Split(const Modality& m, const Modality& n) const;
  bool Eps(const Modality& m) const;
  bool HasEps() const;
  // Decides m => l in the closure by factoring through the split table.
  bool Unfolds(const Modality& m, const ModalityList& l) const;

  bool UnitAt(size_t m, size_t n) const { return unit_[m * size() + n]; }
  int SplitAt(size_t m, size_t n) const { return split_[m * size() + n]; }
  bool EpsAt(size_t m) const { return eps_[m]; }

  // Replaces split(m, n). Throws std::invalid_argument unless m => n.r is
  // derivable from the generators.
  void SetSplit(const Modality& m, const Modality& n, const Modality& r);

 private:
  std::vector<Modality> modalities_;
  std::vector<UnfoldingAxiom> generators_;
  std::vector<bool> unit_;
  std::vector<int> split_;
  std::vector<bool> pair_;  // m => n.r derivable, indexed [(m*k+n)*k+r]
  std::vector<bool> eps_;
};

// Every Belief, Interact and Wish modality over `universe`, plus Box when
// `include_box` is set.
std::vector<Modality> StandardModalities(const AgentUniverse& universe,
                                         bool include_box);

// Compiles over the standard modalities of `universe` together with any
// modality the generators mention. Agents must belong to the universe.
CompiledAxiomSystem Compile(const std::vector<UnfoldingAxiom>& generators,
                            const AgentUniverse& universe);

// Self awareness, recipient awareness, intent of claim and the three
// inheritance schemes; with `include_box` also public awareness and public
// verifiability. Wish modalities get no axioms.
std::vector<UnfoldingAxiom> StandardGenerators(const AgentUniverse& universe,
                                               bool include_box);

CompiledAxiomSystem StandardSystem(const AgentUniverse& universe,
                                   bool include_box = false);

// Words of length <= bound derivable from each modality of `sys` (rows in
// modality order). A word is a list of indices into sys.modalities().
std::vector<std::vector<std::vector<uint16_t>>> DerivableWords(
    const CompiledAxiomSystem& sys, size_t bound);

struct DecomposabilityViolation {
  Modality head;
  ModalityList unfolding;
  std::string reason;
};

struct DecomposabilityReport {
  size_t bound = 0;
  size_t unfoldings_checked = 0;
  size_t violation_count = 0;
  std::vector<DecomposabilityViolation> violations;  // first 64
  bool ok() const { return violation_count == 0; }
};

// Checks every derivable M => N.N'.l of length <= bound against the split
// table. bound must be at least 3.
DecomposabilityReport CheckDecomposable(const CompiledAxiomSystem& sys,
                                        size_t bound = 4);

}  // namespace trustlogic

#endif  // TRUSTLOGIC_AXIOMS_H_
