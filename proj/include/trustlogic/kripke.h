// Copyright 2026 The trustlogic Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef TRUSTLOGIC_KRIPKE_H_
#define TRUSTLOGIC_KRIPKE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "trustlogic/axioms.h"
#include "trustlogic/formula.h"

namespace trustlogic {

// Sets of worlds are bitmasks; frames hold at most kMaxWorlds worlds.
using WorldSet = uint64_t;

// Finite modal Kripke frame. Relations are stored as successor rows;
// modalities without an entry have the empty relation, tokens without an
// entry the empty valuation.
class KripkeFrame {
 public:
  static constexpr size_t kMaxWorlds = 64;

  KripkeFrame() = default;
  // Reflexive-only order, empty valuation and relations.
  explicit KripkeFrame(std::vector<std::string> world_names);

  size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<size_t> IndexOf(const std::string& world) const;

  // up_[v] = { w | v <= w }.
  WorldSet Up(size_t v) const { return up_[v]; }
  bool Leq(size_t v, size_t w) const { return (up_[v] >> w) & 1; }
  void SetLeq(size_t v, size_t w, bool on = true);

  WorldSet Valuation(const std::string& token) const;
  void SetValuation(const std::string& token, WorldSet s);
  const std::map<std::string, WorldSet>& valuations() const { return val_; }

  // Successors of v under R_m.
  WorldSet Successors(const Modality& m, size_t v) const;
  void AddEdge(const Modality& m, size_t v, size_t w);
  void SetRelation(const Modality& m, std::vector<WorldSet> rows);
  const std::map<Modality, std::vector<WorldSet>>& relations() const { return rel_; }

  WorldSet All() const;

  bool operator==(const KripkeFrame&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<WorldSet> up_;
  std::map<std::string, WorldSet> val_;
  std::map<Modality, std::vector<WorldSet>> rel_;
};

// Preorder, token persistence and the back condition. On failure `why`
// describes the first violation.
bool CheckFrameConditions(const KripkeFrame& f, std::string* why = nullptr);

// R_{N1};...;R_{Nn} contained in R_M for every generator (identity for
// epsilon generators).
bool Conforms(const KripkeFrame& f, const CompiledAxiomSystem& sys,
              std::string* why = nullptr);

// Adds the least edges making `f` conform and meet the back condition.
void CloseFrame(KripkeFrame& f, const CompiledAxiomSystem& sys);

// Worlds satisfying `a`.
WorldSet SatisfyingWorlds(const KripkeFrame& f, const Formula& a);
bool Satisfies(const KripkeFrame& f, size_t world, const Formula& a);

// Every world satisfying all of ctx satisfies goal.
bool FrameValidates(const KripkeFrame& f, const FlatContext& ctx, const Formula& goal);
// Worlds satisfying ctx but not goal.
WorldSet RefutingWorlds(const KripkeFrame& f, const FlatContext& ctx, const Formula& goal);

// Worlds v, w; identity order; S_t empty, S_r = {w}; R_m = {(v, w)}.
KripkeFrame LemmaCounterFrame(const Modality& m = Modality::Named("M"));

struct CountermodelOptions {
  size_t max_worlds = 3;
  // Tokens beyond this many stay empty and NotFound becomes Undetermined.
  size_t max_tokens = 4;
  // Closed frames examined before giving up; 0 means unlimited.
  size_t max_candidates = 2000000;
};

struct CountermodelResult {
  enum class Status { kFound, kNotFound, kUndetermined };
  Status status = Status::kNotFound;
  std::optional<KripkeFrame> frame;
  size_t world = 0;
  size_t candidates = 0;
};

std::string CountermodelStatusName(CountermodelResult::Status s);

// Exhaustive search over frames with up to max_worlds worlds, preorders up
// to isomorphism, up-set valuations of the sequent's tokens and relations on
// the sequent's modalities closed under CloseFrame.
CountermodelResult FindCountermodel(const FlatContext& ctx, const Formula& goal,
                                    const CompiledAxiomSystem& sys,
                                    const CountermodelOptions& opts = {});

// Random conforming frame with `n` worlds over the given tokens and the
// modalities of `sys` plus `extra`.
KripkeFrame RandomFrame(std::mt19937_64& rng, const CompiledAxiomSystem& sys, size_t n,
                        const std::vector<std::string>& tokens,
                        const std::vector<Modality>& extra = {}, double edge_p = 0.25);

// Text listing: worlds, order, valuation and relations, one item per line.
std::string RenderFrame(const KripkeFrame& f);
std::string FrameToJson(const KripkeFrame& f, int indent = 2);
// Inverse of FrameToJson. Throws std::invalid_argument.
KripkeFrame FrameFromJson(const std::string& text);

}  // namespace trustlogic

#endif  // TRUSTLOGIC_KRIPKE_H_
