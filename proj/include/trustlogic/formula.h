// Copyright 2026 The trustlogic Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef TRUSTLOGIC_FORMULA_H_
#define TRUSTLOGIC_FORMULA_H_

#include <compare>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace trustlogic {

// An entity, domain or agent. Ids are alphanumeric plus underscore.
struct Agent {
  std::string id;

  Agent() = default;
  explicit Agent(std::string id_in) : id(std::move(id_in)) {}
  auto operator<=>(const Agent&) const = default;
};

bool IsValidAgentId(const std::string& id);

// Finite agent set with the inheritance preorder (a <= b: b inherits a).
class AgentUniverse {
 public:
  AgentUniverse() = default;

  // Throws std::invalid_argument if `leq` is not a preorder on `agents`,
  // mentions unknown agents, or a declared bottom/top is not extremal.
  AgentUniverse(std::vector<Agent> agents,
                std::set<std::pair<Agent, Agent>> leq,
                std::optional<Agent> bottom = std::nullopt,
                std::optional<Agent> top = std::nullopt);

  // Builds the reflexive-transitive closure of `generators`.
  static AgentUniverse FromGenerators(
      std::vector<Agent> agents,
      const std::vector<std::pair<Agent, Agent>>& generators,
      std::optional<Agent> bottom = std::nullopt,
      std::optional<Agent> top = std::nullopt);

  static AgentUniverse Discrete(const std::vector<std::string>& ids);

  const std::vector<Agent>& agents() const { return agents_; }
  size_t size() const { return agents_.size(); }
  bool Contains(const Agent& a) const;
  std::optional<size_t> IndexOf(const Agent& a) const;
  bool Leq(const Agent& a, const Agent& b) const;
  bool LeqIndex(size_t a, size_t b) const { return leq_[a * agents_.size() + b]; }
  const std::optional<Agent>& bottom() const { return bottom_; }
  const std::optional<Agent>& top() const { return top_; }

 private:
  std::vector<Agent> agents_;
  std::vector<bool> leq_;
  std::optional<Agent> bottom_;
  std::optional<Agent> top_;
};

class Modality {
 public:
  enum class Kind { kBelief, kInteract, kBox, kWish, kNamed };

  static Modality Belief(Agent a);
  // I_{recipient <- sender}.
  static Modality Interact(Agent recipient, Agent sender);
  static Modality Box();
  static Modality Wish(Agent a);
  static Modality Named(std::string id);

  Kind kind() const { return kind_; }
  // Belief/Wish agent, or the Interact recipient.
  const Agent& agent() const { return first_; }
  const Agent& recipient() const { return first_; }
  const Agent& sender() const { return second_; }
  const std::string& name() const { return first_.id; }

  // Agents referenced by this modality.
  std::vector<Agent> Agents() const;

  // Bracket form used by the text syntax, e.g. "[I a <- b]".
  std::string ToString() const;

  auto operator<=>(const Modality&) const = default;

 private:
  Modality(Kind kind, Agent first, Agent second)
      : kind_(kind), first_(std::move(first)), second_(std::move(second)) {}

  Kind kind_ = Kind::kBox;
  Agent first_;
  Agent second_;
};

using ModalityList = std::vector<Modality>;

std::string RenderModalityList(const ModalityList& l);

struct FormulaNode;

// Immutable formula handle with structural equality.
class Formula {
 public:
  enum class Kind { kTop, kBot, kToken, kModal, kImp, kAnd, kOr };

  Formula() = default;  // Top.

  static Formula Top();
  static Formula Bot();
  static Formula Token(std::string name);
  static Formula Modal(Modality m, Formula body);
  static Formula Imp(Formula lhs, Formula rhs);
  static Formula And(Formula lhs, Formula rhs);
  static Formula Or(Formula lhs, Formula rhs);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }
  const std::string& token() const;
  const Modality& modality() const;
  const Formula& body() const;
  const Formula& lhs() const;
  const Formula& rhs() const;

  size_t hash() const;
  size_t size() const;  // node count
  size_t depth() const;

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }
  // Total structural order, for ordered containers.
  bool operator<(const Formula& other) const;

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> node)
      : node_(std::move(node)) {}
  const FormulaNode& node() const;

  // Null means Top.
  std::shared_ptr<const FormulaNode> node_;
};

int CompareFormulas(const Formula& a, const Formula& b);

struct FormulaHash {
  size_t operator()(const Formula& f) const { return f.hash(); }
};

// Macros.
Formula Not(const Formula& a);
Formula BigAnd(const std::vector<Formula>& fs);
Formula BigOr(const std::vector<Formula>& fs);
Formula ForAll(const std::vector<Agent>& agents,
               const std::function<Formula(const Agent&)>& f);
Formula Exists(const std::vector<Agent>& agents,
               const std::function<Formula(const Agent&)>& f);
// l(A): M1 (M2 (... A)).
Formula ApplyModalities(const ModalityList& l, const Formula& body);
// I_{a1 <- a2} I_{a2 <- a3} ... as a modality list. Needs >= 2 agents.
ModalityList ChainModalities(const std::vector<Agent>& chain);
Formula Chain(const std::vector<Agent>& chain, const Formula& body);
// l(A) => A.
Formula Validity(const ModalityList& l, const Formula& body);

// Collects every token name, in first-occurrence order.
std::vector<std::string> TokensOf(const std::vector<Formula>& fs);
// Collects every modality, sorted.
std::set<Modality> ModalitiesOf(const std::vector<Formula>& fs);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  size_t position() const { return position_; }

 private:
  size_t position_;
};

// Parses the formula grammar. With a universe, agent ids are checked.
Formula ParseFormula(const std::string& text);
Formula ParseFormula(const std::string& text, const AgentUniverse& universe);
// Parses a bracketed modality such as "[B a]".
Modality ParseModality(const std::string& text);

std::string RenderFormula(const Formula& f);

// Ordered, duplicate-free list of formulas.
class FlatContext {
 public:
  FlatContext() = default;
  FlatContext(std::initializer_list<Formula> fs);
  explicit FlatContext(const std::vector<Formula>& fs);

  // Returns false if already present.
  bool Add(const Formula& f);
  bool Contains(const Formula& f) const;
  const std::vector<Formula>& formulas() const { return formulas_; }
  size_t size() const { return formulas_.size(); }
  bool empty() const { return formulas_.empty(); }
  FlatContext With(const Formula& f) const;
  FlatContext Without(const Formula& f) const;

  bool operator==(const FlatContext& o) const { return formulas_ == o.formulas_; }

 private:
  std::vector<Formula> formulas_;
};

struct Hypothesis {
  std::string name;
  Formula formula;
  bool operator==(const Hypothesis&) const = default;
};

struct Lock {
  Modality modality;
  bool operator==(const Lock&) const = default;
};

using ContextEntry = std::variant<Hypothesis, Lock>;

class ModalContext {
 public:
  ModalContext() = default;
  // Throws std::invalid_argument on duplicate hypothesis names.
  explicit ModalContext(std::vector<ContextEntry> entries);

  static ModalContext FromFlat(const FlatContext& ctx,
                               const std::string& prefix = "h");

  ModalContext WithHypothesis(std::string name, Formula f) const;
  ModalContext WithLock(Modality m) const;

  const std::vector<ContextEntry>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }
  ModalityList LockWord() const;
  size_t LockCount() const;
  bool HasName(const std::string& name) const;
  bool IsFlat() const { return LockCount() == 0; }
  FlatContext Hypotheses() const;

  // First `n` entries.
  ModalContext Prefix(size_t n) const;

 private:
  std::vector<ContextEntry> entries_;
};

std::string RenderModalContext(const ModalContext& ctx);

struct Sequent {
  FlatContext context;
  Formula goal;
};

std::string RenderSequent(const FlatContext& ctx, const Formula& goal);

}  // namespace trustlogic

template <>
struct std::hash<trustlogic::Formula> {
  size_t operator()(const trustlogic::Formula& f) const { return f.hash(); }
};

#endif  // TRUSTLOGIC_FORMULA_H_
