// Copyright 2026 The trustlogic Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "trustlogic/prover.h"

#include <algorithm>
#include <climits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace trustlogic {

namespace {

constexpr Rule kAllRules[] = {Rule::kVar,   Rule::kTopR,  Rule::kBotL,  Rule::kImpR,
                              Rule::kImpL,  Rule::kModR,  Rule::kAndL1, Rule::kAndL2,
                              Rule::kAndR,  Rule::kOrL,   Rule::kOrR1,  Rule::kOrR2,
                              Rule::kEpsL};

}  // namespace

std::string RuleName(Rule r) {
  switch (r) {
    case Rule::kVar: return "Var";
    case Rule::kTopR: return "TopR";
    case Rule::kBotL: return "BotL";
    case Rule::kImpR: return "ImpR";
    case Rule::kImpL: return "ImpL";
    case Rule::kModR: return "ModR";
    case Rule::kAndL1: return "AndL1";
    case Rule::kAndL2: return "AndL2";
    case Rule::kAndR: return "AndR";
    case Rule::kOrL: return "OrL";
    case Rule::kOrR1: return "OrR1";
    case Rule::kOrR2: return "OrR2";
    case Rule::kEpsL: return "EpsL";
  }
  return "?";
}

std::optional<Rule> RuleFromName(const std::string& name) {
  for (Rule r : kAllRules) {
    if (RuleName(r) == name) return r;
  }
  return std::nullopt;
}

std::string VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kProved: return "Proved";
    case Verdict::kNotProvable: return "NotProvable";
    case Verdict::kBudgetExceeded: return "BudgetExceeded";
  }
  return "?";
}

FlatContext ContextMinus(const FlatContext& ctx, const Modality& n,
                         const CompiledAxiomSystem& sys) {
  FlatContext out;
  for (const Formula& f : ctx.formulas()) {
    if (!f.is(Formula::Kind::kModal)) continue;
    if (sys.Unit(f.modality(), n)) out.Add(f.body());
    if (auto r = sys.Split(f.modality(), n)) out.Add(Formula::Modal(*r, f.body()));
  }
  return out;
}

namespace {

using Ctx = std::vector<int>;  // sorted formula ids
using CtxPtr = std::shared_ptr<const Ctx>;

bool Has(const Ctx& c, int id) { return std::binary_search(c.begin(), c.end(), id); }

Ctx Insert(const Ctx& c, int id) {
  Ctx out;
  out.reserve(c.size() + 1);
  auto it = std::lower_bound(c.begin(), c.end(), id);
  out.insert(out.end(), c.begin(), it);
  if (it == c.end() || *it != id) out.push_back(id);
  out.insert(out.end(), it, c.end());
  return out;
}

bool Subset(const Ctx& a, const Ctx& b) {
  if (a.size() > b.size()) return false;
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

struct CtxHash {
  size_t operator()(const std::pair<int, Ctx>& k) const {
    size_t h = std::hash<int>()(k.first) * 0x9e3779b97f4a7c15ULL;
    for (int x : k.second) h = (h ^ static_cast<size_t>(x)) * 0x100000001b3ULL;
    return h;
  }
};

// Modalities seen by the search, sys modalities first.
class ModTable {
 public:
  explicit ModTable(const CompiledAxiomSystem& sys) : sys_(sys), mods_(sys.modalities()) {}

  int Index(const Modality& m) {
    if (auto i = sys_.IndexOf(m)) return static_cast<int>(*i);
    for (size_t i = sys_.size(); i < mods_.size(); ++i) {
      if (mods_[i] == m) return static_cast<int>(i);
    }
    mods_.push_back(m);
    return static_cast<int>(mods_.size() - 1);
  }
  const Modality& Get(int i) const { return mods_[i]; }
  bool Unit(int m, int n) const {
    const int k = static_cast<int>(sys_.size());
    if (m < k && n < k) return sys_.UnitAt(m, n);
    return m == n;
  }
  int Split(int m, int n) const {
    const int k = static_cast<int>(sys_.size());
    if (m < k && n < k) return sys_.SplitAt(m, n);
    return CompiledAxiomSystem::kUndefined;
  }
  bool Eps(int m) const { return m < static_cast<int>(sys_.size()) && sys_.EpsAt(m); }

 private:
  const CompiledAxiomSystem& sys_;
  std::vector<Modality> mods_;
};

struct FNode {
  Formula::Kind kind;
  int a = -1;
  int b = -1;
  int mod = -1;
  Formula f;
};

class FormulaTable {
 public:
  explicit FormulaTable(ModTable& mods) : mods_(mods) {}

  int Intern(const Formula& f) {
    auto it = ids_.find(f);
    if (it != ids_.end()) return it->second;
    FNode n{f.kind(), -1, -1, -1, f};
    switch (f.kind()) {
      case Formula::Kind::kModal:
        n.mod = mods_.Index(f.modality());
        n.a = Intern(f.body());
        break;
      case Formula::Kind::kImp:
      case Formula::Kind::kAnd:
      case Formula::Kind::kOr:
        n.a = Intern(f.lhs());
        n.b = Intern(f.rhs());
        break;
      default:
        break;
    }
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(n);
    ids_.emplace(f, id);
    return id;
  }
  int Modal(int mod, int body) {
    return Intern(Formula::Modal(mods_.Get(mod), nodes_[body].f));
  }
  const FNode& operator[](int id) const { return nodes_[id]; }

 private:
  ModTable& mods_;
  std::vector<FNode> nodes_;
  std::unordered_map<Formula, int, FormulaHash> ids_;
};

struct INode;
using INodePtr = std::shared_ptr<const INode>;
struct INode {
  Rule rule;
  int principal;  // -1 for right rules
  CtxPtr ctx;
  int goal;
  std::vector<INodePtr> prem;
};

struct BudgetExhausted {};

class Engine {
 public:
  Engine(const CompiledAxiomSystem& sys, const ProverOptions& opts)
      : mods_(sys), table_(mods_), budget_(opts.budget) {}

  FormulaTable& table() { return table_; }
  SearchStats& stats() { return stats_; }

  Ctx Minus(const Ctx& c, int n) {
    Ctx out;
    for (int id : c) {
      const FNode& f = table_[id];
      if (f.kind != Formula::Kind::kModal) continue;
      if (mods_.Unit(f.mod, n)) out.push_back(f.a);
      int r = mods_.Split(f.mod, n);
      if (r != CompiledAxiomSystem::kUndefined) out.push_back(table_.Modal(r, f.a));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  INodePtr Make(Rule r, int principal, const CtxPtr& ctx, int goal,
                std::vector<INodePtr> prem) {
    return std::make_shared<INode>(INode{r, principal, ctx, goal, std::move(prem)});
  }

  // Requires a in c (or a trivially true).
  INodePtr Identity(const CtxPtr& c, int a) {
    const FNode f = table_[a];
    switch (f.kind) {
      case Formula::Kind::kTop:
        return Make(Rule::kTopR, -1, c, a, {});
      case Formula::Kind::kBot:
        return Make(Rule::kBotL, a, c, a, {});
      case Formula::Kind::kToken:
        return Make(Rule::kVar, a, c, a, {});
      case Formula::Kind::kImp: {
        int a1 = f.a, a2 = f.b;
        auto c1 = std::make_shared<const Ctx>(Insert(*c, a1));
        INodePtr inner;
        if (Has(*c1, a2)) {
          inner = Identity(c1, a2);
        } else {
          auto c2 = std::make_shared<const Ctx>(Insert(*c1, a2));
          inner = Make(Rule::kImpL, a, c1, a2, {Identity(c1, a1), Identity(c2, a2)});
        }
        return Make(Rule::kImpR, -1, c, a, {inner});
      }
      case Formula::Kind::kAnd: {
        int a1 = f.a, a2 = f.b;
        CtxPtr cur = c;
        std::vector<std::pair<Rule, CtxPtr>> steps;
        if (!Has(*cur, a1)) {
          steps.push_back({Rule::kAndL1, cur});
          cur = std::make_shared<const Ctx>(Insert(*cur, a1));
        }
        if (!Has(*cur, a2)) {
          steps.push_back({Rule::kAndL2, cur});
          cur = std::make_shared<const Ctx>(Insert(*cur, a2));
        }
        INodePtr node = Make(Rule::kAndR, -1, cur, a, {Identity(cur, a1), Identity(cur, a2)});
        for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
          node = Make(it->first, a, it->second, a, {node});
        }
        return node;
      }
      case Formula::Kind::kOr: {
        int a1 = f.a, a2 = f.b;
        if (Has(*c, a1)) return Make(Rule::kOrR1, -1, c, a, {Identity(c, a1)});
        if (Has(*c, a2)) return Make(Rule::kOrR2, -1, c, a, {Identity(c, a2)});
        auto c1 = std::make_shared<const Ctx>(Insert(*c, a1));
        auto c2 = std::make_shared<const Ctx>(Insert(*c, a2));
        return Make(Rule::kOrL, a, c, a,
                    {Make(Rule::kOrR1, -1, c1, a, {Identity(c1, a1)}),
                     Make(Rule::kOrR2, -1, c2, a, {Identity(c2, a2)})});
      }
      case Formula::Kind::kModal: {
        auto m = std::make_shared<const Ctx>(Minus(*c, f.mod));
        return Make(Rule::kModR, -1, c, a, {Identity(m, f.a)});
      }
    }
    return nullptr;
  }

  struct Outcome {
    INodePtr proof;
    int dep = INT_MAX;  // shallowest ancestor a loop prune relied on
  };

  Outcome Search(const CtxPtr& c, int goal) {
    if (budget_ != 0 && stats_.nodes_expanded >= budget_) throw BudgetExhausted{};
    ++stats_.nodes_expanded;
    const int depth = static_cast<int>(path_.size());
    stats_.max_depth = std::max(stats_.max_depth, static_cast<size_t>(depth));
    const FNode& g = table_[goal];

    if (g.kind == Formula::Kind::kTop) return {Make(Rule::kTopR, -1, c, goal, {})};
    for (int id : *c) {
      if (table_[id].kind == Formula::Kind::kBot) return {Make(Rule::kBotL, id, c, goal, {})};
    }
    if (Has(*c, goal)) return {Identity(c, goal)};

    std::pair<int, Ctx> key{goal, *c};
    if (auto it = proved_.find(key); it != proved_.end()) {
      ++stats_.cache_hits;
      return {it->second};
    }
    if (auto it = failed_.find(goal); it != failed_.end()) {
      for (const Ctx& f : it->second) {
        if (Subset(*c, f)) {
          ++stats_.subsumption_prunes;
          return {};
        }
      }
    }
    if (auto it = open_.find(goal); it != open_.end()) {
      for (int anc : it->second) {
        if (Subset(*c, *path_[anc])) {
          ++stats_.subsumption_prunes;
          return {nullptr, anc};
        }
      }
    }

    path_.push_back(c);
    open_[goal].push_back(depth);
    Outcome out = Expand(c, goal, depth);
    open_[goal].pop_back();
    path_.pop_back();

    if (out.proof) {
      proved_.emplace(std::move(key), out.proof);
      out.dep = INT_MAX;
    } else if (!quick_ && out.dep >= depth) {
      auto& list = failed_[goal];
      // Drop entries the new one subsumes.
      list.erase(std::remove_if(list.begin(), list.end(),
                                [&](const Ctx& f) { return Subset(f, *c); }),
                 list.end());
      list.push_back(*c);
      out.dep = INT_MAX;
    }
    return out;
  }

 private:
  CtxPtr With(const CtxPtr& c, int id) { return std::make_shared<const Ctx>(Insert(*c, id)); }

  Outcome Expand(const CtxPtr& c, int goal, int /*depth*/) {
    const FNode g = table_[goal];
    // Invertible left steps.
    for (int id : *c) {
      const FNode f = table_[id];
      switch (f.kind) {
        case Formula::Kind::kAnd: {
          int pick = !Has(*c, f.a) ? f.a : (!Has(*c, f.b) ? f.b : -1);
          if (pick < 0) break;
          Outcome sub = Search(With(c, pick), goal);
          if (!sub.proof) return sub;
          return {Make(pick == f.a ? Rule::kAndL1 : Rule::kAndL2, id, c, goal, {sub.proof})};
        }
        case Formula::Kind::kModal: {
          if (!mods_.Eps(f.mod) || Has(*c, f.a)) break;
          Outcome sub = Search(With(c, f.a), goal);
          if (!sub.proof) return sub;
          return {Make(Rule::kEpsL, id, c, goal, {sub.proof})};
        }
        case Formula::Kind::kImp: {
          if (Has(*c, f.b)) break;
          bool lhs_free = table_[f.a].kind == Formula::Kind::kTop || Has(*c, f.a);
          if (!lhs_free) break;
          Outcome sub = Search(With(c, f.b), goal);
          if (!sub.proof) return sub;
          return {Make(Rule::kImpL, id, c, goal, {Identity(c, f.a), sub.proof})};
        }
        case Formula::Kind::kOr: {
          if (Has(*c, f.a) || Has(*c, f.b)) break;
          Outcome l = Search(With(c, f.a), goal);
          if (!l.proof) return l;
          Outcome r = Search(With(c, f.b), goal);
          if (!r.proof) return r;
          return {Make(Rule::kOrL, id, c, goal, {l.proof, r.proof})};
        }
        default:
          break;
      }
    }
    // Invertible right steps.
    if (g.kind == Formula::Kind::kImp) {
      Outcome sub = Search(With(c, g.a), g.b);
      if (!sub.proof) return sub;
      return {Make(Rule::kImpR, -1, c, goal, {sub.proof})};
    }
    if (g.kind == Formula::Kind::kAnd) {
      Outcome l = Search(c, g.a);
      if (!l.proof) return l;
      Outcome r = Search(c, g.b);
      if (!r.proof) return r;
      return {Make(Rule::kAndR, -1, c, goal, {l.proof, r.proof})};
    }
    // An implication whose antecedent follows without further implication
    // choices is used right away.
    if (!quick_) {
      for (int id : *c) {
        const FNode f = table_[id];
        if (f.kind != Formula::Kind::kImp || Has(*c, f.b)) continue;
        quick_ = true;
        Outcome l = Search(c, f.a);
        quick_ = false;
        if (!l.proof) continue;
        Outcome r = Search(With(c, f.b), goal);
        if (!r.proof) return r;
        return {Make(Rule::kImpL, id, c, goal, {l.proof, r.proof})};
      }
    }
    // Choice points.
    int dep = INT_MAX;
    if (g.kind == Formula::Kind::kOr) {
      Outcome l = Search(c, g.a);
      if (l.proof) return {Make(Rule::kOrR1, -1, c, goal, {l.proof})};
      dep = std::min(dep, l.dep);
      Outcome r = Search(c, g.b);
      if (r.proof) return {Make(Rule::kOrR2, -1, c, goal, {r.proof})};
      dep = std::min(dep, r.dep);
    }
    if (g.kind == Formula::Kind::kModal) {
      auto m = std::make_shared<const Ctx>(Minus(*c, g.mod));
      Outcome sub = Search(m, g.a);
      if (sub.proof) return {Make(Rule::kModR, -1, c, goal, {sub.proof})};
      dep = std::min(dep, sub.dep);
    }
    for (int id : *c) {
      if (quick_) break;
      const FNode f = table_[id];
      if (f.kind != Formula::Kind::kImp || Has(*c, f.b)) continue;
      Outcome l = Search(c, f.a);
      if (!l.proof) {
        dep = std::min(dep, l.dep);
        continue;
      }
      // With f.a provable, c and c + f.b prove the same goals (cut), so no
      // other choice can succeed once this branch fails.
      Outcome r = Search(With(c, f.b), goal);
      if (!r.proof) return {nullptr, std::min(dep, r.dep)};
      return {Make(Rule::kImpL, id, c, goal, {l.proof, r.proof})};
    }
    return {nullptr, dep};
  }

  ModTable mods_;
  FormulaTable table_;
  size_t budget_;
  bool quick_ = false;
  SearchStats stats_;
  std::vector<CtxPtr> path_;
  std::unordered_map<int, std::vector<int>> open_;
  std::unordered_map<std::pair<int, Ctx>, INodePtr, CtxHash> proved_;
  std::unordered_map<int, std::vector<Ctx>> failed_;
};

// Root formulas first, in their given order.
FlatContext ToFlat(FormulaTable& t, const Ctx& c, const std::unordered_map<int, int>& rank) {
  std::vector<std::pair<long, int>> order;
  for (int id : c) {
    auto it = rank.find(id);
    order.push_back({it != rank.end() ? it->second : static_cast<long>(rank.size()) + id, id});
  }
  std::sort(order.begin(), order.end());
  FlatContext out;
  for (const auto& [r, id] : order) out.Add(t[id].f);
  return out;
}

class Exporter {
 public:
  Exporter(FormulaTable& t, const FlatContext& root) : table_(t) {
    for (const Formula& f : root.formulas()) rank_.emplace(t.Intern(f), static_cast<int>(rank_.size()));
  }

  ProofPtr Export(const INodePtr& n) {
    auto it = done_.find(n.get());
    if (it != done_.end()) return it->second;
    auto p = std::make_shared<ProofTree>();
    p->rule = n->rule;
    auto ci = ctxs_.find(n->ctx.get());
    if (ci == ctxs_.end()) ci = ctxs_.emplace(n->ctx.get(), ToFlat(table_, *n->ctx, rank_)).first;
    p->context = ci->second;
    p->goal = table_[n->goal].f;
    if (n->principal >= 0) p->principal = table_[n->principal].f;
    for (const auto& q : n->prem) p->premises.push_back(Export(q));
    done_.emplace(n.get(), p);
    return p;
  }

 private:
  FormulaTable& table_;
  std::unordered_map<int, int> rank_;
  std::unordered_map<const INode*, ProofPtr> done_;
  std::unordered_map<const Ctx*, FlatContext> ctxs_;
};

Ctx InternCtx(FormulaTable& t, const FlatContext& ctx) {
  Ctx c;
  for (const Formula& f : ctx.formulas()) c.push_back(t.Intern(f));
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

}  // namespace

ProveResult Prove(const FlatContext& ctx, const Formula& goal,
                  const CompiledAxiomSystem& sys, const ProverOptions& opts) {
  Engine eng(sys, opts);
  auto c = std::make_shared<const Ctx>(InternCtx(eng.table(), ctx));
  int g = eng.table().Intern(goal);
  ProveResult res;
  try {
    auto out = eng.Search(c, g);
    if (out.proof) {
      res.verdict = Verdict::kProved;
      Exporter ex(eng.table(), ctx);
      res.proof = ex.Export(out.proof);
    } else {
      res.verdict = Verdict::kNotProvable;
    }
  } catch (const BudgetExhausted&) {
    res.verdict = Verdict::kBudgetExceeded;
  }
  res.stats = eng.stats();
  return res;
}

Formula FoldModalContext(const ModalContext& ctx, const Formula& goal) {
  Formula cur = goal;
  const auto& e = ctx.entries();
  for (auto it = e.rbegin(); it != e.rend(); ++it) {
    if (const auto* h = std::get_if<Hypothesis>(&*it)) {
      cur = Formula::Imp(h->formula, cur);
    } else {
      cur = Formula::Modal(std::get<Lock>(*it).modality, cur);
    }
  }
  return cur;
}

ProveResult ProveModal(const ModalContext& ctx, const Formula& goal,
                       const CompiledAxiomSystem& sys, const ProverOptions& opts) {
  return Prove(FlatContext(), FoldModalContext(ctx, goal), sys, opts);
}

ProofPtr IdentityProof(const FlatContext& ctx, const Formula& a,
                       const CompiledAxiomSystem& sys) {
  if (!ctx.Contains(a)) throw std::invalid_argument("identity needs the formula in context");
  Engine eng(sys, {0});
  auto c = std::make_shared<const Ctx>(InternCtx(eng.table(), ctx));
  int id = eng.table().Intern(a);
  Exporter ex(eng.table(), ctx);
  return ex.Export(eng.Identity(c, id));
}

namespace {

bool SameSet(const FlatContext& a, const FlatContext& b) {
  if (a.size() != b.size()) return false;
  for (const Formula& f : a.formulas()) {
    if (!b.Contains(f)) return false;
  }
  return true;
}

class Checker {
 public:
  explicit Checker(const CompiledAxiomSystem& sys) : sys_(sys) {}

  bool Check(const ProofTree& p, std::string* why) {
    if (ok_.count(&p)) return true;
    std::string local;
    if (!Local(p, &local)) {
      if (why) *why = RuleName(p.rule) + " at " + RenderSequent(p.context, p.goal) + ": " + local;
      return false;
    }
    for (const auto& q : p.premises) {
      if (!q || !Check(*q, why)) return false;
    }
    ok_.insert(&p);
    return true;
  }

 private:
  bool Premises(const ProofTree& p, size_t n, std::string* why) {
    if (p.premises.size() != n) {
      *why = "expected " + std::to_string(n) + " premises";
      return false;
    }
    for (const auto& q : p.premises) {
      if (!q) {
        *why = "null premise";
        return false;
      }
    }
    return true;
  }
  bool Prem(const ProofTree& q, const FlatContext& ctx, const Formula& goal,
            std::string* why) {
    if (q.goal != goal) {
      *why = "premise goal mismatch";
      return false;
    }
    if (!SameSet(q.context, ctx)) {
      *why = "premise context mismatch";
      return false;
    }
    return true;
  }
  bool Principal(const ProofTree& p, Formula::Kind k, std::string* why) {
    if (!p.principal || !p.principal->is(k) || !p.context.Contains(*p.principal)) {
      *why = "bad principal formula";
      return false;
    }
    return true;
  }

  bool Local(const ProofTree& p, std::string* why) {
    using K = Formula::Kind;
    const Formula& g = p.goal;
    switch (p.rule) {
      case Rule::kVar:
        if (!g.is(K::kToken)) return *why = "goal is not a token", false;
        if (!p.context.Contains(g)) return *why = "token not in context", false;
        return Premises(p, 0, why);
      case Rule::kTopR:
        if (!g.is(K::kTop)) return *why = "goal is not true", false;
        return Premises(p, 0, why);
      case Rule::kBotL:
        if (!p.context.Contains(Formula::Bot())) return *why = "false not in context", false;
        return Premises(p, 0, why);
      case Rule::kImpR:
        if (!g.is(K::kImp)) return *why = "goal is not an implication", false;
        return Premises(p, 1, why) &&
               Prem(*p.premises[0], p.context.With(g.lhs()), g.rhs(), why);
      case Rule::kImpL: {
        if (!Principal(p, K::kImp, why) || !Premises(p, 2, why)) return false;
        const Formula& f = *p.principal;
        return Prem(*p.premises[0], p.context, f.lhs(), why) &&
               Prem(*p.premises[1], p.context.With(f.rhs()), g, why);
      }
      case Rule::kModR:
        if (!g.is(K::kModal)) return *why = "goal is not modal", false;
        return Premises(p, 1, why) &&
               Prem(*p.premises[0], ContextMinus(p.context, g.modality(), sys_), g.body(), why);
      case Rule::kAndL1:
      case Rule::kAndL2: {
        if (!Principal(p, K::kAnd, why) || !Premises(p, 1, why)) return false;
        const Formula& part = p.rule == Rule::kAndL1 ? p.principal->lhs() : p.principal->rhs();
        return Prem(*p.premises[0], p.context.With(part), g, why);
      }
      case Rule::kAndR:
        if (!g.is(K::kAnd)) return *why = "goal is not a conjunction", false;
        return Premises(p, 2, why) && Prem(*p.premises[0], p.context, g.lhs(), why) &&
               Prem(*p.premises[1], p.context, g.rhs(), why);
      case Rule::kOrL: {
        if (!Principal(p, K::kOr, why) || !Premises(p, 2, why)) return false;
        const Formula& f = *p.principal;
        return Prem(*p.premises[0], p.context.With(f.lhs()), g, why) &&
               Prem(*p.premises[1], p.context.With(f.rhs()), g, why);
      }
      case Rule::kOrR1:
      case Rule::kOrR2:
        if (!g.is(K::kOr)) return *why = "goal is not a disjunction", false;
        return Premises(p, 1, why) &&
               Prem(*p.premises[0], p.context, p.rule == Rule::kOrR1 ? g.lhs() : g.rhs(), why);
      case Rule::kEpsL: {
        if (!Principal(p, K::kModal, why) || !Premises(p, 1, why)) return false;
        if (!sys_.Eps(p.principal->modality())) return *why = "modality has no epsilon axiom", false;
        return Prem(*p.premises[0], p.context.With(p.principal->body()), g, why);
      }
    }
    *why = "unknown rule";
    return false;
  }

  const CompiledAxiomSystem& sys_;
  std::unordered_set<const ProofTree*> ok_;
};

// Context formulas each node draws on, bottom-up.
class Usage {
 public:
  explicit Usage(const CompiledAxiomSystem& sys) : sys_(sys) {}

  const std::set<Formula>& Need(const ProofTree& p) {
    auto it = memo_.find(&p);
    if (it != memo_.end()) return it->second;
    std::set<Formula> need;
    auto keep = [&](const ProofTree& q) {
      for (const Formula& f : Need(q)) {
        if (p.context.Contains(f)) need.insert(f);
      }
    };
    switch (p.rule) {
      case Rule::kVar:
        need.insert(p.goal);
        break;
      case Rule::kBotL:
        need.insert(Formula::Bot());
        break;
      case Rule::kTopR:
        break;
      case Rule::kModR: {
        const std::set<Formula>& sub = Need(*p.premises[0]);
        const Modality& n = p.goal.modality();
        for (const Formula& f : p.context.formulas()) {
          if (!f.is(Formula::Kind::kModal)) continue;
          bool used = sys_.Unit(f.modality(), n) && sub.count(f.body());
          if (auto r = sys_.Split(f.modality(), n)) {
            used = used || sub.count(Formula::Modal(*r, f.body()));
          }
          if (used) need.insert(f);
        }
        break;
      }
      default:
        if (p.principal) need.insert(*p.principal);
        for (const auto& q : p.premises) keep(*q);
        break;
    }
    return memo_.emplace(&p, std::move(need)).first->second;
  }

 private:
  const CompiledAxiomSystem& sys_;
  std::unordered_map<const ProofTree*, std::set<Formula>> memo_;
};

void Render(const ProofTree& p, int indent, std::ostringstream& os) {
  os << std::string(indent * 2, ' ') << RenderSequent(p.context, p.goal) << "   ["
     << RuleName(p.rule);
  if (p.principal) os << " on " << RenderFormula(*p.principal);
  os << "]\n";
  for (const auto& q : p.premises) Render(*q, indent + 1, os);
}

}  // namespace

bool CheckProof(const ProofTree& p, const CompiledAxiomSystem& sys, std::string* why) {
  Checker c(sys);
  return c.Check(p, why);
}

FlatContext UsedAssumptions(const ProofTree& p, const CompiledAxiomSystem& sys) {
  Usage u(sys);
  const auto& need = u.Need(p);
  FlatContext out;
  for (const Formula& f : p.context.formulas()) {
    if (need.count(f)) out.Add(f);
  }
  return out;
}

size_t ProofSize(const ProofTree& p) {
  size_t n = 1;
  for (const auto& q : p.premises) n += ProofSize(*q);
  return n;
}

size_t ProofHeight(const ProofTree& p) {
  size_t h = 0;
  for (const auto& q : p.premises) h = std::max(h, ProofHeight(*q));
  return h + 1;
}

std::string RenderProof(const ProofTree& p) {
  std::ostringstream os;
  Render(p, 0, os);
  return os.str();
}

}  // namespace trustlogic
