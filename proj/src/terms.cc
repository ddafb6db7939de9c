// Copyright 2026 The trustlogic Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "trustlogic/terms.h"

#include <cctype>
#include <map>
#include <set>
#include <unordered_map>

namespace trustlogic {

struct TermNode {
  Term::Kind kind = Term::Kind::kUnit;
  std::string name, name2;
  Formula formula;
  Modality modality = Modality::Box();
  ModalityList unfolding;
  int index = 0;
  std::vector<Term> kids;
  size_t size = 1;
};

namespace {

std::shared_ptr<TermNode> NewNode(Term::Kind k) {
  auto n = std::make_shared<TermNode>();
  n->kind = k;
  return n;
}

const std::set<std::string>& Keywords() {
  static const std::set<std::string> k = {"lock", "key", "abs", "pi1", "pi2",
                                          "inj1", "inj2", "case"};
  return k;
}

bool IsName(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
  }
  return !Keywords().count(s);
}

void CheckName(const std::string& s) {
  if (!IsName(s)) throw std::invalid_argument("bad variable name '" + s + "'");
}

}  // namespace

Term Term::Var(std::string name) {
  CheckName(name);
  auto n = NewNode(Kind::kVar);
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::Unit() { return Term(NewNode(Kind::kUnit)); }

Term Term::Abs(Formula a, Term p) {
  auto n = NewNode(Kind::kAbs);
  n->formula = std::move(a);
  n->kids = {std::move(p)};
  return Finish(std::move(n));
}

Term Term::Lock(Modality m, Term p) {
  auto n = NewNode(Kind::kLock);
  n->modality = std::move(m);
  n->kids = {std::move(p)};
  return Finish(std::move(n));
}

Term Term::Key(Modality m, ModalityList l, Term p) {
  auto n = NewNode(Kind::kKey);
  n->modality = std::move(m);
  n->unfolding = std::move(l);
  n->kids = {std::move(p)};
  return Finish(std::move(n));
}

Term Term::App(Term fun, Term arg) {
  auto n = NewNode(Kind::kApp);
  n->kids = {std::move(fun), std::move(arg)};
  return Finish(std::move(n));
}

Term Term::Lam(std::string x, Formula a, Term body) {
  CheckName(x);
  auto n = NewNode(Kind::kLam);
  n->name = std::move(x);
  n->formula = std::move(a);
  n->kids = {std::move(body)};
  return Finish(std::move(n));
}

Term Term::Pair(Term p, Term q) {
  auto n = NewNode(Kind::kPair);
  n->kids = {std::move(p), std::move(q)};
  return Finish(std::move(n));
}

Term Term::Proj(int i, Term p) {
  if (i != 1 && i != 2) throw std::invalid_argument("projection index must be 1 or 2");
  auto n = NewNode(Kind::kProj);
  n->index = i;
  n->kids = {std::move(p)};
  return Finish(std::move(n));
}

Term Term::Inj(int i, Formula disjunction, Term p) {
  if (i != 1 && i != 2) throw std::invalid_argument("injection index must be 1 or 2");
  if (!disjunction.is(Formula::Kind::kOr)) throw std::invalid_argument("injection needs a disjunction");
  auto n = NewNode(Kind::kInj);
  n->index = i;
  n->formula = std::move(disjunction);
  n->kids = {std::move(p)};
  return Finish(std::move(n));
}

Term Term::Case(Formula result, Term scrutinee, std::string x, Term p, std::string y,
                Term q) {
  CheckName(x);
  CheckName(y);
  auto n = NewNode(Kind::kCase);
  n->formula = std::move(result);
  n->name = std::move(x);
  n->name2 = std::move(y);
  n->kids = {std::move(scrutinee), std::move(p), std::move(q)};
  return Finish(std::move(n));
}

Term Term::Finish(std::shared_ptr<TermNode> n) {
  for (const Term& k : n->kids) n->size += k.size();
  return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const std::string& Term::name2() const { return node_->name2; }
const Formula& Term::formula() const { return node_->formula; }
const Modality& Term::modality() const { return node_->modality; }
const ModalityList& Term::unfolding() const { return node_->unfolding; }
int Term::index() const { return node_->index; }
const Term& Term::first() const { return node_->kids.at(0); }
const Term& Term::second() const { return node_->kids.at(1); }
const Term& Term::third() const { return node_->kids.at(2); }
size_t Term::size() const { return node_->size; }

bool Term::operator==(const Term& o) const {
  if (node_ == o.node_) return true;
  const TermNode& a = *node_;
  const TermNode& b = *o.node_;
  if (a.kind != b.kind || a.size != b.size || a.index != b.index || a.name != b.name ||
      a.name2 != b.name2 || a.kids.size() != b.kids.size()) {
    return false;
  }
  switch (a.kind) {
    case Kind::kAbs:
    case Kind::kLam:
    case Kind::kInj:
    case Kind::kCase:
      if (a.formula != b.formula) return false;
      break;
    case Kind::kLock:
      if (a.modality != b.modality) return false;
      break;
    case Kind::kKey:
      if (a.modality != b.modality || a.unfolding != b.unfolding) return false;
      break;
    default:
      break;
  }
  for (size_t i = 0; i < a.kids.size(); ++i) {
    if (a.kids[i] != b.kids[i]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Typing.

namespace {

// Persistent context, innermost entry at the head.
struct CtxCell {
  bool lock = false;
  std::string name;
  Formula formula;
  Modality modality = Modality::Box();
  std::shared_ptr<const CtxCell> next;
};
using Ctx = std::shared_ptr<const CtxCell>;

Ctx PushHyp(Ctx c, std::string name, Formula f) {
  auto n = std::make_shared<CtxCell>();
  n->name = std::move(name);
  n->formula = std::move(f);
  n->next = std::move(c);
  return n;
}

Ctx PushLock(Ctx c, Modality m) {
  auto n = std::make_shared<CtxCell>();
  n->lock = true;
  n->modality = std::move(m);
  n->next = std::move(c);
  return n;
}

Ctx FromModal(const ModalContext& ctx) {
  Ctx c;
  for (const ContextEntry& e : ctx.entries()) {
    if (const auto* h = std::get_if<Hypothesis>(&e)) {
      c = PushHyp(c, h->name, h->formula);
    } else {
      c = PushLock(c, std::get<Lock>(e).modality);
    }
  }
  return c;
}

[[noreturn]] void Fail(const std::string& msg) { throw TypeError(msg); }

class Checker {
 public:
  explicit Checker(const CompiledAxiomSystem& sys) : sys_(sys) {}

  Formula Check(const Ctx& ctx, const Term& t) {
    using K = Term::Kind;
    switch (t.kind()) {
      case K::kVar: {
        for (const CtxCell* c = ctx.get(); c; c = c->next.get()) {
          if (c->lock) Fail("variable " + t.name() + " is behind a lock");
          if (c->name == t.name()) return c->formula;
        }
        Fail("unbound variable " + t.name());
      }
      case K::kUnit:
        return Formula::Top();
      case K::kAbs: {
        Formula a = Check(ctx, t.first());
        if (!a.is(Formula::Kind::kBot)) Fail("abs expects false, got " + RenderFormula(a));
        return t.formula();
      }
      case K::kLock:
        return Formula::Modal(t.modality(), Check(PushLock(ctx, t.modality()), t.first()));
      case K::kKey: {
        const ModalityList& l = t.unfolding();
        if (!sys_.Unfolds(t.modality(), l)) {
          Fail("unfolding " + t.modality().ToString() + " => " + RenderModalityList(l) +
               " not derivable");
        }
        // Strip the trailing locks; the matched word must be l.
        ModalityList seen;
        Ctx c = ctx;
        while (seen.size() < l.size()) {
          if (!c) Fail("key consumes more locks than the context holds");
          if (c->lock) seen.push_back(c->modality);
          c = c->next;
        }
        ModalityList word(seen.rbegin(), seen.rend());
        if (word != l) {
          Fail("key expects lock word " + RenderModalityList(l) + ", found " +
               RenderModalityList(word));
        }
        Formula a = Check(c, t.first());
        if (!a.is(Formula::Kind::kModal) || a.modality() != t.modality()) {
          Fail("key expects " + t.modality().ToString() + " formula, got " + RenderFormula(a));
        }
        return a.body();
      }
      case K::kApp: {
        Formula f = Check(ctx, t.first());
        Formula a = Check(ctx, t.second());
        if (!f.is(Formula::Kind::kImp)) Fail("applying a non-function of type " + RenderFormula(f));
        if (f.lhs() != a) {
          Fail("argument type " + RenderFormula(a) + " does not match " + RenderFormula(f.lhs()));
        }
        return f.rhs();
      }
      case K::kLam:
        return Formula::Imp(t.formula(),
                            Check(PushHyp(ctx, t.name(), t.formula()), t.first()));
      case K::kPair:
        return Formula::And(Check(ctx, t.first()), Check(ctx, t.second()));
      case K::kProj: {
        Formula a = Check(ctx, t.first());
        if (!a.is(Formula::Kind::kAnd)) Fail("projection from " + RenderFormula(a));
        return t.index() == 1 ? a.lhs() : a.rhs();
      }
      case K::kInj: {
        Formula a = Check(ctx, t.first());
        const Formula& d = t.formula();
        const Formula& want = t.index() == 1 ? d.lhs() : d.rhs();
        if (a != want) Fail("injection of " + RenderFormula(a) + " into " + RenderFormula(d));
        return d;
      }
      case K::kCase: {
        Formula d = Check(ctx, t.first());
        if (!d.is(Formula::Kind::kOr)) Fail("case on " + RenderFormula(d));
        Formula p = Check(PushHyp(ctx, t.name(), d.lhs()), t.second());
        Formula q = Check(PushHyp(ctx, t.name2(), d.rhs()), t.third());
        if (p != t.formula() || q != t.formula()) {
          Fail("case branches do not both have type " + RenderFormula(t.formula()));
        }
        return t.formula();
      }
    }
    Fail("unknown term kind");
  }

 private:
  const CompiledAxiomSystem& sys_;
};

}  // namespace

Formula Typecheck(const ModalContext& ctx, const Term& t, const CompiledAxiomSystem& sys) {
  return Checker(sys).Check(FromModal(ctx), t);
}

// ---------------------------------------------------------------------------
// Variables.

namespace {

void CollectFree(const Term& t, std::set<std::string>& bound, std::set<std::string>& out) {
  using K = Term::Kind;
  auto under = [&](const std::string& x, const Term& body) {
    bool fresh = bound.insert(x).second;
    CollectFree(body, bound, out);
    if (fresh) bound.erase(x);
  };
  switch (t.kind()) {
    case K::kVar:
      if (!bound.count(t.name())) out.insert(t.name());
      return;
    case K::kUnit:
      return;
    case K::kLam:
      under(t.name(), t.first());
      return;
    case K::kCase:
      CollectFree(t.first(), bound, out);
      under(t.name(), t.second());
      under(t.name2(), t.third());
      return;
    case K::kApp:
    case K::kPair:
      CollectFree(t.first(), bound, out);
      CollectFree(t.second(), bound, out);
      return;
    default:
      CollectFree(t.first(), bound, out);
      return;
  }
}

std::set<std::string> FreeSet(const Term& t) {
  std::set<std::string> bound, out;
  CollectFree(t, bound, out);
  return out;
}

void CollectAllNames(const Term& t, std::set<std::string>& out) {
  if (t.is(Term::Kind::kVar) || t.is(Term::Kind::kLam) || t.is(Term::Kind::kCase)) {
    out.insert(t.name());
  }
  if (t.is(Term::Kind::kCase)) out.insert(t.name2());
  if (t.is(Term::Kind::kVar) || t.is(Term::Kind::kUnit)) return;
  using K = Term::Kind;
  CollectAllNames(t.first(), out);
  if (t.is(K::kApp) || t.is(K::kPair) || t.is(K::kCase)) CollectAllNames(t.second(), out);
  if (t.is(K::kCase)) CollectAllNames(t.third(), out);
}

std::string FreshName(const std::string& base, const std::set<std::string>& avoid) {
  std::string stem = base;
  auto us = stem.find('_');
  if (us != std::string::npos && us > 0) {
    bool digits = us + 1 < stem.size();
    for (size_t i = us + 1; i < stem.size(); ++i) digits &= std::isdigit(static_cast<unsigned char>(stem[i])) != 0;
    if (digits) stem = stem.substr(0, us);
  }
  for (size_t k = 1;; ++k) {
    std::string c = stem + "_" + std::to_string(k);
    if (!avoid.count(c)) return c;
  }
}

// Renames variables per `ren` (free occurrences only) and binders that
// appear in `used`; every binder introduced is added to `used`.
Term Rename(const Term& t, std::map<std::string, std::string>& ren,
            std::set<std::string>& used) {
  using K = Term::Kind;
  auto bind = [&](const std::string& x, const Term& body, std::string* out_name) {
    std::string nx = used.count(x) ? FreshName(x, used) : x;
    used.insert(nx);
    auto old = ren.find(x);
    std::optional<std::string> saved;
    if (old != ren.end()) saved = old->second;
    ren[x] = nx;
    Term b = Rename(body, ren, used);
    if (saved) ren[x] = *saved; else ren.erase(x);
    *out_name = nx;
    return b;
  };
  switch (t.kind()) {
    case K::kVar: {
      auto it = ren.find(t.name());
      return it == ren.end() ? t : Term::Var(it->second);
    }
    case K::kUnit:
      return t;
    case K::kAbs:
      return Term::Abs(t.formula(), Rename(t.first(), ren, used));
    case K::kLock:
      return Term::Lock(t.modality(), Rename(t.first(), ren, used));
    case K::kKey:
      return Term::Key(t.modality(), t.unfolding(), Rename(t.first(), ren, used));
    case K::kApp: {
      Term f = Rename(t.first(), ren, used);
      return Term::App(f, Rename(t.second(), ren, used));
    }
    case K::kLam: {
      std::string x;
      Term b = bind(t.name(), t.first(), &x);
      return Term::Lam(x, t.formula(), b);
    }
    case K::kPair: {
      Term p = Rename(t.first(), ren, used);
      return Term::Pair(p, Rename(t.second(), ren, used));
    }
    case K::kProj:
      return Term::Proj(t.index(), Rename(t.first(), ren, used));
    case K::kInj:
      return Term::Inj(t.index(), t.formula(), Rename(t.first(), ren, used));
    case K::kCase: {
      Term r = Rename(t.first(), ren, used);
      std::string x, y;
      Term p = bind(t.name(), t.second(), &x);
      Term q = bind(t.name2(), t.third(), &y);
      return Term::Case(t.formula(), r, x, p, y, q);
    }
  }
  return t;
}

// Makes every binder distinct from each other and from the free variables.
Term Uniquify(const Term& t) {
  std::set<std::string> used = FreeSet(t);
  std::map<std::string, std::string> ren;
  return Rename(t, ren, used);
}

Term Subst(const Term& t, const std::string& x, const Term& q,
           const std::set<std::string>& fvq) {
  using K = Term::Kind;
  // Binder y over body: stop on shadowing, rename on capture.
  auto under = [&](const std::string& y, const Term& body, std::string* out) {
    if (y == x) {
      *out = y;
      return body;
    }
    if (fvq.count(y) && FreeSet(body).count(x)) {
      std::set<std::string> avoid = fvq;
      CollectAllNames(body, avoid);
      avoid.insert(x);
      std::string ny = FreshName(y, avoid);
      *out = ny;
      return Subst(Subst(body, y, Term::Var(ny), {ny}), x, q, fvq);
    }
    *out = y;
    return Subst(body, x, q, fvq);
  };
  switch (t.kind()) {
    case K::kVar:
      return t.name() == x ? q : t;
    case K::kUnit:
      return t;
    case K::kAbs:
      return Term::Abs(t.formula(), Subst(t.first(), x, q, fvq));
    case K::kLock:
      return Term::Lock(t.modality(), Subst(t.first(), x, q, fvq));
    case K::kKey:
      return Term::Key(t.modality(), t.unfolding(), Subst(t.first(), x, q, fvq));
    case K::kApp:
      return Term::App(Subst(t.first(), x, q, fvq), Subst(t.second(), x, q, fvq));
    case K::kLam: {
      std::string y;
      Term b = under(t.name(), t.first(), &y);
      return Term::Lam(y, t.formula(), b);
    }
    case K::kPair:
      return Term::Pair(Subst(t.first(), x, q, fvq), Subst(t.second(), x, q, fvq));
    case K::kProj:
      return Term::Proj(t.index(), Subst(t.first(), x, q, fvq));
    case K::kInj:
      return Term::Inj(t.index(), t.formula(), Subst(t.first(), x, q, fvq));
    case K::kCase: {
      Term r = Subst(t.first(), x, q, fvq);
      std::string y1, y2;
      Term p = under(t.name(), t.second(), &y1);
      Term s = under(t.name2(), t.third(), &y2);
      return Term::Case(t.formula(), r, y1, p, y2, s);
    }
  }
  return t;
}

bool Alpha(const Term& a, const Term& b, std::map<std::string, int>& ea,
           std::map<std::string, int>& eb, int depth) {
  using K = Term::Kind;
  if (a.kind() != b.kind()) return false;
  auto under = [&](const std::string& x, const Term& p, const std::string& y, const Term& q) {
    auto sa = ea.find(x) == ea.end() ? std::optional<int>() : std::optional<int>(ea[x]);
    auto sb = eb.find(y) == eb.end() ? std::optional<int>() : std::optional<int>(eb[y]);
    ea[x] = depth;
    eb[y] = depth;
    bool ok = Alpha(p, q, ea, eb, depth + 1);
    if (sa) ea[x] = *sa; else ea.erase(x);
    if (sb) eb[y] = *sb; else eb.erase(y);
    return ok;
  };
  switch (a.kind()) {
    case K::kVar: {
      auto ia = ea.find(a.name());
      auto ib = eb.find(b.name());
      if (ia == ea.end() || ib == eb.end()) return ia == ea.end() && ib == eb.end() && a.name() == b.name();
      return ia->second == ib->second;
    }
    case K::kUnit:
      return true;
    case K::kAbs:
      return a.formula() == b.formula() && Alpha(a.first(), b.first(), ea, eb, depth);
    case K::kLock:
      return a.modality() == b.modality() && Alpha(a.first(), b.first(), ea, eb, depth);
    case K::kKey:
      return a.modality() == b.modality() && a.unfolding() == b.unfolding() &&
             Alpha(a.first(), b.first(), ea, eb, depth);
    case K::kApp:
    case K::kPair:
      return Alpha(a.first(), b.first(), ea, eb, depth) &&
             Alpha(a.second(), b.second(), ea, eb, depth);
    case K::kLam:
      return a.formula() == b.formula() && under(a.name(), a.first(), b.name(), b.first());
    case K::kProj:
      return a.index() == b.index() && Alpha(a.first(), b.first(), ea, eb, depth);
    case K::kInj:
      return a.index() == b.index() && a.formula() == b.formula() &&
             Alpha(a.first(), b.first(), ea, eb, depth);
    case K::kCase:
      return a.formula() == b.formula() && Alpha(a.first(), b.first(), ea, eb, depth) &&
             under(a.name(), a.second(), b.name(), b.second()) &&
             under(a.name2(), a.third(), b.name2(), b.third());
  }
  return false;
}

}  // namespace

std::vector<std::string> FreeVariables(const Term& t) {
  auto s = FreeSet(t);
  return {s.begin(), s.end()};
}

Term VarSubstitute(const Term& t, const std::string& x, const Term& q) {
  return Subst(t, x, q, FreeSet(q));
}

bool AlphaEqual(const Term& a, const Term& b) {
  std::map<std::string, int> ea, eb;
  return Alpha(a, b, ea, eb, 0);
}

// ---------------------------------------------------------------------------
// Modal substitution.

namespace {

// Substitution lists, innermost lock at the head.
struct SubCell {
  ModalityList list;
  std::shared_ptr<const SubCell> next;
};
using Subs = std::shared_ptr<const SubCell>;

Subs PushSub(Subs s, ModalityList l) {
  auto n = std::make_shared<SubCell>();
  n->list = std::move(l);
  n->next = std::move(s);
  return n;
}

Term MSub(const Term& t, const Subs& subs, const CompiledAxiomSystem& sys) {
  using K = Term::Kind;
  switch (t.kind()) {
    case K::kVar:
    case K::kUnit:
      return t;
    case K::kAbs:
      return Term::Abs(t.formula(), MSub(t.first(), subs, sys));
    case K::kLock:
      return Term::Lock(t.modality(), MSub(t.first(), PushSub(subs, {t.modality()}), sys));
    case K::kKey: {
      std::vector<const ModalityList*> parts;
      Subs s = subs;
      for (size_t i = 0; i < t.unfolding().size(); ++i) {
        if (!s) throw TypeError("key reaches past the substituted lock word");
        parts.push_back(&s->list);
        s = s->next;
      }
      ModalityList joined;
      for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        joined.insert(joined.end(), (*it)->begin(), (*it)->end());
      }
      if (!sys.Unfolds(t.modality(), joined)) {
        throw TypeError("retargeted unfolding " + t.modality().ToString() + " => " +
                        RenderModalityList(joined) + " not derivable");
      }
      return Term::Key(t.modality(), joined, MSub(t.first(), s, sys));
    }
    case K::kApp:
      return Term::App(MSub(t.first(), subs, sys), MSub(t.second(), subs, sys));
    case K::kLam:
      return Term::Lam(t.name(), t.formula(), MSub(t.first(), subs, sys));
    case K::kPair:
      return Term::Pair(MSub(t.first(), subs, sys), MSub(t.second(), subs, sys));
    case K::kProj:
      return Term::Proj(t.index(), MSub(t.first(), subs, sys));
    case K::kInj:
      return Term::Inj(t.index(), t.formula(), MSub(t.first(), subs, sys));
    case K::kCase:
      return Term::Case(t.formula(), MSub(t.first(), subs, sys), t.name(),
                        MSub(t.second(), subs, sys), t.name2(), MSub(t.third(), subs, sys));
  }
  return t;
}

}  // namespace

Term ModalSubstitute(const Term& t, const ModalityList& lock_word,
                     const std::vector<ModalityList>& lists, const CompiledAxiomSystem& sys) {
  if (lists.size() != lock_word.size()) {
    throw std::invalid_argument("one unfolding list per lock is required");
  }
  Subs s;
  for (size_t i = 0; i < lists.size(); ++i) {
    if (!sys.Unfolds(lock_word[i], lists[i])) {
      throw TypeError(lock_word[i].ToString() + " does not unfold to " +
                      RenderModalityList(lists[i]));
    }
    s = PushSub(s, lists[i]);
  }
  return MSub(t, s, sys);
}

// ---------------------------------------------------------------------------
// Reduction.

namespace {

struct LockCell {
  Modality m;
  std::shared_ptr<const LockCell> next;
};
using Locks = std::shared_ptr<const LockCell>;

Locks PushLockWord(Locks l, Modality m) {
  return std::make_shared<LockCell>(LockCell{std::move(m), std::move(l)});
}

bool IsAbsorb(const Term& t) {
  using K = Term::Kind;
  switch (t.kind()) {
    case K::kAbs:
      return t.first().is(K::kAbs) && t.first().formula().is(Formula::Kind::kBot);
    case K::kApp:
      return t.first().is(K::kAbs) && t.first().formula().is(Formula::Kind::kImp);
    case K::kProj:
      return t.first().is(K::kAbs) && t.first().formula().is(Formula::Kind::kAnd);
    case K::kCase:
      return t.first().is(K::kAbs) && t.first().formula().is(Formula::Kind::kOr);
    default:
      return false;
  }
}

std::optional<Term> Contract(const Term& t, const Locks& locks, bool absorb_only,
                             const CompiledAxiomSystem& sys) {
  using K = Term::Kind;
  if (IsAbsorb(t)) {
    const Term& inner = t.first();
    switch (t.kind()) {
      case K::kAbs:
        return Term::Abs(t.formula(), inner.first());
      case K::kApp:
        return Term::Abs(inner.formula().rhs(), inner.first());
      case K::kProj:
        return Term::Abs(t.index() == 1 ? inner.formula().lhs() : inner.formula().rhs(),
                         inner.first());
      case K::kCase:
        return Term::Abs(t.formula(), inner.first());
      default:
        break;
    }
  }
  if (absorb_only) return std::nullopt;
  switch (t.kind()) {
    case K::kKey: {
      const Term& in = t.first();
      if (!in.is(K::kLock) || in.modality() != t.modality()) return std::nullopt;
      // Identity lists for the locks below the consumed ones, l for M.
      Locks l = locks;
      for (size_t i = 0; i < t.unfolding().size() && l; ++i) l = l->next;
      std::vector<Modality> below;
      for (const LockCell* c = l.get(); c; c = c->next.get()) below.push_back(c->m);
      Subs s;
      for (auto it = below.rbegin(); it != below.rend(); ++it) s = PushSub(s, {*it});
      s = PushSub(s, t.unfolding());
      return MSub(in.first(), s, sys);
    }
    case K::kApp:
      if (t.first().is(K::kLam)) {
        return VarSubstitute(t.first().first(), t.first().name(), t.second());
      }
      return std::nullopt;
    case K::kProj:
      if (t.first().is(K::kPair)) {
        return t.index() == 1 ? t.first().first() : t.first().second();
      }
      return std::nullopt;
    case K::kCase:
      if (t.first().is(K::kInj)) {
        const Term& inj = t.first();
        return inj.index() == 1 ? VarSubstitute(t.second(), t.name(), inj.first())
                                : VarSubstitute(t.third(), t.name2(), inj.first());
      }
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

std::optional<Term> StepAt(const Term& t, const Locks& locks, bool absorb_only,
                           const CompiledAxiomSystem& sys) {
  using K = Term::Kind;
  if (auto r = Contract(t, locks, absorb_only, sys)) return r;
  switch (t.kind()) {
    case K::kVar:
    case K::kUnit:
      return std::nullopt;
    case K::kAbs:
      if (auto r = StepAt(t.first(), locks, absorb_only, sys)) return Term::Abs(t.formula(), *r);
      return std::nullopt;
    case K::kLock:
      if (auto r = StepAt(t.first(), PushLockWord(locks, t.modality()), absorb_only, sys)) {
        return Term::Lock(t.modality(), *r);
      }
      return std::nullopt;
    case K::kKey: {
      Locks l = locks;
      for (size_t i = 0; i < t.unfolding().size() && l; ++i) l = l->next;
      if (auto r = StepAt(t.first(), l, absorb_only, sys)) {
        return Term::Key(t.modality(), t.unfolding(), *r);
      }
      return std::nullopt;
    }
    case K::kApp:
    case K::kPair: {
      auto mk = [&](Term a, Term b) {
        return t.is(K::kApp) ? Term::App(a, b) : Term::Pair(a, b);
      };
      if (auto r = StepAt(t.first(), locks, absorb_only, sys)) return mk(*r, t.second());
      if (auto r = StepAt(t.second(), locks, absorb_only, sys)) return mk(t.first(), *r);
      return std::nullopt;
    }
    case K::kLam:
      if (auto r = StepAt(t.first(), locks, absorb_only, sys)) {
        return Term::Lam(t.name(), t.formula(), *r);
      }
      return std::nullopt;
    case K::kProj:
      if (auto r = StepAt(t.first(), locks, absorb_only, sys)) return Term::Proj(t.index(), *r);
      return std::nullopt;
    case K::kInj:
      if (auto r = StepAt(t.first(), locks, absorb_only, sys)) {
        return Term::Inj(t.index(), t.formula(), *r);
      }
      return std::nullopt;
    case K::kCase:
      if (auto r = StepAt(t.first(), locks, absorb_only, sys)) {
        return Term::Case(t.formula(), *r, t.name(), t.second(), t.name2(), t.third());
      }
      if (auto r = StepAt(t.second(), locks, absorb_only, sys)) {
        return Term::Case(t.formula(), t.first(), t.name(), *r, t.name2(), t.third());
      }
      if (auto r = StepAt(t.third(), locks, absorb_only, sys)) {
        return Term::Case(t.formula(), t.first(), t.name(), t.second(), t.name2(), *r);
      }
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

Term Step(const Term& t, const ModalityList& lock_word, const CompiledAxiomSystem& sys,
          bool* changed) {
  Locks locks;
  for (const Modality& m : lock_word) locks = PushLockWord(locks, m);
  // Binder hygiene: the key/lock contraction weakens under enclosing binders.
  Term u = Uniquify(t);
  auto r = StepAt(u, locks, true, sys);
  if (!r) r = StepAt(u, locks, false, sys);
  if (changed) *changed = r.has_value();
  return r ? *r : t;
}

NormalizeResult Normalize(const Term& t, const ModalityList& lock_word,
                          const CompiledAxiomSystem& sys, size_t step_limit) {
  NormalizeResult out{t, 0, false};
  while (true) {
    bool changed = false;
    Term next = Step(out.term, lock_word, sys, &changed);
    if (!changed) {
      out.normal = true;
      return out;
    }
    if (out.steps == step_limit) return out;
    out.term = next;
    ++out.steps;
  }
}

// ---------------------------------------------------------------------------
// Extraction.

namespace {

class Extractor {
 public:
  Extractor(const CompiledAxiomSystem& sys, std::set<std::string> used)
      : sys_(sys), used_(std::move(used)) {}

  using Env = std::map<Formula, Term>;

  Term Run(const ProofTree& p, const Env& env) {
    auto get = [&](const Formula& f) -> const Term& {
      auto it = env.find(f);
      if (it == env.end()) throw std::invalid_argument("formula not in context: " + RenderFormula(f));
      return it->second;
    };
    auto prem = [&](size_t i) -> const ProofTree& {
      if (i >= p.premises.size() || !p.premises[i]) throw std::invalid_argument("missing premise");
      return *p.premises[i];
    };
    switch (p.rule) {
      case Rule::kVar:
        return get(p.goal);
      case Rule::kTopR:
        return Term::Unit();
      case Rule::kBotL:
        return Term::Abs(p.goal, get(Formula::Bot()));
      case Rule::kImpR: {
        const Formula& a = p.goal.lhs();
        std::string x = Fresh();
        Env e = env;
        e.emplace(a, Term::Var(x));
        return Term::Lam(x, a, Run(prem(0), e));
      }
      case Rule::kImpL: {
        const Formula& f = *p.principal;
        Term arg = Run(prem(0), env);
        Term val = Term::App(get(f), arg);
        return Let(f.rhs(), val, prem(1), env);
      }
      case Rule::kAndL1:
      case Rule::kAndL2: {
        const Formula& f = *p.principal;
        int i = p.rule == Rule::kAndL1 ? 1 : 2;
        Env e = env;
        e.emplace(i == 1 ? f.lhs() : f.rhs(), Term::Proj(i, get(f)));
        return Run(prem(0), e);
      }
      case Rule::kEpsL: {
        const Formula& f = *p.principal;
        Env e = env;
        e.emplace(f.body(), Term::Key(f.modality(), {}, get(f)));
        return Run(prem(0), e);
      }
      case Rule::kAndR:
        return Term::Pair(Run(prem(0), env), Run(prem(1), env));
      case Rule::kOrR1:
      case Rule::kOrR2: {
        int i = p.rule == Rule::kOrR1 ? 1 : 2;
        return Term::Inj(i, p.goal, Run(prem(0), env));
      }
      case Rule::kOrL: {
        const Formula& f = *p.principal;
        std::string x = Fresh(), y = Fresh();
        Env e1 = env, e2 = env;
        e1.emplace(f.lhs(), Term::Var(x));
        e2.emplace(f.rhs(), Term::Var(y));
        return Term::Case(p.goal, get(f), x, Run(prem(0), e1), y, Run(prem(1), e2));
      }
      case Rule::kModR: {
        const Modality& m = p.goal.modality();
        const ProofTree& q = prem(0);
        Env e;
        for (const Formula& c : q.context.formulas()) {
          if (auto t = Shift(c, m, p.context, env)) e.emplace(c, *t);
        }
        return Term::Lock(m, Run(q, e));
      }
    }
    throw std::invalid_argument("unknown rule");
  }

 private:
  std::string Fresh() {
    std::string x = FreshName("x", used_);
    used_.insert(x);
    return x;
  }

  // Binds `val : f` for the continuation; reuses an existing term for f.
  Term Let(const Formula& f, const Term& val, const ProofTree& cont, const Env& env) {
    if (env.count(f)) return Run(cont, env);
    std::string y = Fresh();
    Env e = env;
    e.emplace(f, Term::Var(y));
    return Term::App(Term::Lam(y, f, Run(cont, e)), val);
  }

  // A term for c in ctx, {m}, drawn from some N B in ctx.
  std::optional<Term> Shift(const Formula& c, const Modality& m, const FlatContext& ctx,
                            const Env& env) {
    for (const Formula& f : ctx.formulas()) {
      if (!f.is(Formula::Kind::kModal)) continue;
      auto it = env.find(f);
      if (it == env.end()) continue;
      const Modality& n = f.modality();
      if (f.body() == c && sys_.Unit(n, m)) return Term::Key(n, {m}, it->second);
      if (auto r = sys_.Split(n, m); r && Formula::Modal(*r, f.body()) == c) {
        return Term::Lock(*r, Term::Key(n, {m, *r}, it->second));
      }
    }
    return std::nullopt;
  }

  const CompiledAxiomSystem& sys_;
  std::set<std::string> used_;
};

}  // namespace

Term ExtractTerm(const ProofTree& p, const CompiledAxiomSystem& sys) {
  ModalContext root = ModalContext::FromFlat(p.context);
  std::set<std::string> used;
  Extractor::Env env;
  for (const ContextEntry& e : root.entries()) {
    const auto& h = std::get<Hypothesis>(e);
    used.insert(h.name);
    env.emplace(h.formula, Term::Var(h.name));
  }
  return Extractor(sys, used).Run(p, env);
}

Term ExtractModalTerm(const ModalContext& ctx, const ProofTree& folded,
                      const CompiledAxiomSystem& sys) {
  if (!folded.context.empty()) throw std::invalid_argument("folded proof must be closed");
  Term cur = ExtractTerm(folded, sys);
  // Closed term binders may collide with context names.
  std::set<std::string> used;
  for (const ContextEntry& e : ctx.entries()) {
    if (const auto* h = std::get_if<Hypothesis>(&e)) used.insert(h->name);
  }
  std::map<std::string, std::string> ren;
  cur = Rename(cur, ren, used);
  for (const ContextEntry& e : ctx.entries()) {
    if (const auto* h = std::get_if<Hypothesis>(&e)) {
      cur = Term::App(cur, Term::Var(h->name));
    } else {
      const Modality& m = std::get<Lock>(e).modality;
      cur = Term::Key(m, {m}, cur);
    }
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Text form.

namespace {

std::string Inner(const Modality& m) {
  std::string s = m.ToString();
  return s.substr(1, s.size() - 2);
}

bool IsAtomic(const Term& t) {
  return !t.is(Term::Kind::kApp) && !t.is(Term::Kind::kLam);
}

void Render(const Term& t, std::string& out) {
  using K = Term::Kind;
  switch (t.kind()) {
    case K::kVar:
      out += t.name();
      return;
    case K::kUnit:
      out += "*";
      return;
    case K::kAbs:
      out += "abs[" + RenderFormula(t.formula()) + "](";
      Render(t.first(), out);
      out += ")";
      return;
    case K::kLock:
      out += "lock[" + Inner(t.modality()) + "](";
      Render(t.first(), out);
      out += ")";
      return;
    case K::kKey: {
      out += "key[" + Inner(t.modality()) + " =>";
      if (t.unfolding().empty()) out += " .";
      for (size_t i = 0; i < t.unfolding().size(); ++i) {
        out += i ? ", " : " ";
        out += Inner(t.unfolding()[i]);
      }
      out += "](";
      Render(t.first(), out);
      out += ")";
      return;
    }
    case K::kApp: {
      const Term& f = t.first();
      const Term& a = t.second();
      bool pf = f.is(K::kLam);
      if (pf) out += "(";
      Render(f, out);
      if (pf) out += ")";
      out += " . ";
      bool pa = !IsAtomic(a);
      if (pa) out += "(";
      Render(a, out);
      if (pa) out += ")";
      return;
    }
    case K::kLam:
      out += "\\" + t.name() + ":" + RenderFormula(t.formula()) + ". ";
      Render(t.first(), out);
      return;
    case K::kPair:
      out += "(";
      Render(t.first(), out);
      out += ", ";
      Render(t.second(), out);
      out += ")";
      return;
    case K::kProj:
      out += t.index() == 1 ? "pi1(" : "pi2(";
      Render(t.first(), out);
      out += ")";
      return;
    case K::kInj:
      out += (t.index() == 1 ? "inj1[" : "inj2[") + RenderFormula(t.formula()) + "](";
      Render(t.first(), out);
      out += ")";
      return;
    case K::kCase:
      out += "case[" + RenderFormula(t.formula()) + "](";
      Render(t.first(), out);
      out += "; " + t.name() + ". ";
      Render(t.second(), out);
      out += "; " + t.name2() + ". ";
      Render(t.third(), out);
      out += ")";
      return;
  }
}

class TermParser {
 public:
  explicit TermParser(const std::string& s) : s_(s) {}

  Term ParseAll() {
    Term t = ParseTermAt();
    Skip();
    if (pos_ != s_.size()) Error("unexpected trailing input");
    return t;
  }

 private:
  [[noreturn]] void Error(const std::string& msg) { throw ParseError(msg, pos_); }

  void Skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool Peek(char c) {
    Skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  void Expect(char c) {
    if (!Peek(c)) Error(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string Ident() {
    Skip();
    size_t b = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                s_[pos_] == '_' || s_[pos_] == '\'')) {
      ++pos_;
    }
    if (b == pos_) Error("expected a name");
    return s_.substr(b, pos_ - b);
  }

  // Text up to the matching close of an already-consumed '[' or '('.
  std::string Balanced(char open, char close) {
    size_t b = pos_;
    int depth = 1;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == open) ++depth;
      if (c == close && --depth == 0) {
        std::string out = s_.substr(b, pos_ - b);
        ++pos_;
        return out;
      }
      ++pos_;
    }
    Error(std::string("unbalanced '") + open + "'");
  }

  Formula FormulaText(const std::string& text, size_t at) {
    try {
      return ParseFormula(text);
    } catch (const ParseError& e) {
      throw ParseError(std::string("in formula: ") + e.what(), at + e.position());
    }
  }

  Formula BracketFormula() {
    Expect('[');
    size_t at = pos_;
    return FormulaText(Balanced('[', ']'), at);
  }

  Modality InnerModality(const std::string& text, size_t at) {
    try {
      return ParseModality("[" + text + "]");
    } catch (const ParseError& e) {
      throw ParseError(std::string("in modality: ") + e.what(), at);
    }
  }

  Term Paren() {
    Expect('(');
    Term t = ParseTermAt();
    Expect(')');
    return t;
  }

  Term ParseTermAt() {
    if (Peek('\\')) {
      ++pos_;
      std::string x = Ident();
      Expect(':');
      size_t at = pos_;
      size_t dot = s_.find('.', pos_);
      if (dot == std::string::npos) Error("expected '.' after binder type");
      Formula a = FormulaText(s_.substr(pos_, dot - pos_), at);
      pos_ = dot + 1;
      return Term::Lam(x, a, ParseTermAt());
    }
    Term t = Atom();
    while (Peek('.')) {
      ++pos_;
      if (Peek('\\')) {
        Error("lambda argument needs parentheses");
      }
      t = Term::App(t, Atom());
    }
    return t;
  }

  Term Atom() {
    Skip();
    if (pos_ >= s_.size()) Error("unexpected end of term");
    if (s_[pos_] == '*') {
      ++pos_;
      return Term::Unit();
    }
    if (s_[pos_] == '(') {
      ++pos_;
      Term a = ParseTermAt();
      if (Peek(',')) {
        ++pos_;
        Term b = ParseTermAt();
        Expect(')');
        return Term::Pair(a, b);
      }
      Expect(')');
      return a;
    }
    size_t at = pos_;
    std::string id = Ident();
    if (id == "abs") {
      Formula a = BracketFormula();
      return Term::Abs(a, Paren());
    }
    if (id == "lock") {
      Expect('[');
      size_t mat = pos_;
      Modality m = InnerModality(Balanced('[', ']'), mat);
      return Term::Lock(m, Paren());
    }
    if (id == "key") {
      Expect('[');
      size_t mat = pos_;
      std::string body = Balanced('[', ']');
      size_t arrow = body.find("=>");
      if (arrow == std::string::npos) throw ParseError("key needs '=>'", mat);
      Modality m = InnerModality(body.substr(0, arrow), mat);
      std::string rest = body.substr(arrow + 2);
      ModalityList l;
      size_t first = rest.find_first_not_of(" \t");
      if (first == std::string::npos) throw ParseError("empty unfolding list", mat);
      if (rest.substr(first, 1) != ".") {
        size_t b = 0;
        while (true) {
          size_t c = rest.find(',', b);
          l.push_back(InnerModality(rest.substr(b, c == std::string::npos ? c : c - b), mat));
          if (c == std::string::npos) break;
          b = c + 1;
        }
      } else if (rest.find_first_not_of(" \t", first + 1) != std::string::npos) {
        throw ParseError("unexpected text after '.'", mat);
      }
      return Term::Key(m, l, Paren());
    }
    if (id == "pi1" || id == "pi2") return Term::Proj(id == "pi1" ? 1 : 2, Paren());
    if (id == "inj1" || id == "inj2") {
      Formula d = BracketFormula();
      if (!d.is(Formula::Kind::kOr)) Error("injection needs a disjunction");
      return Term::Inj(id == "inj1" ? 1 : 2, d, Paren());
    }
    if (id == "case") {
      Formula c = BracketFormula();
      Expect('(');
      Term r = ParseTermAt();
      Expect(';');
      std::string x = Ident();
      Expect('.');
      Term p = ParseTermAt();
      Expect(';');
      std::string y = Ident();
      Expect('.');
      Term q = ParseTermAt();
      Expect(')');
      return Term::Case(c, r, x, p, y, q);
    }
    if (!IsName(id)) throw ParseError("bad variable name '" + id + "'", at);
    return Term::Var(id);
  }

  const std::string& s_;
  size_t pos_ = 0;
};

}  // namespace

std::string RenderTerm(const Term& t) {
  std::string out;
  Render(t, out);
  return out;
}

Term ParseTerm(const std::string& text) { return TermParser(text).ParseAll(); }

}  // namespace trustlogic
