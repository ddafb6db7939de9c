// Copyright 2026 The trustlogic Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef TRUSTLOGIC_TERMS_H_
#define TRUSTLOGIC_TERMS_H_

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "trustlogic/axioms.h"
#include "trustlogic/formula.h"
#include "trustlogic/prover.h"

namespace trustlogic {

struct TermNode;

// Immutable Fitch-style proof term.
class Term {
 public:
  enum class Kind {
    kVar,
    kUnit,
    kAbs,     // abs_A(P): from P : false
    kLock,    // lock_M(P)
    kKey,     // key_{M => l}(P)
    kApp,     // fun . arg
    kLam,     // \x:A. P
    kPair,
    kProj,    // pi_i(P)
    kInj,     // inj_i(P) into the disjunction formula()
    kCase,    // case_C(R; x. P; y. Q)
    kExFalso = kAbs,
  };

  static Term Var(std::string name);
  static Term Unit();
  static Term Abs(Formula a, Term p);
  static Term Lock(Modality m, Term p);
  static Term Key(Modality m, ModalityList l, Term p);
  static Term App(Term fun, Term arg);
  static Term Lam(std::string x, Formula a, Term body);
  static Term Pair(Term p, Term q);
  static Term Proj(int i, Term p);
  static Term Inj(int i, Formula disjunction, Term p);
  static Term Case(Formula result, Term scrutinee, std::string x, Term p,
                   std::string y, Term q);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }
  // Var name, Lam binder, Case first binder.
  const std::string& name() const;
  // Case second binder.
  const std::string& name2() const;
  // Abs/Lam/Inj/Case annotation.
  const Formula& formula() const;
  const Modality& modality() const;
  const ModalityList& unfolding() const;
  int index() const;  // Proj/Inj, 1 or 2
  // Children: Abs/Lock/Key/Lam/Proj/Inj body in first(); App fun/arg,
  // Pair, Case scrutinee/branches in first()/second()/third().
  const Term& first() const;
  const Term& second() const;
  const Term& third() const;

  size_t size() const;

  // Syntactic equality (binder names included).
  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }

 private:
  explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}
  static Term Finish(std::shared_ptr<TermNode> n);
  std::shared_ptr<const TermNode> node_;
};

class TypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The unique A with ctx |- t : A. Throws TypeError.
Formula Typecheck(const ModalContext& ctx, const Term& t, const CompiledAxiomSystem& sys);

// Term for a valid proof, over the hypotheses ModalContext::FromFlat(root).
Term ExtractTerm(const ProofTree& p, const CompiledAxiomSystem& sys);

// Term in `ctx` for `goal`, from a proof of the folded closed sequent.
Term ExtractModalTerm(const ModalContext& ctx, const ProofTree& folded,
                      const CompiledAxiomSystem& sys);

// t<l_1 | ... | l_n> where `lock_word` is the lock word of t's context and
// lists[i] replaces lock_word[i]. Throws TypeError when an unfolding fails.
Term ModalSubstitute(const Term& t, const ModalityList& lock_word,
                     const std::vector<ModalityList>& lists,
                     const CompiledAxiomSystem& sys);

// Capture-avoiding t[q/x].
Term VarSubstitute(const Term& t, const std::string& x, const Term& q);

std::vector<std::string> FreeVariables(const Term& t);
bool AlphaEqual(const Term& a, const Term& b);

// One leftmost-outermost rewrite, or the input unchanged with *changed
// false. `lock_word` is the lock word of the term's context.
Term Step(const Term& t, const ModalityList& lock_word, const CompiledAxiomSystem& sys,
          bool* changed);

struct NormalizeResult {
  Term term;
  size_t steps = 0;
  bool normal = false;  // false when the step limit was hit
};

NormalizeResult Normalize(const Term& t, const ModalityList& lock_word,
                          const CompiledAxiomSystem& sys, size_t step_limit = 1000);

std::string RenderTerm(const Term& t);
// Parses the RenderTerm syntax. Throws ParseError.
Term ParseTerm(const std::string& text);

}  // namespace trustlogic

#endif  // TRUSTLOGIC_TERMS_H_
