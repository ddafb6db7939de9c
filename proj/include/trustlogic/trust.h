// Copyright 2026 The trustlogic Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef TRUSTLOGIC_TRUST_H_
#define TRUSTLOGIC_TRUST_H_

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "trustlogic/axioms.h"
#include "trustlogic/formula.h"
#include "trustlogic/prover.h"

namespace trustlogic {

// (x0, x1, ..., xn) is a route from xn to x0: xn talks to x(n-1) and so on.
using AgentPath = std::vector<Agent>;

std::string RenderPath(const AgentPath& p);

// Set of non-empty, non-repeating agent lists closed under sublists and
// splicing of alternative routes.
class ForwardingNetwork {
 public:
  ForwardingNetwork() = default;
  // Takes the set as given; see IsForwardingNetwork.
  explicit ForwardingNetwork(std::set<AgentPath> paths);

  const std::set<AgentPath>& paths() const { return paths_; }
  bool Contains(const AgentPath& p) const { return paths_.count(p) > 0; }
  // Every (a, gamma, b) in the set, in set order.
  std::vector<AgentPath> Between(const Agent& a, const Agent& b) const;
  size_t size() const { return paths_.size(); }

  bool operator==(const ForwardingNetwork&) const = default;

 private:
  std::set<AgentPath> paths_;
};

// Checks non-emptiness, no repeats, sublist and splice closure.
bool IsForwardingNetwork(const std::set<AgentPath>& s, std::string* why = nullptr);

// Least forwarding network containing `seed`. Throws std::invalid_argument
// for empty or repeating lists, or when a splice forces a repeating list.
ForwardingNetwork CloseForwarding(const std::vector<AgentPath>& seed);

// Directed communication graph; an edge (u, v) means u sends to v.
struct DirectedGraph {
  std::vector<Agent> vertices;
  std::set<std::pair<Agent, Agent>> edges;

  void AddVertex(const Agent& v);
  void AddEdge(const Agent& from, const Agent& to);
  bool IsAcyclic() const;
};

// All shortest routes between ordered vertex pairs plus singletons.
ForwardingNetwork ShortestPathsNetwork(const DirectedGraph& g);
// All routes of an acyclic graph. Throws std::invalid_argument on a cycle.
ForwardingNetwork AcyclicPathsNetwork(const DirectedGraph& g);

// Some (a, alpha, b, beta, c) in S with b strictly inside.
bool ReachableThrough(const ForwardingNetwork& s, const Agent& a, const Agent& b,
                      const Agent& c);

// Trust of `truster` in `trustee` about predicate family `predicate`.
struct TrustEdge {
  size_t order = 0;
  Agent truster;
  Agent trustee;
  std::string predicate;

  auto operator<=>(const TrustEdge&) const = default;
};

std::string RenderTrustEdge(const TrustEdge& e);

enum class NetworkMode { kShortest, kAcyclic };

struct TrustGraphSpec {
  DirectedGraph graph;
  NetworkMode mode = NetworkMode::kShortest;
  std::set<TrustEdge> asserted;
};

ForwardingNetwork BuildNetwork(const TrustGraphSpec& spec);

// Token for P about agent a: "P_a".
std::string PredicateToken(const std::string& predicate, const Agent& a);

// Which agent indexes the forwarding copy J_{c<-x} V^n(a,b) of a shared edge.
enum class SharingIndex {
  kTruster,  // J_{c<-a}
  kTrustee,  // J_{c<-b}
};

struct TrustOptions {
  // Drop top conjuncts, top antecedents and modalities over top.
  bool simplify = true;
  SharingIndex sharing = SharingIndex::kTruster;
  // The predicate is one token P for every agent instead of P_a.
  bool constant_predicate = false;
};

// Builds the trust formulas over a fixed agent set and network.
class TrustLanguage {
 public:
  TrustLanguage(std::vector<Agent> agents, ForwardingNetwork network, TrustOptions opts = {});

  const std::vector<Agent>& agents() const { return agents_; }
  const ForwardingNetwork& network() const { return network_; }
  const TrustOptions& options() const { return opts_; }

  // Conjunction of I_{a<-gamma<-b}(body) over routes; top when a = b or no route.
  Formula J(const Agent& a, const Agent& b, const Formula& body) const;
  // J_{a<-b}(body) => body.
  Formula ValJ(const Agent& a, const Agent& b, const Formula& body) const;

  Formula Predicate(const std::string& predicate, const Agent& a) const;

  // C^n_a(P), duplicates removed, generation order kept.
  std::vector<Formula> CSet(size_t n, const Agent& a, const std::string& predicate) const;
  Formula OrderValidity(size_t n, const Agent& a, const Agent& b,
                        const std::string& predicate) const;
  // B_a(V^n(a, b)).
  Formula OrderTrust(size_t n, const Agent& a, const Agent& b,
                     const std::string& predicate) const;
  Formula OrderTrust(const TrustEdge& e) const {
    return OrderTrust(e.order, e.truster, e.trustee, e.predicate);
  }

  // T^n(a,b) followed by the forwarding copies for every c with N_S(c,a,b).
  std::vector<Formula> SharedAssumptions(const TrustEdge& e) const;

 private:
  Formula Conj(const std::vector<Formula>& fs) const;
  Formula Imp(const Formula& a, const Formula& b) const;

  std::vector<Agent> agents_;
  ForwardingNetwork network_;
  TrustOptions opts_;
};

enum class TrustRule { kAsserted, kSameOrder, kHigherFirst, kHigherSecond };

std::string TrustRuleName(TrustRule r);

struct TrustDerivation {
  TrustEdge conclusion;
  TrustRule rule = TrustRule::kAsserted;
  // Premises (n', a, b) and (n'', b, c); unset for asserted edges.
  std::optional<TrustEdge> left;
  std::optional<TrustEdge> right;
};

struct SaturationOptions {
  // Also derive (n,a,c) from (n,a,b), (n+1,b,c).
  bool literal_higher_second = false;
};

struct SaturationResult {
  std::set<TrustEdge> edges;
  // One entry per edge, asserted first, then in derivation order.
  std::vector<TrustDerivation> log;

  std::set<TrustEdge> Derived() const;
  const TrustDerivation* Find(const TrustEdge& e) const;
};

// Least fixpoint of
//   (n,a,b), (n,b,c), N_S(a,b,c)   => (n,a,c)
//   (n+1,a,b), (n,b,c), N_S(a,b,c) => (n,a,c)
SaturationResult SaturateTrust(const std::set<TrustEdge>& asserted, const ForwardingNetwork& s,
                               const SaturationOptions& opts = {});

struct VerifyReport {
  TrustDerivation derivation;
  // One per shared assumption of the conclusion.
  std::vector<Formula> goals;
  std::vector<ProveResult> results;
  FlatContext context;

  bool ok() const;
};

// Proves every shared assumption of the conclusion from the shared
// assumptions of the two premises.
VerifyReport VerifyDerivation(const TrustLanguage& lang, const CompiledAxiomSystem& sys,
                              const TrustDerivation& d, const ProverOptions& opts = {});

// (A & B) | (A & C) | (B & C).
Formula TwoOfThree(const Formula& a, const Formula& b, const Formula& c);

// Probability that more than n - k of the n independent sources fail.
// Throws std::invalid_argument unless 1 <= k <= n = |p| and each p in [0, 1].
double RiskAggregate(size_t k, size_t n, const std::vector<double>& failure);

// Universe of the workspace agents with identity inheritance.
CompiledAxiomSystem TrustSystem(const std::vector<Agent>& agents, bool box = false);

}  // namespace trustlogic

#endif  // TRUSTLOGIC_TRUST_H_
