// Copyright 2026 The trustlogic Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "trustlogic/trust.h"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>

namespace trustlogic {

namespace {

bool HasRepeat(const AgentPath& p) {
  std::set<Agent> seen;
  for (const Agent& a : p) {
    if (!seen.insert(a).second) return true;
  }
  return false;
}

AgentPath Splice(const AgentPath& host, size_t i, size_t j, const AgentPath& alt) {
  AgentPath out(host.begin(), host.begin() + i);
  out.insert(out.end(), alt.begin(), alt.end());
  out.insert(out.end(), host.begin() + j + 1, host.end());
  return out;
}

}  // namespace

std::string RenderPath(const AgentPath& p) {
  std::string out = "(";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) out += ",";
    out += p[i].id;
  }
  return out + ")";
}

ForwardingNetwork::ForwardingNetwork(std::set<AgentPath> paths) : paths_(std::move(paths)) {}

std::vector<AgentPath> ForwardingNetwork::Between(const Agent& a, const Agent& b) const {
  std::vector<AgentPath> out;
  for (auto it = paths_.lower_bound(AgentPath{a}); it != paths_.end() && it->front() == a; ++it) {
    if (it->back() == b) out.push_back(*it);
  }
  return out;
}

bool IsForwardingNetwork(const std::set<AgentPath>& s, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  std::map<std::pair<Agent, Agent>, std::vector<const AgentPath*>> by_ends;
  for (const AgentPath& p : s) {
    if (p.empty()) return fail("empty list");
    if (HasRepeat(p)) return fail("repeating list " + RenderPath(p));
    by_ends[{p.front(), p.back()}].push_back(&p);
  }
  for (const AgentPath& p : s) {
    if (p.size() >= 2) {
      AgentPath head(p.begin(), p.end() - 1), tail(p.begin() + 1, p.end());
      if (!s.count(head)) return fail("missing sublist " + RenderPath(head) + " of " + RenderPath(p));
      if (!s.count(tail)) return fail("missing sublist " + RenderPath(tail) + " of " + RenderPath(p));
    }
    for (size_t i = 0; i < p.size(); ++i) {
      for (size_t j = i + 1; j < p.size(); ++j) {
        auto it = by_ends.find({p[i], p[j]});
        if (it == by_ends.end()) continue;
        for (const AgentPath* q : it->second) {
          AgentPath r = Splice(p, i, j, *q);
          if (!s.count(r)) {
            return fail("missing splice " + RenderPath(r) + " of " + RenderPath(*q) +
                        " into " + RenderPath(p));
          }
        }
      }
    }
  }
  return true;
}

ForwardingNetwork CloseForwarding(const std::vector<AgentPath>& seed) {
  std::set<AgentPath> s;
  std::map<std::pair<Agent, Agent>, std::vector<AgentPath>> by_ends;
  std::deque<AgentPath> work;
  auto add = [&](AgentPath p) {
    if (HasRepeat(p)) {
      throw std::invalid_argument("closure needs the repeating list " + RenderPath(p));
    }
    if (!s.insert(p).second) return;
    by_ends[{p.front(), p.back()}].push_back(p);
    work.push_back(std::move(p));
  };
  for (const AgentPath& p : seed) {
    if (p.empty()) throw std::invalid_argument("empty list in seed");
    if (HasRepeat(p)) throw std::invalid_argument("repeating list in seed: " + RenderPath(p));
    add(p);
  }
  while (!work.empty()) {
    AgentPath p = work.front();
    work.pop_front();
    if (p.size() >= 2) {
      add(AgentPath(p.begin(), p.end() - 1));
      add(AgentPath(p.begin() + 1, p.end()));
    }
    // p as host.
    for (size_t i = 0; i < p.size(); ++i) {
      for (size_t j = i + 1; j < p.size(); ++j) {
        auto it = by_ends.find({p[i], p[j]});
        if (it == by_ends.end()) continue;
        std::vector<AgentPath> alts = it->second;
        for (const AgentPath& q : alts) add(Splice(p, i, j, q));
      }
    }
    // p as the alternative route.
    if (p.size() >= 2) {
      std::vector<AgentPath> hosts(s.begin(), s.end());
      for (const AgentPath& h : hosts) {
        auto i = std::find(h.begin(), h.end(), p.front());
        auto j = std::find(h.begin(), h.end(), p.back());
        if (i == h.end() || j == h.end() || i >= j) continue;
        add(Splice(h, i - h.begin(), j - h.begin(), p));
      }
    }
  }
  return ForwardingNetwork(std::move(s));
}

void DirectedGraph::AddVertex(const Agent& v) {
  if (std::find(vertices.begin(), vertices.end(), v) == vertices.end()) vertices.push_back(v);
}

void DirectedGraph::AddEdge(const Agent& from, const Agent& to) {
  AddVertex(from);
  AddVertex(to);
  edges.insert({from, to});
}

bool DirectedGraph::IsAcyclic() const {
  std::map<Agent, size_t> indeg;
  for (const Agent& v : vertices) indeg[v] = 0;
  for (const auto& [u, v] : edges) ++indeg[v];
  std::vector<Agent> ready;
  for (const auto& [v, d] : indeg) {
    if (d == 0) ready.push_back(v);
  }
  size_t seen = 0;
  while (!ready.empty()) {
    Agent u = ready.back();
    ready.pop_back();
    ++seen;
    for (const auto& [x, y] : edges) {
      if (x == u && --indeg[y] == 0) ready.push_back(y);
    }
  }
  return seen == indeg.size();
}

namespace {

// Senders into v.
std::map<Agent, std::vector<Agent>> Incoming(const DirectedGraph& g) {
  std::map<Agent, std::vector<Agent>> in;
  for (const Agent& v : g.vertices) in[v];
  for (const auto& [u, v] : g.edges) {
    in[u];
    in[v].push_back(u);
  }
  return in;
}

}  // namespace

ForwardingNetwork ShortestPathsNetwork(const DirectedGraph& g) {
  auto in = Incoming(g);
  std::set<AgentPath> s;
  for (const auto& [target, unused] : in) {
    std::map<Agent, size_t> dist{{target, 0}};
    std::deque<Agent> q{target};
    while (!q.empty()) {
      Agent x = q.front();
      q.pop_front();
      for (const Agent& u : in[x]) {
        if (dist.emplace(u, dist[x] + 1).second) q.push_back(u);
      }
    }
    AgentPath cur{target};
    std::function<void()> walk = [&]() {
      s.insert(cur);
      Agent last = cur.back();
      for (const Agent& u : in[last]) {
        if (dist[u] != dist[last] + 1) continue;
        cur.push_back(u);
        walk();
        cur.pop_back();
      }
    };
    walk();
  }
  return ForwardingNetwork(std::move(s));
}

ForwardingNetwork AcyclicPathsNetwork(const DirectedGraph& g) {
  if (!g.IsAcyclic()) throw std::invalid_argument("graph has a cycle");
  auto in = Incoming(g);
  std::set<AgentPath> s;
  for (const auto& [target, unused] : in) {
    AgentPath cur{target};
    std::function<void()> walk = [&]() {
      s.insert(cur);
      for (const Agent& u : in[cur.back()]) {
        cur.push_back(u);
        walk();
        cur.pop_back();
      }
    };
    walk();
  }
  return ForwardingNetwork(std::move(s));
}

bool ReachableThrough(const ForwardingNetwork& s, const Agent& a, const Agent& b,
                      const Agent& c) {
  for (const AgentPath& p : s.Between(a, c)) {
    if (p.size() < 3) continue;
    if (std::find(p.begin() + 1, p.end() - 1, b) != p.end() - 1) return true;
  }
  return false;
}

std::string RenderTrustEdge(const TrustEdge& e) {
  return std::to_string(e.order) + " " + e.truster.id + " " + e.trustee.id + " " + e.predicate;
}

ForwardingNetwork BuildNetwork(const TrustGraphSpec& spec) {
  return spec.mode == NetworkMode::kShortest ? ShortestPathsNetwork(spec.graph)
                                             : AcyclicPathsNetwork(spec.graph);
}

std::string PredicateToken(const std::string& predicate, const Agent& a) {
  return predicate + "_" + a.id;
}

TrustLanguage::TrustLanguage(std::vector<Agent> agents, ForwardingNetwork network,
                             TrustOptions opts)
    : agents_(std::move(agents)), network_(std::move(network)), opts_(opts) {}

Formula TrustLanguage::Conj(const std::vector<Formula>& fs) const {
  if (!opts_.simplify) return BigAnd(fs);
  std::vector<Formula> kept;
  for (const Formula& f : fs) {
    if (f.kind() == Formula::Kind::kTop) continue;
    if (std::find(kept.begin(), kept.end(), f) == kept.end()) kept.push_back(f);
  }
  return BigAnd(kept);
}

Formula TrustLanguage::Imp(const Formula& a, const Formula& b) const {
  if (opts_.simplify) {
    if (a.kind() == Formula::Kind::kTop) return b;
    if (b.kind() == Formula::Kind::kTop) return Formula::Top();
  }
  return Formula::Imp(a, b);
}

Formula TrustLanguage::J(const Agent& a, const Agent& b, const Formula& body) const {
  if (a == b) return Formula::Top();
  if (opts_.simplify && body.kind() == Formula::Kind::kTop) return Formula::Top();
  std::vector<Formula> parts;
  for (const AgentPath& p : network_.Between(a, b)) parts.push_back(Chain(p, body));
  return Conj(parts);
}

Formula TrustLanguage::Predicate(const std::string& predicate, const Agent& a) const {
  return Formula::Token(opts_.constant_predicate ? predicate : PredicateToken(predicate, a));
}

Formula TrustLanguage::ValJ(const Agent& a, const Agent& b, const Formula& body) const {
  return Imp(J(a, b, body), body);
}

std::vector<Formula> TrustLanguage::CSet(size_t n, const Agent& a,
                                         const std::string& predicate) const {
  if (n == 0) return {Predicate(predicate, a)};
  std::vector<Formula> out;
  auto push = [&](const Formula& f) {
    if (opts_.simplify && (f.kind() == Formula::Kind::kTop ||
                           std::find(out.begin(), out.end(), f) != out.end())) {
      return;
    }
    out.push_back(f);
  };
  for (const Agent& b : agents_) {
    for (const Formula& x : CSet(n - 1, b, predicate)) {
      push(ValJ(a, b, x));
      push(J(a, b, x));
    }
  }
  return out;
}

Formula TrustLanguage::OrderValidity(size_t n, const Agent& a, const Agent& b,
                                     const std::string& predicate) const {
  std::vector<Formula> parts;
  for (const Formula& x : CSet(n, b, predicate)) parts.push_back(ValJ(a, b, x));
  return Conj(parts);
}

Formula TrustLanguage::OrderTrust(size_t n, const Agent& a, const Agent& b,
                                  const std::string& predicate) const {
  Formula v = OrderValidity(n, a, b, predicate);
  if (opts_.simplify && v.kind() == Formula::Kind::kTop) return v;
  return Formula::Modal(Modality::Belief(a), v);
}

std::vector<Formula> TrustLanguage::SharedAssumptions(const TrustEdge& e) const {
  std::vector<Formula> out{OrderTrust(e)};
  Formula v = OrderValidity(e.order, e.truster, e.trustee, e.predicate);
  const Agent& via = opts_.sharing == SharingIndex::kTruster ? e.truster : e.trustee;
  for (const Agent& c : agents_) {
    if (!ReachableThrough(network_, c, e.truster, e.trustee)) continue;
    Formula f = J(c, via, v);
    if (opts_.simplify && f.kind() == Formula::Kind::kTop) continue;
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  }
  return out;
}

std::string TrustRuleName(TrustRule r) {
  switch (r) {
    case TrustRule::kAsserted:
      return "asserted";
    case TrustRule::kSameOrder:
      return "same-order";
    case TrustRule::kHigherFirst:
      return "higher-first";
    case TrustRule::kHigherSecond:
      return "higher-second";
  }
  return "?";
}

std::set<TrustEdge> SaturationResult::Derived() const {
  std::set<TrustEdge> out;
  for (const TrustDerivation& d : log) {
    if (d.rule != TrustRule::kAsserted) out.insert(d.conclusion);
  }
  return out;
}

const TrustDerivation* SaturationResult::Find(const TrustEdge& e) const {
  for (const TrustDerivation& d : log) {
    if (d.conclusion == e) return &d;
  }
  return nullptr;
}

SaturationResult SaturateTrust(const std::set<TrustEdge>& asserted, const ForwardingNetwork& s,
                               const SaturationOptions& opts) {
  SaturationResult r;
  r.edges = asserted;
  for (const TrustEdge& e : asserted) r.log.push_back({e, TrustRule::kAsserted, {}, {}});
  for (;;) {
    std::vector<TrustDerivation> fresh;
    std::set<TrustEdge> seen;
    for (const TrustEdge& x : r.edges) {
      for (const TrustEdge& y : r.edges) {
        if (x.trustee != y.truster || x.predicate != y.predicate) continue;
        if (!ReachableThrough(s, x.truster, x.trustee, y.trustee)) continue;
        std::optional<std::pair<size_t, TrustRule>> out;
        if (x.order == y.order) {
          out = {{x.order, TrustRule::kSameOrder}};
        } else if (x.order == y.order + 1) {
          out = {{y.order, TrustRule::kHigherFirst}};
        } else if (opts.literal_higher_second && y.order == x.order + 1) {
          out = {{x.order, TrustRule::kHigherSecond}};
        }
        if (!out) continue;
        TrustEdge c{out->first, x.truster, y.trustee, x.predicate};
        if (r.edges.count(c) || !seen.insert(c).second) continue;
        fresh.push_back({c, out->second, x, y});
      }
    }
    if (fresh.empty()) break;
    for (const TrustDerivation& d : fresh) {
      r.edges.insert(d.conclusion);
      r.log.push_back(d);
    }
  }
  return r;
}

bool VerifyReport::ok() const {
  for (const ProveResult& p : results) {
    if (p.verdict != Verdict::kProved) return false;
  }
  return results.size() == goals.size();
}

VerifyReport VerifyDerivation(const TrustLanguage& lang, const CompiledAxiomSystem& sys,
                              const TrustDerivation& d, const ProverOptions& opts) {
  VerifyReport rep;
  rep.derivation = d;
  if (d.rule == TrustRule::kAsserted) {
    for (const Formula& f : lang.SharedAssumptions(d.conclusion)) rep.context.Add(f);
  } else {
    for (const Formula& f : lang.SharedAssumptions(*d.left)) rep.context.Add(f);
    for (const Formula& f : lang.SharedAssumptions(*d.right)) rep.context.Add(f);
  }
  rep.goals = lang.SharedAssumptions(d.conclusion);
  for (const Formula& g : rep.goals) rep.results.push_back(Prove(rep.context, g, sys, opts));
  return rep;
}

Formula TwoOfThree(const Formula& a, const Formula& b, const Formula& c) {
  return Formula::Or(Formula::Or(Formula::And(a, b), Formula::And(a, c)), Formula::And(b, c));
}

double RiskAggregate(size_t k, size_t n, const std::vector<double>& failure) {
  if (k < 1 || k > n) throw std::invalid_argument("threshold needs 1 <= k <= n");
  if (failure.size() != n) {
    throw std::invalid_argument("expected " + std::to_string(n) + " probabilities, got " +
                                std::to_string(failure.size()));
  }
  // dist[f] = P(exactly f failures so far).
  std::vector<double> dist{1.0};
  for (double p : failure) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("probability out of range: " + std::to_string(p));
    }
    std::vector<double> next(dist.size() + 1, 0.0);
    for (size_t f = 0; f < dist.size(); ++f) {
      next[f] += dist[f] * (1.0 - p);
      next[f + 1] += dist[f] * p;
    }
    dist = std::move(next);
  }
  double risk = 0.0;
  for (size_t f = n - k + 1; f <= n; ++f) risk += dist[f];
  return risk;
}

CompiledAxiomSystem TrustSystem(const std::vector<Agent>& agents, bool box) {
  std::vector<std::string> ids;
  for (const Agent& a : agents) ids.push_back(a.id);
  return StandardSystem(AgentUniverse::Discrete(ids), box);
}

}  // namespace trustlogic
