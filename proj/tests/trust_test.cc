// Copyright 2026 The trustlogic Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "pki_fixtures.h"
#include "test_support.h"
#include "trustlogic/kripke.h"
#include "trustlogic/prover.h"
#include "trustlogic/trust.h"

namespace trustlogic {
namespace {

using testing::A;
using testing::F;
using testing::Im;

AgentPath P(const std::string& s) {
  AgentPath p;
  for (char c : s) p.push_back(Agent(std::string(1, c)));
  return p;
}

std::set<AgentPath> Ps(std::initializer_list<const char*> l) {
  std::set<AgentPath> out;
  for (const char* s : l) out.insert(P(s));
  return out;
}

std::vector<Agent> Agents(const std::string& s) {
  std::vector<Agent> out;
  for (char c : s) out.push_back(Agent(std::string(1, c)));
  return out;
}

bool Repeats(const AgentPath& p) {
  return std::set<Agent>(p.begin(), p.end()).size() != p.size();
}

// Applies both closure rules to every pair until nothing changes. Stops
// with the repeating list included once one appears.
std::set<AgentPath> NaiveClose(std::set<AgentPath> s) {
  for (bool changed = true; changed;) {
    if (std::any_of(s.begin(), s.end(), Repeats)) break;
    changed = false;
    std::set<AgentPath> add;
    for (const AgentPath& p : s) {
      if (p.size() >= 2) {
        add.insert(AgentPath(p.begin() + 1, p.end()));
        add.insert(AgentPath(p.begin(), p.end() - 1));
      }
      for (const AgentPath& q : s) {
        for (size_t i = 0; i < p.size(); ++i) {
          for (size_t j = i + 1; j < p.size(); ++j) {
            if (q.front() != p[i] || q.back() != p[j]) continue;
            AgentPath r(p.begin(), p.begin() + i);
            r.insert(r.end(), q.begin(), q.end());
            r.insert(r.end(), p.begin() + j + 1, p.end());
            add.insert(r);
          }
        }
      }
    }
    for (const AgentPath& p : add) changed |= s.insert(p).second;
  }
  return s;
}

// Every simple route (x0 .. xn) with edges x(i+1) -> xi, by brute force.
std::set<AgentPath> AllRoutes(const DirectedGraph& g) {
  std::set<AgentPath> out;
  std::function<void(AgentPath&)> grow = [&](AgentPath& cur) {
    out.insert(cur);
    for (const Agent& u : g.vertices) {
      if (!g.edges.count({u, cur.back()})) continue;
      if (std::find(cur.begin(), cur.end(), u) != cur.end()) continue;
      cur.push_back(u);
      grow(cur);
      cur.pop_back();
    }
  };
  for (const Agent& v : g.vertices) {
    AgentPath cur{v};
    grow(cur);
  }
  return out;
}

std::set<AgentPath> ShortestOracle(const DirectedGraph& g) {
  auto all = AllRoutes(g);
  std::map<std::pair<Agent, Agent>, size_t> best;
  for (const AgentPath& p : all) {
    auto key = std::make_pair(p.front(), p.back());
    auto it = best.find(key);
    if (it == best.end() || p.size() < it->second) best[key] = p.size();
  }
  std::set<AgentPath> out;
  for (const AgentPath& p : all) {
    if (best[{p.front(), p.back()}] == p.size()) out.insert(p);
  }
  return out;
}

DirectedGraph RandomGraph(std::mt19937_64& rng, size_t n, double p, bool dag) {
  DirectedGraph g;
  for (size_t i = 0; i < n; ++i) g.AddVertex(Agent(std::string(1, char('a' + i))));
  std::bernoulli_distribution coin(p);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i == j || (dag && j <= i)) continue;
      if (coin(rng)) g.AddEdge(g.vertices[i], g.vertices[j]);
    }
  }
  return g;
}

bool NaiveReach(const ForwardingNetwork& s, const Agent& a, const Agent& b, const Agent& c) {
  for (const AgentPath& p : s.paths()) {
    if (p.size() < 3 || p.front() != a || p.back() != c) continue;
    for (size_t i = 1; i + 1 < p.size(); ++i) {
      if (p[i] == b) return true;
    }
  }
  return false;
}

bool Proves(const std::vector<Formula>& ctx, const Formula& goal, const CompiledAxiomSystem& sys,
            size_t budget = 2000000) {
  ProverOptions o;
  o.budget = budget;
  return Prove(FlatContext(ctx), goal, sys, o).verdict == Verdict::kProved;
}

bool Interprovable(const Formula& x, const Formula& y, const CompiledAxiomSystem& sys) {
  return Proves({x}, y, sys) && Proves({y}, x, sys);
}

TEST(CloseForwarding, Examples) {
  EXPECT_EQ(CloseForwarding({P("abc")}).paths(), Ps({"a", "b", "c", "ab", "bc", "abc"}));
  EXPECT_EQ(CloseForwarding({P("a")}).paths(), Ps({"a"}));
  auto two = CloseForwarding({P("abc"), P("adc")}).paths();
  EXPECT_EQ(two, NaiveClose(Ps({"abc", "adc"})));
  EXPECT_TRUE(two.count(P("ad")) && two.count(P("dc")));
  // A splice into a longer host.
  auto sp = CloseForwarding({P("xabcy"), P("adc")}).paths();
  EXPECT_TRUE(sp.count(P("xadcy")));
  EXPECT_EQ(sp, NaiveClose(Ps({"xabcy", "adc"})));
}

TEST(CloseForwarding, Errors) {
  EXPECT_THROW(CloseForwarding({P("aba")}), std::invalid_argument);
  EXPECT_THROW(CloseForwarding({AgentPath{}}), std::invalid_argument);
  // Splicing (b,a,c) into (a,b,c) would revisit a.
  EXPECT_THROW(CloseForwarding({P("abc"), P("bac")}), std::invalid_argument);
}

TEST(CloseForwarding, MatchesNaiveFixpointAndIsClosed) {
  std::mt19937_64 rng(3);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    std::vector<AgentPath> seed;
    std::uniform_int_distribution<int> len(1, 4), cnt(1, 3);
    for (int k = cnt(rng); k > 0; --k) {
      AgentPath p = Agents("abcde");
      std::shuffle(p.begin(), p.end(), rng);
      p.resize(len(rng));
      seed.push_back(p);
    }
    std::set<AgentPath> naive = NaiveClose(std::set<AgentPath>(seed.begin(), seed.end()));
    bool bad = std::any_of(naive.begin(), naive.end(), Repeats);
    if (bad) {
      EXPECT_THROW(CloseForwarding(seed), std::invalid_argument);
      continue;
    }
    ++checked;
    ForwardingNetwork s = CloseForwarding(seed);
    ASSERT_EQ(s.paths(), naive);
    std::string why;
    ASSERT_TRUE(IsForwardingNetwork(s.paths(), &why)) << why;
    std::vector<AgentPath> again(s.paths().begin(), s.paths().end());
    ASSERT_EQ(CloseForwarding(again), s);
  }
  EXPECT_GT(checked, 100);
}

TEST(IsForwardingNetwork, Violations) {
  std::string why;
  EXPECT_FALSE(IsForwardingNetwork(Ps({"abc"}), &why));
  EXPECT_NE(why.find("sublist"), std::string::npos);
  EXPECT_FALSE(IsForwardingNetwork(Ps({"a", "b", "c", "d", "x", "ab", "bc", "abc", "ad", "dc",
                                       "adc", "xa", "xab", "xabc"}),
                                   &why));
  EXPECT_NE(why.find("splice (x,a,d,c)"), std::string::npos) << why;
  EXPECT_FALSE(IsForwardingNetwork(Ps({"a", "b", "aba", "ab", "ba"}), &why));
  EXPECT_NE(why.find("repeating"), std::string::npos);
  EXPECT_TRUE(IsForwardingNetwork(Ps({"a"})));
}

TEST(ShortestPathsNetwork, Examples) {
  DirectedGraph g;
  g.AddEdge(A("b"), A("a"));
  EXPECT_EQ(ShortestPathsNetwork(g).paths(), Ps({"a", "b", "ab"}));

  TrustGraphSpec bca = testing::PkiSpec(testing::PkiCases()[1].asserted);
  ForwardingNetwork s = ShortestPathsNetwork(bca.graph);
  EXPECT_TRUE(s.Contains({A("a"), A("CA_a"), A("BCA"), A("CA_b"), A("b")}));
  EXPECT_EQ(s.paths(), ShortestOracle(bca.graph));

  DirectedGraph diamond;
  diamond.AddEdge(A("d"), A("b"));
  diamond.AddEdge(A("d"), A("c"));
  diamond.AddEdge(A("b"), A("a"));
  diamond.AddEdge(A("c"), A("a"));
  auto ds = ShortestPathsNetwork(diamond).paths();
  EXPECT_TRUE(ds.count(P("abd")) && ds.count(P("acd")));
}

TEST(ShortestPathsNetwork, RandomGraphsMatchOracleAndAreClosed) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    DirectedGraph g = RandomGraph(rng, 2 + rng() % 4, 0.4, false);
    ForwardingNetwork s = ShortestPathsNetwork(g);
    ASSERT_EQ(s.paths(), ShortestOracle(g));
    std::string why;
    ASSERT_TRUE(IsForwardingNetwork(s.paths(), &why)) << why;
  }
}

TEST(AcyclicPathsNetwork, Examples) {
  DirectedGraph chain;
  chain.AddEdge(A("b"), A("a"));
  chain.AddEdge(A("c"), A("b"));
  EXPECT_EQ(AcyclicPathsNetwork(chain), CloseForwarding({P("abc")}));

  DirectedGraph diamond;
  diamond.AddEdge(A("d"), A("b"));
  diamond.AddEdge(A("d"), A("c"));
  diamond.AddEdge(A("b"), A("a"));
  diamond.AddEdge(A("c"), A("a"));
  diamond.AddEdge(A("d"), A("a"));
  auto ds = AcyclicPathsNetwork(diamond).paths();
  EXPECT_TRUE(ds.count(P("abd")) && ds.count(P("acd")) && ds.count(P("ad")));
  EXPECT_FALSE(ShortestPathsNetwork(diamond).Contains(P("abd")));

  DirectedGraph single;
  single.AddVertex(A("v"));
  EXPECT_EQ(AcyclicPathsNetwork(single).paths(), std::set<AgentPath>{{A("v")}});

  DirectedGraph cyc = chain;
  cyc.AddEdge(A("a"), A("c"));
  EXPECT_FALSE(cyc.IsAcyclic());
  EXPECT_THROW(AcyclicPathsNetwork(cyc), std::invalid_argument);
  DirectedGraph loop;
  loop.AddEdge(A("a"), A("a"));
  EXPECT_THROW(AcyclicPathsNetwork(loop), std::invalid_argument);
}

TEST(AcyclicPathsNetwork, RandomDagsMatchOracleAndAreClosed) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    DirectedGraph g = RandomGraph(rng, 1 + rng() % 5, 0.5, true);
    ForwardingNetwork s = AcyclicPathsNetwork(g);
    ASSERT_EQ(s.paths(), AllRoutes(g));
    std::string why;
    ASSERT_TRUE(IsForwardingNetwork(s.paths(), &why)) << why;
  }
}

TEST(ReachableThrough, ExamplesAndFactoring) {
  ForwardingNetwork s = CloseForwarding({P("abc")});
  EXPECT_TRUE(ReachableThrough(s, A("a"), A("b"), A("c")));
  EXPECT_FALSE(ReachableThrough(s, A("a"), A("c"), A("b")));
  EXPECT_FALSE(ReachableThrough(s, A("a"), A("a"), A("c")));

  std::mt19937_64 rng(23);
  auto agents = Agents("abcde");
  int premises = 0;
  for (int i = 0; i < 200; ++i) {
    DirectedGraph g = RandomGraph(rng, 5, 0.45, false);
    ForwardingNetwork s = ShortestPathsNetwork(g);
    for (const Agent& a : agents) {
      for (const Agent& b : agents) {
        for (const Agent& c : agents) {
          ASSERT_EQ(ReachableThrough(s, a, b, c), NaiveReach(s, a, b, c));
          for (const Agent& d : agents) {
            if (NaiveReach(s, a, b, d) && NaiveReach(s, b, c, d)) {
              ++premises;
              ASSERT_TRUE(ReachableThrough(s, a, b, c) && ReachableThrough(s, a, c, d));
            }
            if (NaiveReach(s, a, b, c) && NaiveReach(s, a, c, d)) {
              ASSERT_TRUE(ReachableThrough(s, a, b, d) && ReachableThrough(s, b, c, d));
            }
          }
        }
      }
    }
  }
  EXPECT_GT(premises, 100);
}

TEST(TrustLanguage, JExpansion) {
  TrustLanguage lang(Agents("abcd"), CloseForwarding({P("abc")}));
  EXPECT_EQ(lang.J(A("a"), A("c"), F("t")), F("[I a <- b][I b <- c]t"));
  EXPECT_EQ(lang.J(A("a"), A("a"), F("t")), Formula::Top());
  EXPECT_EQ(lang.J(A("a"), A("d"), F("t")), Formula::Top());
  EXPECT_EQ(lang.ValJ(A("a"), A("d"), F("t")), F("t"));
  TrustLanguage raw(Agents("abcd"), CloseForwarding({P("abc")}), {.simplify = false});
  EXPECT_EQ(raw.ValJ(A("a"), A("d"), F("t")), F("true -> t"));

  TrustLanguage two(Agents("abcd"), CloseForwarding({P("abc"), P("adc")}));
  EXPECT_EQ(two.J(A("a"), A("c"), F("t")),
            F("[I a <- b][I b <- c]t & [I a <- d][I d <- c]t"));
}

TEST(TrustLanguage, CSet) {
  ForwardingNetwork s = CloseForwarding({P("ab"), P("ba")});
  TrustLanguage lang(Agents("ab"), s, {.simplify = false});
  EXPECT_EQ(lang.CSet(0, A("a"), "P"), std::vector<Formula>{F("P_a")});
  std::vector<Formula> c1 = lang.CSet(1, A("b"), "P");
  std::vector<Formula> expect = {F("([I b <- a]P_a) -> P_a"), F("[I b <- a]P_a"),
                                 F("true -> P_b"), F("true")};
  EXPECT_EQ(c1, expect);
  for (size_t n = 0; n <= 3; ++n) {
    EXPECT_EQ(lang.CSet(n, A("a"), "P").size(), static_cast<size_t>(std::pow(4, n)));
  }
  TrustLanguage simp(Agents("ab"), s);
  EXPECT_EQ(simp.CSet(1, A("b"), "P"),
            (std::vector<Formula>{F("([I b <- a]P_a) -> P_a"), F("[I b <- a]P_a"), F("P_b")}));
}

TEST(TrustLanguage, OrderFormulas) {
  auto sys = TrustSystem(Agents("abc"));
  ForwardingNetwork s = CloseForwarding({P("abc"), P("ac")});
  TrustLanguage lang(Agents("abc"), s);
  EXPECT_EQ(lang.OrderTrust(0, A("a"), A("b"), "P"), F("[B a](([I a <- b]P_b) -> P_b)"));
  EXPECT_EQ(lang.OrderValidity(0, A("a"), A("a"), "P"), F("P_a"));
  TrustLanguage raw(Agents("abc"), s, {.simplify = false});
  EXPECT_EQ(raw.OrderValidity(0, A("a"), A("a"), "P"), F("true -> P_a"));

  // T^1(a,b) against the per-c two-conjunct form, built independently.
  std::vector<Formula> parts;
  for (const Agent& c : Agents("abc")) {
    Formula pc = Formula::Token("P_" + c.id);
    auto jbc = [&](const Formula& x) { return raw.J(A("b"), c, x); };
    auto val_ab = [&](const Formula& x) { return Formula::Imp(raw.J(A("a"), A("b"), x), x); };
    parts.push_back(Formula::Modal(testing::Bm("a"), val_ab(Formula::Imp(jbc(pc), pc))));
    parts.push_back(Formula::Modal(testing::Bm("a"), val_ab(jbc(pc))));
  }
  Formula display = BigAnd(parts);
  EXPECT_TRUE(Interprovable(lang.OrderTrust(1, A("a"), A("b"), "P"), display, sys));
  EXPECT_TRUE(Interprovable(raw.OrderTrust(1, A("a"), A("b"), "P"), display, sys));
}

TEST(TrustLanguage, SharedAssumptions) {
  TrustLanguage iso(Agents("ab"), CloseForwarding({P("ab")}));
  TrustEdge e{0, A("a"), A("b"), "P"};
  EXPECT_EQ(iso.SharedAssumptions(e), std::vector<Formula>{iso.OrderTrust(e)});

  TrustGraphSpec bca = testing::PkiSpec(testing::PkiCases()[1].asserted);
  ForwardingNetwork s = BuildNetwork(bca);
  std::vector<Agent> agents = bca.graph.vertices;
  TrustLanguage lang(agents, s);
  TrustEdge x{1, A("BCA"), A("CA_b"), "P"};
  auto sh = lang.SharedAssumptions(x);
  Formula v = lang.OrderValidity(1, A("BCA"), A("CA_b"), "P");
  EXPECT_EQ(sh.front(), lang.OrderTrust(x));
  // N_S(c, BCA, CA_b) holds for c = CA_a and c = a.
  EXPECT_EQ(sh.size(), 3u);
  EXPECT_NE(std::find(sh.begin(), sh.end(), lang.J(A("a"), A("BCA"), v)), sh.end());
  EXPECT_NE(std::find(sh.begin(), sh.end(), lang.J(A("CA_a"), A("BCA"), v)), sh.end());

  TrustLanguage literal(agents, s, {.sharing = SharingIndex::kTrustee});
  auto shl = literal.SharedAssumptions(x);
  EXPECT_NE(std::find(shl.begin(), shl.end(), lang.J(A("a"), A("CA_b"), v)), shl.end());
}

// J behaves like a modality on small networks.
TEST(TrustLanguage, JModalityLemma) {
  auto sys = TrustSystem(Agents("abcd"));
  std::vector<ForwardingNetwork> nets = {CloseForwarding({P("abc")}),
                                         CloseForwarding({P("abc"), P("adc")}),
                                         CloseForwarding({P("abdc"), P("ac")})};
  for (const auto& s : nets) {
    TrustLanguage lang(Agents("abcd"), s);
    for (const Agent& a : Agents("abcd")) {
      for (const Agent& b : Agents("abcd")) {
        if (a == b || s.Between(a, b).empty()) continue;
        auto j = [&](const Formula& x) { return lang.J(a, b, x); };
        Formula t = F("t"), r = F("r");
        EXPECT_TRUE(Proves({j(Formula::Imp(t, r)), j(t)}, j(r), sys));
        EXPECT_TRUE(Proves({}, j(F("t -> t")), sys));
        EXPECT_TRUE(Proves({j(t)}, Formula::Modal(Modality::Belief(a), j(t)), sys));
        EXPECT_TRUE(Proves({j(t)}, j(Formula::Modal(Modality::Belief(b), t)), sys));
      }
    }
  }
}

TEST(TrustLanguage, Factoring) {
  auto sys = TrustSystem(Agents("abcd"));
  std::vector<ForwardingNetwork> nets = {CloseForwarding({P("abc")}),
                                         CloseForwarding({P("abc"), P("adbc")}),
                                         CloseForwarding({P("abc"), P("adc")})};
  int checked = 0;
  for (const auto& s : nets) {
    TrustLanguage lang(Agents("abcd"), s);
    for (const Agent& a : Agents("abcd")) {
      for (const Agent& b : Agents("abcd")) {
        for (const Agent& c : Agents("abcd")) {
          if (!ReachableThrough(s, a, b, c)) continue;
          ++checked;
          Formula goal = lang.J(a, b, lang.J(b, c, F("t")));
          EXPECT_TRUE(Proves({lang.J(a, c, F("t"))}, goal, sys));
        }
      }
    }
  }
  EXPECT_GT(checked, 4);
}

TEST(ValidityProperties, DerivableRows) {
  std::vector<std::pair<std::vector<Modality>, CompiledAxiomSystem>> setups;
  Modality m = Modality::Named("M"), n = Modality::Named("N");
  setups.push_back({{m, n}, CompiledAxiomSystem::Compile({m, n}, {})});
  setups.push_back({{Im("a", "b"), Im("b", "c")}, TrustSystem(Agents("abc"))});
  setups.push_back({{testing::Bm("a"), Im("a", "b")}, TrustSystem(Agents("abc"))});
  for (const auto& [mods, sys] : setups) {
    ModalityList lm{mods[0]}, ln{mods[1]}, lmn{mods[0], mods[1]};
    for (const char* as : {"t", "t & u", "t -> u"}) {
      Formula a = F(as), b = F("u");
      auto val = [](const ModalityList& l, const Formula& x) { return Validity(l, x); };
      auto box = [](const ModalityList& l, const Formula& x) { return ApplyModalities(l, x); };
      EXPECT_TRUE(Proves({val(lm, a), box(lm, a)}, a, sys));
      EXPECT_TRUE(Proves({a}, val(lm, a), sys));
      EXPECT_TRUE(Proves({val(lm, a), val(lm, b)}, val(lm, Formula::And(a, b)), sys));
      EXPECT_TRUE(Proves({val(lm, box(ln, a)), val(ln, a)}, val(lmn, a), sys));
      EXPECT_TRUE(Proves({box(lm, val(ln, a)), val(lm, a)}, val(lmn, a), sys));
      EXPECT_TRUE(Proves({box(lm, val(ln, a)), val(lm, val(ln, a)), val(lm, box(ln, a))},
                         val(lmn, a), sys));
    }
  }
}

TEST(ValidityProperties, NoAxiomK) {
  Modality m = Modality::Named("M");
  auto bare = CompiledAxiomSystem::Compile({m}, {});
  auto std3 = TrustSystem(Agents("abc"));
  for (const auto& [mod, sys] : {std::pair{m, bare}, std::pair{Im("a", "b"), std3}}) {
    ModalityList l{mod};
    Formula k = Formula::Imp(Formula::And(Validity(l, F("t")), Validity(l, F("t -> r"))),
                             Validity(l, F("r")));
    ProverOptions o;
    o.budget = 0;
    EXPECT_EQ(Prove({}, k, sys, o).verdict, Verdict::kNotProvable);
    CountermodelOptions co;
    co.max_worlds = 2;
    auto cm = FindCountermodel({}, k, sys, co);
    ASSERT_EQ(cm.status, CountermodelResult::Status::kFound);
    EXPECT_LE(cm.frame->size(), 2u);
    EXPECT_TRUE(Conforms(*cm.frame, sys));
    EXPECT_FALSE(Satisfies(*cm.frame, cm.world, k));
  }
}

TEST(Composition, ChainLemma) {
  auto sys = TrustSystem(Agents("abcd"));
  // alpha = (a), b, gamma = (c) and alpha = (a, d), b, gamma = (c).
  for (const auto& [alpha, gamma] :
       {std::pair{Agents("a"), Agents("c")}, std::pair{Agents("ad"), Agents("c")},
        std::pair{Agents("a"), Agents("cd")}}) {
    AgentPath ab = alpha, bg{A("b")}, abg = alpha;
    ab.push_back(A("b"));
    bg.insert(bg.end(), gamma.begin(), gamma.end());
    abg.push_back(A("b"));
    abg.insert(abg.end(), gamma.begin(), gamma.end());
    for (const char* as : {"t", "t -> u"}) {
      Formula a = F(as);
      Formula lhs1 = Validity(ChainModalities(ab), a);
      Formula lhs2 = Chain(ab, Validity(ChainModalities(bg), a));
      EXPECT_TRUE(Proves({lhs1, lhs2}, Validity(ChainModalities(abg), a), sys));
    }
  }
}

struct OrderFormulas {
  Formula v1ab, vab, vbc, vac, jvbc, t1ab, tab, tac;
};

OrderFormulas MakeOrder(const TrustLanguage& L, size_t n) {
  Agent a("a"), b("b"), c("c");
  OrderFormulas o{L.OrderValidity(n + 1, a, b, "P"), L.OrderValidity(n, a, b, "P"),
                  L.OrderValidity(n, b, c, "P"),     L.OrderValidity(n, a, c, "P"),
                  Formula::Top(),                    L.OrderTrust(n + 1, a, b, "P"),
                  L.OrderTrust(n, a, b, "P"),        L.OrderTrust(n, a, c, "P")};
  o.jvbc = L.J(a, b, o.vbc);
  return o;
}

// Property k as (hypotheses, goal).
std::pair<std::vector<Formula>, Formula> Property(const OrderFormulas& o, int k) {
  switch (k) {
    case 1: return {{o.v1ab, o.vbc}, o.vac};
    case 2: return {{o.v1ab, o.jvbc}, o.vac};
    case 3: return {{o.vab, o.jvbc}, o.vac};
    case 4: return {{o.t1ab, o.jvbc}, o.tac};
    default: return {{o.tab, o.jvbc}, o.tac};
  }
}

Verdict Decide(const std::vector<Formula>& ctx, const Formula& goal,
               const CompiledAxiomSystem& sys) {
  ProverOptions o;
  o.budget = 0;
  return Prove(FlatContext(ctx), goal, sys, o).verdict;
}

// Composition through a strictly higher order holds for every predicate
// reading, n <= 1, three agents.
TEST(Composition, HigherOrderLemmas) {
  auto agents = Agents("abc");
  auto sys = TrustSystem(agents);
  Agent a("a"), b("b"), c("c");
  for (bool constant : {false, true}) {
    for (const auto& seed : std::vector<std::vector<AgentPath>>{
             {P("abc")}, {P("abc"), P("ac")}, {P("abc"), P("cb")}, {P("abc"), P("cba")}}) {
      ForwardingNetwork s = CloseForwarding(seed);
      TrustLanguage L(agents, s, {.simplify = true, .constant_predicate = constant});
      ASSERT_TRUE(ReachableThrough(s, a, b, c));
      for (size_t n = 0; n <= 1; ++n) {
        OrderFormulas o = MakeOrder(L, n);
        for (int k : {1, 2, 4}) {
          auto [ctx, goal] = Property(o, k);
          EXPECT_EQ(Decide(ctx, goal, sys), Verdict::kProved)
              << "property " << k << " n=" << n << " constant=" << constant;
        }
        // V^{n+1}(a,b) => ValJ_{a<-b}(V^n(b,c)).
        EXPECT_EQ(Decide({o.v1ab}, L.ValJ(a, b, o.vbc), sys), Verdict::kProved);
      }
    }
  }
}

// Same-order composition on chains where nothing reaches c.
TEST(Composition, SameOrderOnChains) {
  auto agents = Agents("abc");
  auto sys = TrustSystem(agents);
  for (const auto& s : {CloseForwarding({P("abc")}), CloseForwarding({P("abc"), P("ac")})}) {
    TrustLanguage constant(agents, s, {.simplify = true, .constant_predicate = true});
    TrustLanguage indexed(agents, s);
    for (size_t n = 0; n <= 1; ++n) {
      for (int k : {3, 5}) {
        auto [ctx, goal] = Property(MakeOrder(constant, n), k);
        EXPECT_EQ(Decide(ctx, goal, sys), Verdict::kProved) << "constant, property " << k;
      }
    }
    for (int k : {3, 5}) {
      auto [ctx, goal] = Property(MakeOrder(indexed, 1), k);
      EXPECT_EQ(Decide(ctx, goal, sys), Verdict::kProved) << "indexed n=1, property " << k;
    }
  }
}

// The same-order step needs C^n_c within C^n_b. It fails for P_a-style
// predicates at order 0 and for routes into c at order 1.
TEST(Composition, SameOrderCounterexamples) {
  auto agents = Agents("abc");
  auto sys = TrustSystem(agents);
  TrustLanguage indexed(agents, CloseForwarding({P("abc")}));
  OrderFormulas o = MakeOrder(indexed, 0);
  for (int k : {3, 5}) {
    auto [ctx, goal] = Property(o, k);
    EXPECT_EQ(Decide(ctx, goal, sys), Verdict::kNotProvable) << "property " << k;
  }
  auto cm = FindCountermodel(FlatContext({o.vab, o.jvbc}), o.vac, sys, {});
  ASSERT_EQ(cm.status, CountermodelResult::Status::kFound);
  EXPECT_TRUE(Conforms(*cm.frame, sys));
  EXPECT_TRUE(Satisfies(*cm.frame, cm.world, o.vab));
  EXPECT_TRUE(Satisfies(*cm.frame, cm.world, o.jvbc));
  EXPECT_FALSE(Satisfies(*cm.frame, cm.world, o.vac));

  TrustLanguage constant(agents, CloseForwarding({P("abc"), P("cb")}),
                         {.simplify = true, .constant_predicate = true});
  for (int k : {3, 5}) {
    auto [ctx, goal] = Property(MakeOrder(constant, 1), k);
    EXPECT_EQ(Decide(ctx, goal, sys), Verdict::kNotProvable) << "property " << k;
  }
}

TEST(SaturateTrust, PkiExamples) {
  for (const auto& pc : testing::PkiCases()) {
    SCOPED_TRACE(pc.name);
    TrustGraphSpec spec = testing::PkiSpec(pc.asserted);
    ForwardingNetwork s = BuildNetwork(spec);
    auto r = SaturateTrust(spec.asserted, s);
    auto derived = r.Derived();
    for (const TrustEdge& e : testing::Edges(pc.dotted)) {
      EXPECT_TRUE(derived.count(e)) << RenderTrustEdge(e);
    }
    EXPECT_EQ(derived, testing::Edges(pc.derived));
    for (const TrustEdge& e : derived) {
      const TrustDerivation* d = r.Find(e);
      ASSERT_NE(d, nullptr);
      EXPECT_TRUE(ReachableThrough(s, d->left->truster, d->left->trustee, d->right->trustee));
    }
  }
}

TEST(SaturateTrust, MeshUsersAndFixpoint) {
  auto pc = testing::PkiCases().back();
  TrustGraphSpec spec = testing::PkiSpec(pc.asserted);
  auto r = SaturateTrust(spec.asserted, BuildNetwork(spec));
  auto derived = r.Derived();
  // Each user reaches all others through the CA chain; CA pairs at order 1
  // and CA-to-user at order 0 come along.
  for (const char* x : {"a", "b", "c"}) {
    for (const char* y : {"a", "b", "c"}) {
      if (std::string(x) == y) continue;
      EXPECT_TRUE(derived.count({0, A(x), A(y), "P"}));
      EXPECT_TRUE(derived.count({0, A(std::string("CA_") + x), A(y), "P"}));
      EXPECT_TRUE(derived.count({1, A(x), A(std::string("CA_") + y), "P"}));
    }
  }
  EXPECT_TRUE(derived.count({1, A("CA_a"), A("CA_c"), "P"}));
  EXPECT_TRUE(derived.count({1, A("CA_c"), A("CA_a"), "P"}));
  EXPECT_EQ(derived.size(), 6u + 6u + 6u + 2u);
  // Idempotent.
  EXPECT_EQ(SaturateTrust(r.edges, BuildNetwork(spec)).edges, r.edges);
}

TEST(SaturateTrust, LiteralOrientationFlag) {
  // (0,a,b), (1,b,c): only the literal reading fires.
  ForwardingNetwork s = CloseForwarding({P("abc")});
  auto asserted = testing::Edges({{0, "a", "b"}, {1, "b", "c"}});
  EXPECT_TRUE(SaturateTrust(asserted, s).Derived().empty());
  SaturationOptions lit;
  lit.literal_higher_second = true;
  auto r = SaturateTrust(asserted, s, lit);
  EXPECT_EQ(r.Derived(), testing::Edges({{0, "a", "c"}}));
  EXPECT_EQ(r.Find({0, A("a"), A("c"), "P"})->rule, TrustRule::kHigherSecond);
}

TEST(VerifyDerivation, DedicatedDomainAndBca) {
  for (size_t idx : {0u, 1u}) {
    auto pc = testing::PkiCases()[idx];
    SCOPED_TRACE(pc.name);
    TrustGraphSpec spec = testing::PkiSpec(pc.asserted);
    ForwardingNetwork s = BuildNetwork(spec);
    TrustLanguage lang(spec.graph.vertices, s);
    auto sys = TrustSystem(spec.graph.vertices);
    auto r = SaturateTrust(spec.asserted, s);
    for (const TrustEdge& e : testing::Edges(pc.dotted)) {
      VerifyReport rep = VerifyDerivation(lang, sys, *r.Find(e));
      EXPECT_TRUE(rep.ok()) << RenderTrustEdge(e);
    }
  }
}

bool HigherFirstOnly(const SaturationResult& r, const TrustEdge& e) {
  const TrustDerivation* d = r.Find(e);
  if (d->rule == TrustRule::kAsserted) return true;
  return d->rule == TrustRule::kHigherFirst && HigherFirstOnly(r, *d->left) &&
         HigherFirstOnly(r, *d->right);
}

// Edges derived through higher-first steps alone follow from the asserted
// edges' shared assumptions.
TEST(VerifyDerivation, HigherFirstSoundOnSmallInstances) {
  auto agents = Agents("abc");
  auto sys = TrustSystem(agents);
  std::mt19937_64 rng(31);
  int checked = 0;
  for (int i = 0; i < 200 && checked < 30; ++i) {
    DirectedGraph g = RandomGraph(rng, 3, 0.5, false);
    ForwardingNetwork s = ShortestPathsNetwork(g);
    std::set<TrustEdge> asserted;
    for (const auto& [u, v] : g.edges) {
      if (rng() % 3 == 0) continue;
      asserted.insert({static_cast<size_t>(rng() % 2), v, u, "P"});
    }
    TrustLanguage lang(agents, s);
    FlatContext ctx;
    for (const TrustEdge& e : asserted) {
      for (const Formula& f : lang.SharedAssumptions(e)) ctx.Add(f);
    }
    SaturationResult r = SaturateTrust(asserted, s);
    for (const TrustEdge& e : r.Derived()) {
      if (!HigherFirstOnly(r, e)) continue;
      ++checked;
      EXPECT_EQ(Decide(ctx.formulas(), lang.OrderTrust(e), sys), Verdict::kProved)
          << RenderTrustEdge(e);
      EXPECT_TRUE(VerifyDerivation(lang, sys, *r.Find(e)).ok()) << RenderTrustEdge(e);
    }
  }
  EXPECT_GT(checked, 5);
}

TEST(Threshold, TwoOfThree) {
  auto sys = TrustSystem(Agents("ab"));
  Formula x = F("x"), y = F("y"), z = F("z");
  EXPECT_EQ(TwoOfThree(x, y, z), F("x & y | x & z | y & z"));
  Formula cnf = F("(x | y) & (x | z) & (y | z)");
  EXPECT_TRUE(Interprovable(TwoOfThree(x, y, z), cnf, sys));
  EXPECT_TRUE(Proves({}, TwoOfThree(Formula::Top(), Formula::Top(), Formula::Bot()), sys));
  EXPECT_FALSE(Proves({}, TwoOfThree(Formula::Top(), Formula::Bot(), Formula::Bot()), sys));
}

TEST(Threshold, Lemma) {
  auto agents = Agents("abijk");
  auto sys = TrustSystem(agents);
  ForwardingNetwork s = CloseForwarding({P("aib"), P("ajb"), P("akb")});
  TrustLanguage L(agents, s);
  Agent a("a"), b("b");
  std::vector<Formula> trust, shared;
  for (const Agent& ca : Agents("ijk")) {
    ASSERT_TRUE(ReachableThrough(s, a, ca, b));
    trust.push_back(L.OrderTrust(1, a, ca, "P"));
    shared.push_back(Formula::Modal(Modality::Interact(a, ca), L.OrderValidity(0, ca, b, "P")));
  }
  Formula lhs = Formula::And(TwoOfThree(trust[0], trust[1], trust[2]),
                             TwoOfThree(shared[0], shared[1], shared[2]));
  EXPECT_TRUE(Proves({lhs}, L.OrderTrust(0, a, b, "P"), sys));
  // One trusted CA and one asserting CA is not enough in general.
  Formula weak = Formula::And(trust[0], shared[1]);
  ProverOptions o;
  o.budget = 0;
  EXPECT_EQ(Prove({weak}, L.OrderTrust(0, a, b, "P"), sys, o).verdict, Verdict::kNotProvable);
}

double RiskOracle(size_t k, const std::vector<double>& p) {
  double total = 0;
  size_t n = p.size();
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    double pr = 1;
    size_t ok = 0;
    for (size_t i = 0; i < n; ++i) {
      bool failed = mask >> i & 1;
      pr *= failed ? p[i] : 1 - p[i];
      ok += !failed;
    }
    if (ok < k) total += pr;
  }
  return total;
}

TEST(RiskAggregate, Examples) {
  EXPECT_NEAR(RiskAggregate(2, 3, {0.05, 0.05, 0.05}), 0.00725, 1e-12);
  EXPECT_DOUBLE_EQ(RiskAggregate(1, 1, {0.3}), 0.3);
  EXPECT_EQ(RiskAggregate(2, 3, {0, 0, 1}), 0.0);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 200; ++i) {
    double p = u(rng);
    EXPECT_NEAR(RiskAggregate(2, 3, {p, p, p}), 3 * p * p * (1 - p) + p * p * p, 1e-15);
    size_t n = 1 + rng() % 6, k = 1 + rng() % n;
    std::vector<double> ps;
    for (size_t j = 0; j < n; ++j) ps.push_back(u(rng));
    EXPECT_NEAR(RiskAggregate(k, n, ps), RiskOracle(k, ps), 1e-12);
  }
}

TEST(RiskAggregate, Errors) {
  EXPECT_THROW(RiskAggregate(2, 3, {0.1, 1.5, 0.1}), std::invalid_argument);
  EXPECT_THROW(RiskAggregate(2, 3, {0.1, -0.1, 0.1}), std::invalid_argument);
  EXPECT_THROW(RiskAggregate(4, 3, {0.1, 0.1, 0.1}), std::invalid_argument);
  EXPECT_THROW(RiskAggregate(0, 3, {0.1, 0.1, 0.1}), std::invalid_argument);
  EXPECT_THROW(RiskAggregate(2, 3, {0.1, 0.1}), std::invalid_argument);
  EXPECT_THROW(RiskAggregate(1, 1, {std::nan("")}), std::invalid_argument);
}

}  // namespace
}  // namespace trustlogic
