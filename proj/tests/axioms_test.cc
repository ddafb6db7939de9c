// Copyright 2026 The trustlogic Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <gtest/gtest.h>

#include <random>

#include "test_support.h"
#include "trustlogic/axioms.h"

namespace trustlogic {
namespace {

using testing::A;
using testing::Bm;
using testing::Im;
using testing::RewriteClosure;

const Modality kBox = Modality::Box();

// Unit/eps/pair facts read off the rewriting oracle.
struct OracleTables {
  std::set<std::pair<Modality, Modality>> unit;
  std::set<std::tuple<Modality, Modality, Modality>> pair;
  std::set<Modality> eps;
};

OracleTables Oracle(const std::vector<Modality>& mods,
                    const std::vector<UnfoldingAxiom>& gens) {
  OracleTables t;
  for (const auto& m : mods) {
    for (const auto& w : RewriteClosure(gens, m, 2, 5)) {
      if (w.empty()) t.eps.insert(m);
      if (w.size() == 1) t.unit.insert({m, w[0]});
      if (w.size() == 2) t.pair.insert({m, w[0], w[1]});
    }
  }
  return t;
}

void ExpectMatchesOracle(const CompiledAxiomSystem& sys) {
  OracleTables t = Oracle(sys.modalities(), sys.generators());
  for (const auto& m : sys.modalities()) {
    EXPECT_EQ(sys.Eps(m), t.eps.count(m) > 0) << m.ToString();
    for (const auto& n : sys.modalities()) {
      EXPECT_EQ(sys.Unit(m, n), t.unit.count({m, n}) > 0)
          << m.ToString() << " " << n.ToString();
      auto r = sys.Split(m, n);
      if (r) EXPECT_TRUE(t.pair.count({m, n, *r})) << m.ToString() << n.ToString();
    }
  }
}

TEST(Compile, SelfAwarenessOnly) {
  auto sys = CompiledAxiomSystem::Compile({Bm("a")}, {{Bm("a"), {Bm("a"), Bm("a")}}});
  EXPECT_TRUE(sys.Unit(Bm("a"), Bm("a")));
  EXPECT_EQ(sys.Split(Bm("a"), Bm("a")), Bm("a"));
  EXPECT_FALSE(sys.HasEps());
  ExpectMatchesOracle(sys);
}

TEST(Compile, BoxEpsComposition) {
  std::vector<UnfoldingAxiom> gens = {
      {kBox, {kBox, kBox}}, {kBox, {Bm("a"), kBox}}, {kBox, {}}};
  auto sys = CompiledAxiomSystem::Compile({kBox, Bm("a")}, gens);
  EXPECT_TRUE(sys.Unit(kBox, Bm("a")));
  EXPECT_TRUE(sys.Unit(kBox, kBox));
  EXPECT_EQ(sys.Split(kBox, Bm("a")), kBox);
  EXPECT_TRUE(sys.Eps(kBox));
  EXPECT_FALSE(sys.Eps(Bm("a")));
  ExpectMatchesOracle(sys);
}

TEST(Compile, EmptyGenerators) {
  std::vector<Modality> mods = {Bm("a"), Bm("b"), Im("a", "b")};
  auto sys = CompiledAxiomSystem::Compile(mods, {});
  for (const auto& m : mods) {
    for (const auto& n : mods) {
      EXPECT_EQ(sys.Unit(m, n), m == n);
      EXPECT_FALSE(sys.Split(m, n));
    }
    EXPECT_FALSE(sys.Eps(m));
  }
}

TEST(Compile, Errors) {
  EXPECT_THROW(CompiledAxiomSystem::Compile({Bm("a")}, {{Bm("a"), {Bm("a"), Bm("a"), Bm("a")}}}),
               std::invalid_argument);
  EXPECT_THROW(CompiledAxiomSystem::Compile({Bm("a")}, {{Bm("a"), {Bm("b")}}}),
               std::invalid_argument);
  AgentUniverse u = AgentUniverse::Discrete({"a"});
  EXPECT_THROW(Compile({{Bm("a"), {Bm("z")}}}, u), std::invalid_argument);
}

TEST(Compile, RandomSystemsMatchOracle) {
  std::mt19937_64 rng(5);
  std::vector<Modality> mods = {Modality::Named("M"), Modality::Named("N"),
                                Modality::Named("R"), Modality::Named("T")};
  for (int iter = 0; iter < 150; ++iter) {
    std::vector<UnfoldingAxiom> gens;
    int count = 1 + rng() % 5;
    for (int i = 0; i < count; ++i) {
      UnfoldingAxiom g{mods[rng() % 4], {}};
      int len = rng() % 6 == 0 ? 0 : 1 + rng() % 2;
      for (int j = 0; j < len; ++j) g.unfolding.push_back(mods[rng() % 4]);
      gens.push_back(g);
    }
    auto sys = CompiledAxiomSystem::Compile(mods, gens);
    ExpectMatchesOracle(sys);
    // Idempotence.
    auto again = CompiledAxiomSystem::Compile(sys.modalities(), sys.generators());
    for (const auto& m : mods) {
      EXPECT_EQ(sys.Eps(m), again.Eps(m));
      for (const auto& n : mods) {
        EXPECT_EQ(sys.Unit(m, n), again.Unit(m, n));
        EXPECT_EQ(sys.Split(m, n), again.Split(m, n));
      }
    }
  }
}

TEST(Compile, LongWordsMatchOracle) {
  AgentUniverse u = AgentUniverse::FromGenerators({A("a"), A("b")}, {{A("a"), A("b")}});
  auto sys = StandardSystem(u, false);
  auto words = DerivableWords(sys, 4);
  for (size_t m = 0; m < sys.size(); ++m) {
    std::set<ModalityList> got;
    for (const auto& w : words[m]) {
      ModalityList l;
      for (auto i : w) l.push_back(sys.modalities()[i]);
      got.insert(l);
    }
    auto want = RewriteClosure(sys.generators(), sys.modalities()[m], 4, 4);
    EXPECT_EQ(got, want) << sys.modalities()[m].ToString();
  }
}

TEST(StandardSystem, SplitExamples) {
  AgentUniverse u = AgentUniverse::Discrete({"a", "b"});
  auto sys = StandardSystem(u);
  EXPECT_EQ(sys.Split(Im("a", "b"), Im("a", "b")), Bm("b"));
  EXPECT_EQ(sys.Split(Bm("a"), Bm("a")), Bm("a"));
  EXPECT_EQ(sys.Split(Im("a", "b"), Bm("a")), Im("a", "b"));
  EXPECT_FALSE(sys.Unit(Bm("a"), Im("a", "b")));
  EXPECT_FALSE(sys.Unit(Bm("a"), Bm("b")));
}

TEST(StandardSystem, Inheritance) {
  auto u = AgentUniverse::FromGenerators({A("a"), A("b"), A("c")}, {{A("a"), A("b")}});
  auto sys = StandardSystem(u);
  EXPECT_TRUE(sys.Unit(Bm("a"), Bm("b")));
  EXPECT_FALSE(sys.Unit(Bm("b"), Bm("a")));
  EXPECT_TRUE(sys.Unit(Im("a", "a"), Im("b", "b")));
  EXPECT_TRUE(sys.Unit(Im("c", "a"), Im("c", "b")));
  EXPECT_EQ(sys.Split(Bm("a"), Bm("b")), Bm("a"));
  EXPECT_EQ(sys.Split(Im("a", "c"), Im("b", "c")), Bm("c"));
  ExpectMatchesOracle(sys);
}

TEST(Unfolds, Examples) {
  AgentUniverse u = AgentUniverse::Discrete({"a", "b"});
  auto sys = StandardSystem(u);
  EXPECT_TRUE(sys.Unfolds(Im("a", "b"), {Bm("a"), Im("a", "b"), Bm("b")}));
  EXPECT_TRUE(sys.Unfolds(Bm("a"), {Bm("a")}));
  EXPECT_FALSE(sys.Unfolds(Bm("a"), {Im("a", "b")}));
  EXPECT_FALSE(sys.Unfolds(Bm("a"), {}));
  // Unlisted modalities act as plain K.
  EXPECT_TRUE(sys.Unfolds(Modality::Named("X"), {Modality::Named("X")}));
  EXPECT_FALSE(sys.Unfolds(Modality::Named("X"), {Modality::Named("X"), Modality::Named("X")}));
}

TEST(Unfolds, AgreesWithOracle) {
  auto u = AgentUniverse::FromGenerators({A("a"), A("b")}, {{A("a"), A("b")}});
  for (bool box : {false, true}) {
    auto sys = StandardSystem(u, box);
    for (const auto& m : sys.modalities()) {
      auto want = RewriteClosure(sys.generators(), m, 3, box ? 5 : 3);
      std::vector<ModalityList> all = {{}};
      for (int len = 1; len <= 3; ++len) {
        std::vector<ModalityList> next;
        for (const auto& w : all) {
          if (w.size() != static_cast<size_t>(len - 1)) continue;
          for (const auto& n : sys.modalities()) {
            ModalityList v = w;
            v.push_back(n);
            next.push_back(v);
          }
        }
        all.insert(all.end(), next.begin(), next.end());
      }
      for (const auto& w : all) {
        ASSERT_EQ(sys.Unfolds(m, w), want.count(w) > 0)
            << m.ToString() << " => " << RenderModalityList(w) << " box=" << box;
      }
    }
  }
}

TEST(Split, Soundness) {
  auto u = AgentUniverse::FromGenerators({A("a"), A("b"), A("c")}, {{A("a"), A("b")}});
  for (bool box : {false, true}) {
    auto sys = StandardSystem(u, box);
    for (const auto& m : sys.modalities()) {
      for (const auto& n : sys.modalities()) {
        if (auto r = sys.Split(m, n)) EXPECT_TRUE(sys.Unfolds(m, {n, *r}));
      }
    }
  }
}

TEST(SetSplit, RejectsUnderivable) {
  auto sys = StandardSystem(AgentUniverse::Discrete({"a", "b"}));
  EXPECT_THROW(sys.SetSplit(Bm("a"), Bm("b"), Bm("a")), std::invalid_argument);
}

TEST(CheckDecomposable, StandardThreeAgents) {
  auto sys = StandardSystem(AgentUniverse::Discrete({"a", "b", "c"}));
  auto rep = CheckDecomposable(sys, 4);
  EXPECT_TRUE(rep.ok()) << rep.violation_count;
  EXPECT_GT(rep.unfoldings_checked, 0u);
}

TEST(CheckDecomposable, ReportsBadSplit) {
  Modality M = Modality::Named("M"), N = Modality::Named("N"), R = Modality::Named("R"),
           T = Modality::Named("T");
  auto sys = CompiledAxiomSystem::Compile({M, N, R, T}, {{M, {N, R}}, {M, {N, T}}});
  sys.SetSplit(M, N, R);
  auto rep = CheckDecomposable(sys, 4);
  ASSERT_FALSE(rep.ok());
  bool found = false;
  for (const auto& v : rep.violations) {
    if (v.head == M && v.unfolding == ModalityList{N, T}) found = true;
  }
  EXPECT_TRUE(found);
}

TEST(CheckDecomposable, EmptySystemAndBounds) {
  auto sys = CompiledAxiomSystem::Compile({Bm("a")}, {});
  EXPECT_TRUE(CheckDecomposable(sys, 4).ok());
  EXPECT_THROW(CheckDecomposable(sys, 2), std::invalid_argument);
}

TEST(CheckDecomposable, ExhaustiveSmallUniverses) {
  std::vector<std::string> ids = {"a", "b", "c", "d"};
  for (size_t n = 1; n <= 4; ++n) {
    auto orders = n <= 3 ? testing::AllPreorders(n) : testing::PreordersUpToIso(n);
    std::vector<std::string> sub(ids.begin(), ids.begin() + n);
    for (const auto& m : orders) {
      auto sys = StandardSystem(testing::UniverseFromMatrix(sub, m));
      for (size_t bound : {4u, 5u}) {
        auto rep = CheckDecomposable(sys, bound);
        ASSERT_TRUE(rep.ok()) << "n=" << n << " bound=" << bound << " "
                              << rep.violations[0].head.ToString() << " => "
                              << RenderModalityList(rep.violations[0].unfolding);
      }
    }
  }
}

TEST(CheckDecomposable, WithBox) {
  auto u = AgentUniverse::FromGenerators({A("a"), A("b")}, {{A("a"), A("b")}});
  EXPECT_TRUE(CheckDecomposable(StandardSystem(u, true), 4).ok());
  EXPECT_TRUE(CheckDecomposable(StandardSystem(AgentUniverse::Discrete({"a", "b", "c"}), true), 4).ok());
}

// Bottom/top agents alongside box.
TEST(CheckDecomposable, ExtremalAgentsWithBox) {
  auto u = AgentUniverse::FromGenerators(
      {A("o"), A("a"), A("y")}, {{A("o"), A("a")}, {A("a"), A("y")}}, A("o"), A("y"));
  auto rep = CheckDecomposable(StandardSystem(u, true), 4);
  EXPECT_TRUE(rep.ok()) << rep.violation_count;
}

TEST(Monotonicity, LargerPreorderKeepsUnits) {
  auto orders = testing::AllPreorders(3);
  std::vector<std::string> ids = {"a", "b", "c"};
  for (const auto& small : orders) {
    for (const auto& big : orders) {
      bool contained = true;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          if (small[i][j] && !big[i][j]) contained = false;
      if (!contained) continue;
      auto s1 = StandardSystem(testing::UniverseFromMatrix(ids, small));
      auto s2 = StandardSystem(testing::UniverseFromMatrix(ids, big));
      for (const auto& m : s1.modalities())
        for (const auto& n : s1.modalities())
          if (s1.Unit(m, n)) ASSERT_TRUE(s2.Unit(m, n));
    }
  }
}

TEST(AxiomText, RoundTrip) {
  UnfoldingAxiom ax{Im("a", "b"), {Bm("a"), Im("a", "b")}};
  EXPECT_EQ(SerializeAxiom(ax), "axiom [I a <- b] => [B a][I a <- b]");
  EXPECT_EQ(ParseAxiom(SerializeAxiom(ax)), ax);
  UnfoldingAxiom eps{kBox, {}};
  EXPECT_EQ(SerializeAxiom(eps), "axiom [box] => .");
  EXPECT_EQ(ParseAxiom("[box] => ."), eps);
  EXPECT_THROW(ParseAxiom("[box] =>"), ParseError);
}

}  // namespace
}  // namespace trustlogic
