// Copyright 2026 The trustlogic Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "trustlogic/axioms.h"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace trustlogic {

std::string SerializeAxiom(const UnfoldingAxiom& ax) {
  return "axiom " + ax.head.ToString() + " => " + RenderModalityList(ax.unfolding);
}

UnfoldingAxiom ParseAxiom(const std::string& text) {
  std::string s = text;
  size_t start = s.find_first_not_of(" \t");
  if (start != std::string::npos && s.compare(start, 5, "axiom") == 0) {
    s = s.substr(start + 5);
  }
  size_t arrow = s.find("=>");
  if (arrow == std::string::npos) throw ParseError("expected '=>' in axiom", 0);
  UnfoldingAxiom ax{ParseModality(s.substr(0, arrow)), {}};
  std::string rest = s.substr(arrow + 2);
  size_t i = rest.find_first_not_of(" \t");
  if (i != std::string::npos && rest[i] == '.') {
    if (rest.find_first_not_of(" \t", i + 1) != std::string::npos) {
      throw ParseError("trailing input after '.'", arrow + 3 + i);
    }
    return ax;
  }
  while (i != std::string::npos) {
    if (rest[i] != '[') throw ParseError("expected '['", arrow + 2 + i);
    size_t close = rest.find(']', i);
    if (close == std::string::npos) throw ParseError("expected ']'", arrow + 2 + i);
    ax.unfolding.push_back(ParseModality(rest.substr(i, close - i + 1)));
    i = rest.find_first_not_of(" \t", close + 1);
  }
  if (ax.unfolding.empty()) throw ParseError("empty unfolding; write '.'", arrow + 2);
  return ax;
}

namespace {

// Words are packed nine bits per symbol (symbol index + 1), first symbol in
// the lowest bits.
using Word = uint64_t;
constexpr size_t kBits = 9;
constexpr Word kMask = (Word{1} << kBits) - 1;
constexpr size_t kMaxLen = 64 / kBits;
constexpr size_t kMaxSymbols = kMask;

size_t WordLen(Word w) {
  size_t n = 0;
  while (w != 0) {
    ++n;
    w >>= kBits;
  }
  return n;
}

Word Concat(Word u, Word v) { return u | (v << (kBits * WordLen(u))); }

Word Single(size_t sym) { return static_cast<Word>(sym + 1); }

std::vector<uint16_t> Unpack(Word w) {
  std::vector<uint16_t> out;
  while (w != 0) {
    out.push_back(static_cast<uint16_t>((w & kMask) - 1));
    w >>= kBits;
  }
  return out;
}

struct IndexedGenerator {
  size_t head;
  std::vector<size_t> body;
};

// Bounded derivable languages by semi-naive saturation.
class Languages {
 public:
  Languages(size_t k, const std::vector<IndexedGenerator>& gens, size_t bound)
      : bound_(bound), sets_(k), by_len_(k, std::vector<std::vector<Word>>(bound + 1)),
        unary_(k), first_(k), second_(k) {
    for (const auto& g : gens) {
      if (g.body.size() == 1) {
        unary_[g.body[0]].push_back(g.head);
      } else if (g.body.size() == 2) {
        first_[g.body[0]].push_back({g.head, g.body[1]});
        second_[g.body[1]].push_back({g.head, g.body[0]});
      }
    }
    for (size_t m = 0; m < k; ++m) Add(m, Single(m));
    for (const auto& g : gens) {
      if (g.body.empty()) Add(g.head, 0);
    }
    while (!queue_.empty()) {
      auto [x, w] = queue_.back();
      queue_.pop_back();
      Process(x, w);
    }
  }

  const std::unordered_set<Word>& Of(size_t m) const { return sets_[m]; }
  bool Has(size_t m, Word w) const { return sets_[m].count(w) > 0; }

 private:
  void Add(size_t m, Word w) {
    if (sets_[m].insert(w).second) {
      by_len_[m][WordLen(w)].push_back(w);
      queue_.push_back({m, w});
    }
  }

  void Process(size_t x, Word w) {
    const size_t lw = WordLen(w);
    for (size_t m : unary_[x]) Add(m, w);
    for (const auto& [m, y] : first_[x]) {
      for (size_t len = 0; len + lw <= bound_; ++len) {
        const auto& bucket = by_len_[y][len];
        for (size_t i = 0; i < bucket.size(); ++i) Add(m, Concat(w, bucket[i]));
      }
    }
    for (const auto& [m, z] : second_[x]) {
      for (size_t len = 0; len + lw <= bound_; ++len) {
        const auto& bucket = by_len_[z][len];
        for (size_t i = 0; i < bucket.size(); ++i) Add(m, Concat(bucket[i], w));
      }
    }
  }

  size_t bound_;
  std::vector<std::unordered_set<Word>> sets_;
  std::vector<std::vector<std::vector<Word>>> by_len_;
  std::vector<std::vector<size_t>> unary_;
  std::vector<std::vector<std::pair<size_t, size_t>>> first_;
  std::vector<std::vector<std::pair<size_t, size_t>>> second_;
  std::vector<std::pair<size_t, Word>> queue_;
};

std::vector<IndexedGenerator> IndexGenerators(const CompiledAxiomSystem& sys) {
  std::vector<IndexedGenerator> out;
  for (const auto& g : sys.generators()) {
    IndexedGenerator ig{*sys.IndexOf(g.head), {}};
    for (const auto& n : g.unfolding) ig.body.push_back(*sys.IndexOf(n));
    out.push_back(std::move(ig));
  }
  return out;
}

}  // namespace

CompiledAxiomSystem CompiledAxiomSystem::Compile(std::vector<Modality> modalities,
                                                 std::vector<UnfoldingAxiom> generators) {
  CompiledAxiomSystem sys;
  std::set<Modality> seen;
  for (const auto& m : modalities) {
    if (seen.insert(m).second) sys.modalities_.push_back(m);
  }
  if (sys.modalities_.size() > kMaxSymbols) {
    throw std::invalid_argument("too many modalities for the compiled table");
  }
  for (const auto& g : generators) {
    if (g.unfolding.size() > 2) {
      throw std::invalid_argument("generator " + SerializeAxiom(g) +
                                  " unfolds to more than two modalities");
    }
    if (!sys.IndexOf(g.head)) {
      throw std::invalid_argument("unknown modality " + g.head.ToString());
    }
    for (const auto& n : g.unfolding) {
      if (!sys.IndexOf(n)) throw std::invalid_argument("unknown modality " + n.ToString());
    }
  }
  sys.generators_ = std::move(generators);
  const size_t k = sys.modalities_.size();
  Languages lang(k, IndexGenerators(sys), 2);
  sys.unit_.assign(k * k, false);
  sys.split_.assign(k * k, kUndefined);
  sys.pair_.assign(k * k * k, false);
  sys.eps_.assign(k, false);
  for (size_t m = 0; m < k; ++m) {
    sys.eps_[m] = lang.Has(m, 0);
    for (size_t n = 0; n < k; ++n) {
      sys.unit_[m * k + n] = lang.Has(m, Single(n));
      std::vector<size_t> candidates;
      for (size_t r = 0; r < k; ++r) {
        if (lang.Has(m, Concat(Single(n), Single(r)))) {
          sys.pair_[(m * k + n) * k + r] = true;
          candidates.push_back(r);
        }
      }
      if (candidates.empty()) continue;
      int chosen = static_cast<int>(candidates[0]);
      for (size_t r : candidates) {
        bool greatest = true;
        for (size_t t : candidates) {
          if (!lang.Has(r, Single(t))) {
            greatest = false;
            break;
          }
        }
        if (greatest) {
          chosen = static_cast<int>(r);
          break;
        }
      }
      sys.split_[m * k + n] = chosen;
    }
  }
  return sys;
}

std::optional<size_t> CompiledAxiomSystem::IndexOf(const Modality& m) const {
  for (size_t i = 0; i < modalities_.size(); ++i) {
    if (modalities_[i] == m) return i;
  }
  return std::nullopt;
}

bool CompiledAxiomSystem::Unit(const Modality& m, const Modality& n) const {
  auto im = IndexOf(m);
  auto in = IndexOf(n);
  if (!im || !in) return m == n;
  return UnitAt(*im, *in);
}

std::optional<Modality> CompiledAxiomSystem::Split(const Modality& m,
                                                   const Modality& n) const {
  auto im = IndexOf(m);
  auto in = IndexOf(n);
  if (!im || !in) return std::nullopt;
  int r = SplitAt(*im, *in);
  if (r == kUndefined) return std::nullopt;
  return modalities_[r];
}

bool CompiledAxiomSystem::Eps(const Modality& m) const {
  auto im = IndexOf(m);
  return im && EpsAt(*im);
}

bool CompiledAxiomSystem::HasEps() const {
  return std::find(eps_.begin(), eps_.end(), true) != eps_.end();
}

bool CompiledAxiomSystem::Unfolds(const Modality& m, const ModalityList& l) const {
  if (l.empty()) return Eps(m);
  if (l.size() == 1) return Unit(m, l[0]);
  auto r = Split(m, l[0]);
  if (!r) return false;
  return Unfolds(*r, ModalityList(l.begin() + 1, l.end()));
}

void CompiledAxiomSystem::SetSplit(const Modality& m, const Modality& n,
                                   const Modality& r) {
  auto im = IndexOf(m);
  auto in = IndexOf(n);
  auto ir = IndexOf(r);
  const size_t k = size();
  if (!im || !in || !ir || !pair_[(*im * k + *in) * k + *ir]) {
    throw std::invalid_argument(m.ToString() + " => " + n.ToString() + r.ToString() +
                                " is not derivable");
  }
  split_[*im * k + *in] = static_cast<int>(*ir);
}

std::vector<Modality> StandardModalities(const AgentUniverse& universe,
                                         bool include_box) {
  std::vector<Modality> out;
  for (const Agent& a : universe.agents()) out.push_back(Modality::Belief(a));
  for (const Agent& a : universe.agents()) {
    for (const Agent& b : universe.agents()) out.push_back(Modality::Interact(a, b));
  }
  for (const Agent& a : universe.agents()) out.push_back(Modality::Wish(a));
  if (include_box) out.push_back(Modality::Box());
  return out;
}

CompiledAxiomSystem Compile(const std::vector<UnfoldingAxiom>& generators,
                            const AgentUniverse& universe) {
  std::vector<Modality> mods = StandardModalities(universe, false);
  auto note = [&](const Modality& m) {
    for (const Agent& a : m.Agents()) {
      if (!universe.Contains(a)) {
        throw std::invalid_argument("unknown agent '" + a.id + "' in " + m.ToString());
      }
    }
    if (std::find(mods.begin(), mods.end(), m) == mods.end()) mods.push_back(m);
  };
  for (const auto& g : generators) {
    note(g.head);
    for (const auto& n : g.unfolding) note(n);
  }
  return CompiledAxiomSystem::Compile(std::move(mods), generators);
}

std::vector<UnfoldingAxiom> StandardGenerators(const AgentUniverse& universe,
                                               bool include_box) {
  std::vector<UnfoldingAxiom> g;
  const auto& agents = universe.agents();
  auto B = [](const Agent& a) { return Modality::Belief(a); };
  auto I = [](const Agent& a, const Agent& b) { return Modality::Interact(a, b); };
  for (const Agent& a : agents) g.push_back({B(a), {B(a), B(a)}});
  for (const Agent& a : agents) {
    for (const Agent& b : agents) {
      g.push_back({I(a, b), {B(a), I(a, b)}});
      g.push_back({I(a, b), {I(a, b), B(b)}});
    }
  }
  for (const Agent& a : agents) {
    for (const Agent& b : agents) {
      if (a == b || !universe.Leq(a, b)) continue;
      g.push_back({B(a), {B(b)}});
      for (const Agent& c : agents) {
        g.push_back({I(a, c), {I(b, c)}});
        g.push_back({I(c, a), {I(c, b)}});
      }
    }
  }
  if (include_box) {
    for (const Modality& m : StandardModalities(universe, true)) {
      g.push_back({Modality::Box(), {m, Modality::Box()}});
    }
    g.push_back({Modality::Box(), {}});
  }
  return g;
}

CompiledAxiomSystem StandardSystem(const AgentUniverse& universe, bool include_box) {
  CompiledAxiomSystem sys = CompiledAxiomSystem::Compile(
      StandardModalities(universe, include_box),
      StandardGenerators(universe, include_box));
  const auto& agents = universe.agents();
  for (const Agent& a : agents) {
    for (const Agent& b : agents) {
      if (universe.Leq(a, b)) {
        sys.SetSplit(Modality::Belief(a), Modality::Belief(b), Modality::Belief(a));
      }
    }
  }
  for (const Agent& a : agents) {
    for (const Agent& b : agents) {
      const Modality iab = Modality::Interact(a, b);
      for (const Agent& c : agents) {
        if (!universe.Leq(a, c)) continue;
        sys.SetSplit(iab, Modality::Belief(c), iab);
        for (const Agent& d : agents) {
          if (universe.Leq(b, d)) {
            sys.SetSplit(iab, Modality::Interact(c, d), Modality::Belief(b));
          }
        }
      }
    }
  }
  if (include_box) {
    for (const Modality& m : sys.modalities()) {
      sys.SetSplit(Modality::Box(), m, Modality::Box());
    }
  }
  return sys;
}

std::vector<std::vector<std::vector<uint16_t>>> DerivableWords(
    const CompiledAxiomSystem& sys, size_t bound) {
  if (bound > kMaxLen) throw std::invalid_argument("word bound too large");
  Languages lang(sys.size(), IndexGenerators(sys), bound);
  std::vector<std::vector<std::vector<uint16_t>>> out(sys.size());
  for (size_t m = 0; m < sys.size(); ++m) {
    std::vector<Word> words(lang.Of(m).begin(), lang.Of(m).end());
    std::sort(words.begin(), words.end());
    for (Word w : words) out[m].push_back(Unpack(w));
    std::sort(out[m].begin(), out[m].end());
  }
  return out;
}

DecomposabilityReport CheckDecomposable(const CompiledAxiomSystem& sys, size_t bound) {
  if (bound < 3) throw std::invalid_argument("decomposability bound must be at least 3");
  if (bound > kMaxLen) throw std::invalid_argument("decomposability bound too large");
  DecomposabilityReport report;
  report.bound = bound;
  Languages lang(sys.size(), IndexGenerators(sys), bound);
  auto record = [&](size_t m, Word w, std::string reason) {
    ++report.violation_count;
    if (report.violations.size() < 64) {
      ModalityList l;
      for (uint16_t s : Unpack(w)) l.push_back(sys.modalities()[s]);
      report.violations.push_back({sys.modalities()[m], std::move(l), std::move(reason)});
    }
  };
  for (size_t m = 0; m < sys.size(); ++m) {
    std::vector<Word> words(lang.Of(m).begin(), lang.Of(m).end());
    std::sort(words.begin(), words.end());
    for (Word w : words) {
      if (WordLen(w) < 2) continue;
      ++report.unfoldings_checked;
      const size_t n = static_cast<size_t>((w & kMask) - 1);
      const Word tail = w >> kBits;
      const int r = sys.SplitAt(m, n);
      if (r == CompiledAxiomSystem::kUndefined) {
        record(m, w, "split(" + sys.modalities()[m].ToString() + ", " +
                         sys.modalities()[n].ToString() + ") undefined");
        continue;
      }
      if (!lang.Has(m, Concat(Single(n), Single(static_cast<size_t>(r))))) {
        record(m, w, "split witness " + sys.modalities()[r].ToString() + " not derivable");
        continue;
      }
      if (!lang.Has(static_cast<size_t>(r), tail)) {
        record(m, w, "witness " + sys.modalities()[r].ToString() +
                         " does not reach the tail");
      }
    }
  }
  return report;
}

}  // namespace trustlogic
