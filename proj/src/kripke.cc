// Copyright 2026 The trustlogic Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "trustlogic/kripke.h"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace trustlogic {

namespace {

WorldSet Bit(size_t i) { return WorldSet{1} << i; }

template <typename Fn>
void ForEach(WorldSet s, Fn fn) {
  while (s) {
    size_t i = std::countr_zero(s);
    fn(i);
    s &= s - 1;
  }
}

}  // namespace

KripkeFrame::KripkeFrame(std::vector<std::string> world_names) : names_(std::move(world_names)) {
  if (names_.size() > kMaxWorlds) throw std::invalid_argument("too many worlds");
  std::set<std::string> seen(names_.begin(), names_.end());
  if (seen.size() != names_.size()) throw std::invalid_argument("duplicate world name");
  up_.resize(names_.size());
  for (size_t i = 0; i < names_.size(); ++i) up_[i] = Bit(i);
}

std::optional<size_t> KripkeFrame::IndexOf(const std::string& world) const {
  auto it = std::find(names_.begin(), names_.end(), world);
  if (it == names_.end()) return std::nullopt;
  return static_cast<size_t>(it - names_.begin());
}

void KripkeFrame::SetLeq(size_t v, size_t w, bool on) {
  if (on) {
    up_.at(v) |= Bit(w);
  } else {
    up_.at(v) &= ~Bit(w);
  }
}

WorldSet KripkeFrame::Valuation(const std::string& token) const {
  auto it = val_.find(token);
  return it == val_.end() ? 0 : it->second;
}

void KripkeFrame::SetValuation(const std::string& token, WorldSet s) { val_[token] = s & All(); }

WorldSet KripkeFrame::Successors(const Modality& m, size_t v) const {
  auto it = rel_.find(m);
  return it == rel_.end() ? 0 : it->second[v];
}

void KripkeFrame::AddEdge(const Modality& m, size_t v, size_t w) {
  auto& rows = rel_[m];
  if (rows.empty()) rows.assign(size(), 0);
  rows.at(v) |= Bit(w);
}

void KripkeFrame::SetRelation(const Modality& m, std::vector<WorldSet> rows) {
  if (rows.size() != size()) throw std::invalid_argument("relation needs one row per world");
  for (auto& r : rows) r &= All();
  rel_[m] = std::move(rows);
}

WorldSet KripkeFrame::All() const {
  return size() == 64 ? ~WorldSet{0} : Bit(size()) - 1;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<WorldSet> Down(const KripkeFrame& f) {
  std::vector<WorldSet> down(f.size(), 0);
  for (size_t v = 0; v < f.size(); ++v) ForEach(f.Up(v), [&](size_t w) { down[w] |= Bit(v); });
  return down;
}

WorldSet Image(const KripkeFrame& f, const Modality& m, WorldSet s) {
  WorldSet out = 0;
  ForEach(s, [&](size_t u) { out |= f.Successors(m, u); });
  return out;
}

}  // namespace

bool CheckFrameConditions(const KripkeFrame& f, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const auto& n = f.names();
  for (size_t v = 0; v < f.size(); ++v) {
    if (!f.Leq(v, v)) return fail("order not reflexive at " + n[v]);
    for (size_t w = 0; w < f.size(); ++w) {
      if (f.Leq(v, w) && (f.Up(w) & ~f.Up(v))) {
        return fail("order not transitive through " + n[v] + " <= " + n[w]);
      }
    }
  }
  for (const auto& [tok, s] : f.valuations()) {
    for (size_t v = 0; v < f.size(); ++v) {
      if ((s & Bit(v)) && (f.Up(v) & ~s)) return fail("valuation of " + tok + " not persistent at " + n[v]);
    }
  }
  std::vector<WorldSet> down = Down(f);
  for (const auto& [m, rows] : f.relations()) {
    for (size_t v = 0; v < f.size(); ++v) {
      for (size_t w = 0; w < f.size(); ++w) {
        if (!f.Leq(v, w)) continue;
        for (size_t w2 = 0; w2 < f.size(); ++w2) {
          if ((rows[w] & Bit(w2)) && !(rows[v] & down[w2])) {
            return fail("back condition fails for " + m.ToString() + ": " + n[v] + " <= " + n[w] +
                        ", " + n[w] + " R " + n[w2]);
          }
        }
      }
    }
  }
  return true;
}

bool Conforms(const KripkeFrame& f, const CompiledAxiomSystem& sys, std::string* why) {
  for (const UnfoldingAxiom& g : sys.generators()) {
    for (size_t v = 0; v < f.size(); ++v) {
      WorldSet s = Bit(v);
      for (const Modality& n : g.unfolding) s = Image(f, n, s);
      WorldSet target = f.Successors(g.head, v);
      if (s & ~target) {
        if (why) *why = SerializeAxiom(g) + " violated at " + f.names()[v];
        return false;
      }
    }
  }
  return true;
}

void CloseFrame(KripkeFrame& f, const CompiledAxiomSystem& sys) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const UnfoldingAxiom& g : sys.generators()) {
      for (size_t v = 0; v < f.size(); ++v) {
        WorldSet s = Bit(v);
        for (const Modality& n : g.unfolding) s = Image(f, n, s);
        WorldSet missing = s & ~f.Successors(g.head, v);
        ForEach(missing, [&](size_t w) { f.AddEdge(g.head, v, w); });
        changed |= missing != 0;
      }
    }
    std::vector<WorldSet> down = Down(f);
    std::vector<Modality> mods;
    for (const auto& [m, rows] : f.relations()) mods.push_back(m);
    for (const Modality& m : mods) {
      for (size_t v = 0; v < f.size(); ++v) {
        ForEach(f.Up(v), [&](size_t w) {
          ForEach(f.Successors(m, w), [&](size_t w2) {
            if (!(f.Successors(m, v) & down[w2])) {
              f.AddEdge(m, v, w2);
              changed = true;
            }
          });
        });
      }
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

class Evaluator {
 public:
  explicit Evaluator(const KripkeFrame& f) : f_(f) {}

  WorldSet Sat(const Formula& a) {
    auto it = memo_.find(a);
    if (it != memo_.end()) return it->second;
    WorldSet out = 0;
    switch (a.kind()) {
      case Formula::Kind::kTop:
        out = f_.All();
        break;
      case Formula::Kind::kBot:
        out = 0;
        break;
      case Formula::Kind::kToken:
        out = f_.Valuation(a.token());
        break;
      case Formula::Kind::kModal: {
        WorldSet b = Sat(a.body());
        for (size_t v = 0; v < f_.size(); ++v) {
          if (!(f_.Successors(a.modality(), v) & ~b)) out |= Bit(v);
        }
        break;
      }
      case Formula::Kind::kImp: {
        WorldSet l = Sat(a.lhs());
        WorldSet r = Sat(a.rhs());
        for (size_t v = 0; v < f_.size(); ++v) {
          if (!(f_.Up(v) & l & ~r)) out |= Bit(v);
        }
        break;
      }
      case Formula::Kind::kAnd:
        out = Sat(a.lhs()) & Sat(a.rhs());
        break;
      case Formula::Kind::kOr:
        out = Sat(a.lhs()) | Sat(a.rhs());
        break;
    }
    memo_.emplace(a, out);
    return out;
  }

 private:
  const KripkeFrame& f_;
  std::unordered_map<Formula, WorldSet> memo_;
};

}  // namespace

WorldSet SatisfyingWorlds(const KripkeFrame& f, const Formula& a) { return Evaluator(f).Sat(a); }

bool Satisfies(const KripkeFrame& f, size_t world, const Formula& a) {
  return (SatisfyingWorlds(f, a) >> world) & 1;
}

WorldSet RefutingWorlds(const KripkeFrame& f, const FlatContext& ctx, const Formula& goal) {
  Evaluator ev(f);
  WorldSet s = f.All();
  for (const Formula& c : ctx.formulas()) s &= ev.Sat(c);
  return s & ~ev.Sat(goal);
}

bool FrameValidates(const KripkeFrame& f, const FlatContext& ctx, const Formula& goal) {
  return RefutingWorlds(f, ctx, goal) == 0;
}

KripkeFrame LemmaCounterFrame(const Modality& m) {
  KripkeFrame f({"v", "w"});
  f.SetValuation("t", 0);
  f.SetValuation("r", Bit(1));
  f.SetRelation(m, {Bit(1), 0});
  return f;
}

// ---------------------------------------------------------------------------
// Countermodel search.

std::string CountermodelStatusName(CountermodelResult::Status s) {
  switch (s) {
    case CountermodelResult::Status::kFound:
      return "Found";
    case CountermodelResult::Status::kNotFound:
      return "NotFound";
    case CountermodelResult::Status::kUndetermined:
      return "Undetermined";
  }
  return "?";
}

namespace {

// Preorders on k worlds as up-set rows, one per isomorphism class.
std::vector<std::vector<WorldSet>> Preorders(size_t k) {
  std::vector<std::pair<size_t, size_t>> off;
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) {
      if (i != j) off.push_back({i, j});
    }
  }
  std::vector<size_t> perm(k);
  std::set<std::vector<WorldSet>> seen;
  std::vector<std::vector<WorldSet>> out;
  for (uint64_t mask = 0; mask < (uint64_t{1} << off.size()); ++mask) {
    std::vector<WorldSet> up(k);
    for (size_t i = 0; i < k; ++i) up[i] = Bit(i);
    for (size_t b = 0; b < off.size(); ++b) {
      if (mask >> b & 1) up[off[b].first] |= Bit(off[b].second);
    }
    bool trans = true;
    for (size_t i = 0; i < k && trans; ++i) {
      ForEach(up[i], [&](size_t j) { trans &= (up[j] & ~up[i]) == 0; });
    }
    if (!trans) continue;
    std::vector<WorldSet> canon;
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<WorldSet> p(k, 0);
      for (size_t i = 0; i < k; ++i) {
        ForEach(up[i], [&](size_t j) { p[perm[i]] |= Bit(perm[j]); });
      }
      if (canon.empty() || p < canon) canon = p;
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (seen.insert(canon).second) out.push_back(up);
  }
  return out;
}

std::vector<WorldSet> UpSets(const std::vector<WorldSet>& up) {
  std::vector<WorldSet> out;
  size_t k = up.size();
  for (WorldSet s = 0; s < Bit(k); ++s) {
    bool ok = true;
    ForEach(s, [&](size_t v) { ok &= (up[v] & ~s) == 0; });
    if (ok) out.push_back(s);
  }
  return out;
}

}  // namespace

CountermodelResult FindCountermodel(const FlatContext& ctx, const Formula& goal,
                                    const CompiledAxiomSystem& sys,
                                    const CountermodelOptions& opts) {
  using Status = CountermodelResult::Status;
  CountermodelResult res;
  std::vector<Formula> all = ctx.formulas();
  all.push_back(goal);
  std::vector<std::string> tokens = TokensOf(all);
  bool truncated = tokens.size() > opts.max_tokens;
  if (truncated) tokens.resize(opts.max_tokens);
  std::set<Modality> mod_set = ModalitiesOf(all);
  std::vector<Modality> mods(mod_set.begin(), mod_set.end());

  for (size_t k = 1; k <= opts.max_worlds; ++k) {
    std::vector<std::string> names;
    for (size_t i = 0; i < k; ++i) names.push_back("w" + std::to_string(i));
    const size_t bits = mods.size() * k * k;
    if (bits >= 63) {
      res.status = Status::kUndetermined;
      return res;
    }
    for (const auto& up : Preorders(k)) {
      std::vector<WorldSet> ups = UpSets(up);
      std::set<std::map<Modality, std::vector<WorldSet>>> closed_seen;
      for (uint64_t a = 0; a < (uint64_t{1} << bits); ++a) {
        KripkeFrame f(names);
        for (size_t v = 0; v < k; ++v) {
          ForEach(up[v], [&](size_t w) { f.SetLeq(v, w); });
        }
        for (size_t mi = 0; mi < mods.size(); ++mi) {
          std::vector<WorldSet> rows(k);
          for (size_t v = 0; v < k; ++v) {
            rows[v] = (a >> ((mi * k + v) * k)) & (Bit(k) - 1);
          }
          f.SetRelation(mods[mi], rows);
        }
        CloseFrame(f, sys);
        if (!closed_seen.insert(f.relations()).second) continue;
        // Valuations: one up-set per token, odometer order.
        std::vector<size_t> idx(tokens.size(), 0);
        while (true) {
          if (opts.max_candidates && res.candidates >= opts.max_candidates) {
            res.status = Status::kUndetermined;
            return res;
          }
          ++res.candidates;
          for (size_t t = 0; t < tokens.size(); ++t) f.SetValuation(tokens[t], ups[idx[t]]);
          WorldSet bad = RefutingWorlds(f, ctx, goal);
          if (bad) {
            res.status = Status::kFound;
            res.world = std::countr_zero(bad);
            res.frame = f;
            return res;
          }
          size_t t = 0;
          while (t < idx.size() && ++idx[t] == ups.size()) idx[t++] = 0;
          if (t == idx.size()) break;
        }
      }
    }
  }
  res.status = truncated ? Status::kUndetermined : Status::kNotFound;
  return res;
}

KripkeFrame RandomFrame(std::mt19937_64& rng, const CompiledAxiomSystem& sys, size_t n,
                        const std::vector<std::string>& tokens,
                        const std::vector<Modality>& extra, double edge_p) {
  std::vector<std::string> names;
  for (size_t i = 0; i < n; ++i) names.push_back("w" + std::to_string(i));
  KripkeFrame f(names);
  std::bernoulli_distribution coin(edge_p);
  std::vector<WorldSet> up(n);
  for (size_t v = 0; v < n; ++v) {
    up[v] = Bit(v);
    for (size_t w = 0; w < n; ++w) {
      if (coin(rng)) up[v] |= Bit(w);
    }
  }
  // Transitive closure.
  for (size_t it = 0; it < n; ++it) {
    for (size_t v = 0; v < n; ++v) {
      WorldSet s = up[v];
      ForEach(s, [&](size_t w) { up[v] |= up[w]; });
    }
  }
  for (size_t v = 0; v < n; ++v) ForEach(up[v], [&](size_t w) { f.SetLeq(v, w); });
  std::bernoulli_distribution half(0.5);
  for (const std::string& t : tokens) {
    WorldSet s = 0;
    for (size_t v = 0; v < n; ++v) {
      if (half(rng)) s |= up[v];
    }
    f.SetValuation(t, s);
  }
  std::vector<Modality> mods = sys.modalities();
  for (const Modality& m : extra) {
    if (std::find(mods.begin(), mods.end(), m) == mods.end()) mods.push_back(m);
  }
  for (const Modality& m : mods) {
    std::vector<WorldSet> rows(n, 0);
    for (size_t v = 0; v < n; ++v) {
      for (size_t w = 0; w < n; ++w) {
        if (coin(rng)) rows[v] |= Bit(w);
      }
    }
    f.SetRelation(m, rows);
  }
  CloseFrame(f, sys);
  return f;
}

// ---------------------------------------------------------------------------
// Serialization.

namespace {

std::string SetText(const KripkeFrame& f, WorldSet s) {
  std::string out = "{";
  bool first = true;
  ForEach(s, [&](size_t v) {
    out += first ? "" : ", ";
    out += f.names()[v];
    first = false;
  });
  return out + "}";
}

}  // namespace

std::string RenderFrame(const KripkeFrame& f) {
  std::string out = "worlds:";
  for (const auto& n : f.names()) out += " " + n;
  out += "\nleq:";
  bool any = false;
  for (size_t v = 0; v < f.size(); ++v) {
    ForEach(f.Up(v) & ~Bit(v), [&](size_t w) {
      out += " " + f.names()[v] + "<=" + f.names()[w];
      any = true;
    });
  }
  if (!any) out += " (identity)";
  out += "\n";
  for (const auto& [tok, s] : f.valuations()) out += "S(" + tok + ") = " + SetText(f, s) + "\n";
  for (const auto& [m, rows] : f.relations()) {
    out += "R" + m.ToString() + " = {";
    bool first = true;
    for (size_t v = 0; v < f.size(); ++v) {
      ForEach(rows[v], [&](size_t w) {
        out += first ? "" : ", ";
        out += "(" + f.names()[v] + "," + f.names()[w] + ")";
        first = false;
      });
    }
    out += "}\n";
  }
  return out;
}

std::string FrameToJson(const KripkeFrame& f, int indent) {
  using nlohmann::json;
  json j;
  j["worlds"] = f.names();
  json leq = json::array();
  for (size_t v = 0; v < f.size(); ++v) {
    ForEach(f.Up(v) & ~Bit(v), [&](size_t w) { leq.push_back({f.names()[v], f.names()[w]}); });
  }
  j["leq"] = leq;
  json val = json::object();
  for (const auto& [tok, s] : f.valuations()) {
    json ws = json::array();
    ForEach(s, [&](size_t v) { ws.push_back(f.names()[v]); });
    val[tok] = ws;
  }
  j["valuation"] = val;
  json rel = json::object();
  for (const auto& [m, rows] : f.relations()) {
    json pairs = json::array();
    for (size_t v = 0; v < f.size(); ++v) {
      ForEach(rows[v], [&](size_t w) { pairs.push_back({f.names()[v], f.names()[w]}); });
    }
    rel[m.ToString()] = pairs;
  }
  j["relations"] = rel;
  return j.dump(indent);
}

KripkeFrame FrameFromJson(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("frame json: ") + e.what());
  }
  try {
    KripkeFrame f(j.at("worlds").get<std::vector<std::string>>());
    auto idx = [&](const json& name) {
      auto i = f.IndexOf(name.get<std::string>());
      if (!i) throw std::invalid_argument("unknown world " + name.dump());
      return *i;
    };
    for (const auto& p : j.at("leq")) f.SetLeq(idx(p.at(0)), idx(p.at(1)));
    for (const auto& [tok, ws] : j.at("valuation").items()) {
      WorldSet s = 0;
      for (const auto& w : ws) s |= Bit(idx(w));
      f.SetValuation(tok, s);
    }
    for (const auto& [m, pairs] : j.at("relations").items()) {
      std::vector<WorldSet> rows(f.size(), 0);
      for (const auto& p : pairs) rows[idx(p.at(0))] |= Bit(idx(p.at(1)));
      f.SetRelation(ParseModality(m), rows);
    }
    return f;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("frame json: ") + e.what());
  } catch (const ParseError& e) {
    throw std::invalid_argument(std::string("frame json: ") + e.what());
  }
}

}  // namespace trustlogic
