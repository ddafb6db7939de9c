// Copyright 2026 The trustlogic Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "trustlogic/workspace.h"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace trustlogic {

namespace {

using json = nlohmann::ordered_json;

std::string Trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> Words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::vector<std::string> SplitNames(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      std::string t = Trim(cur);
      if (!t.empty()) out.push_back(t);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

size_t ParseCount(const std::string& s, size_t line, const std::string& what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw WorkspaceError("expected " + what + ", got '" + s + "'", line);
  }
  return std::stoul(s);
}

double ParseProbability(const std::string& s, size_t line) {
  size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw WorkspaceError("expected a number, got '" + s + "'", line);
  return v;
}

bool IsName(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

struct Line {
  size_t number;
  std::string text;
  std::vector<std::string> words;
};

std::pair<size_t, size_t> ParseThreshold(const std::string& s) {
  static const std::regex re("^([0-9]+)of([0-9]+)$");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw std::invalid_argument("threshold must look like 2of3");
  return {std::stoul(m[1]), std::stoul(m[2])};
}

}  // namespace

FlatContext Workspace::Context(const std::optional<std::vector<std::string>>& names) const {
  FlatContext out;
  if (!names) {
    for (const NamedFormula& a : assumptions) out.Add(a.formula);
    return out;
  }
  std::set<std::string> want(names->begin(), names->end());
  for (const std::string& n : *names) {
    bool found = false;
    for (const NamedFormula& a : assumptions) found = found || a.name == n;
    if (!found) throw std::invalid_argument("unknown assumption '" + n + "'");
  }
  for (const NamedFormula& a : assumptions) {
    if (want.count(a.name)) out.Add(a.formula);
  }
  return out;
}

std::vector<std::string> Workspace::NamesOf(const FlatContext& ctx) const {
  std::vector<std::string> out;
  for (const NamedFormula& a : assumptions) {
    if (ctx.Contains(a.formula)) out.push_back(a.name);
  }
  return out;
}

TrustLanguage Workspace::Language() const { return TrustLanguage(universe.agents(), network); }

Formula ParseWorkspaceFormula(const Workspace& ws, const std::string& text, size_t line) {
  std::string out;
  std::optional<TrustLanguage> lang;
  size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '@') {
      out += text[i++];
      continue;
    }
    size_t open = text.find('(', i);
    size_t close = text.find(')', i);
    if (open == std::string::npos || close == std::string::npos || close < open) {
      throw WorkspaceError("malformed macro", line);
    }
    std::string name = Trim(text.substr(i + 1, open - i - 1));
    std::vector<std::string> args = SplitNames(text.substr(open + 1, close - open - 1));
    if ((name != "T" && name != "V") || args.size() != 4) {
      throw WorkspaceError("unknown macro @" + name + " (use @T(n,a,b,P) or @V(n,a,b,P))", line);
    }
    size_t n = ParseCount(args[0], line, "an order");
    for (int k : {1, 2}) {
      if (!ws.universe.Contains(Agent(args[k]))) {
        throw WorkspaceError("undeclared agent '" + args[k] + "'", line);
      }
    }
    if (!lang) lang.emplace(ws.Language());
    Agent a(args[1]), b(args[2]);
    Formula f = name == "T" ? lang->OrderTrust(n, a, b, args[3])
                            : lang->OrderValidity(n, a, b, args[3]);
    out += "(" + RenderFormula(f) + ")";
    i = close + 1;
  }
  try {
    return ParseFormula(out, ws.universe);
  } catch (const ParseError& e) {
    throw WorkspaceError(e.what(), line);
  }
}

Workspace ParseWorkspace(const std::string& text) {
  std::vector<Line> lines;
  {
    std::istringstream in(text);
    std::string raw;
    size_t number = 0;
    while (std::getline(in, raw)) {
      ++number;
      if (size_t h = raw.find('#'); h != std::string::npos) raw.resize(h);
      std::string t = Trim(raw);
      if (t.empty()) continue;
      lines.push_back({number, t, Words(t)});
    }
  }

  Workspace ws;
  std::vector<Agent> agents;
  std::vector<std::pair<Agent, Agent>> order;
  size_t first_order_line = 0;
  std::vector<std::pair<size_t, std::pair<Agent, Agent>>> edges;
  std::vector<std::pair<size_t, TrustEdge>> trust;
  size_t mode_line = 0;
  std::vector<const Line*> deferred;

  auto need = [](const Line& l, size_t n, const std::string& form) {
    if (l.words.size() != n) throw WorkspaceError("expected '" + form + "'", l.number);
  };

  for (const Line& l : lines) {
    const std::string& kw = l.words[0];
    if (kw == "agent") {
      need(l, 2, "agent <id>");
      if (!IsValidAgentId(l.words[1])) {
        throw WorkspaceError("invalid agent id '" + l.words[1] + "'", l.number);
      }
      Agent a(l.words[1]);
      if (std::find(agents.begin(), agents.end(), a) != agents.end()) {
        throw WorkspaceError("agent '" + a.id + "' declared twice", l.number);
      }
      agents.push_back(a);
    } else if (kw == "order") {
      need(l, 4, "order <a> <= <b>");
      if (l.words[2] != "<=") throw WorkspaceError("expected 'order <a> <= <b>'", l.number);
      order.push_back({Agent(l.words[1]), Agent(l.words[3])});
      if (!first_order_line) first_order_line = l.number;
    } else if (kw == "option") {
      need(l, 3, "option box on|off");
      if (l.words[1] != "box" || (l.words[2] != "on" && l.words[2] != "off")) {
        throw WorkspaceError("unknown option '" + l.text + "'", l.number);
      }
      ws.box = l.words[2] == "on";
    } else if (kw == "edge") {
      need(l, 4, "edge <b> -> <a>");
      if (l.words[2] != "->") throw WorkspaceError("expected 'edge <b> -> <a>'", l.number);
      edges.push_back({l.number, {Agent(l.words[1]), Agent(l.words[3])}});
    } else if (kw == "mode") {
      need(l, 2, "mode shortest|acyclic");
      if (l.words[1] == "shortest") {
        ws.trust_spec.mode = NetworkMode::kShortest;
      } else if (l.words[1] == "acyclic") {
        ws.trust_spec.mode = NetworkMode::kAcyclic;
      } else {
        throw WorkspaceError("unknown mode '" + l.words[1] + "'", l.number);
      }
      mode_line = l.number;
    } else if (kw == "trust") {
      need(l, 5, "trust <n> <a> <b> <P>");
      if (!IsName(l.words[4])) throw WorkspaceError("invalid predicate '" + l.words[4] + "'", l.number);
      trust.push_back({l.number, TrustEdge{ParseCount(l.words[1], l.number, "an order"),
                                           Agent(l.words[2]), Agent(l.words[3]), l.words[4]}});
    } else if (kw == "axiom") {
      try {
        ws.axioms.push_back(ParseAxiom(l.text));
      } catch (const ParseError& e) {
        throw WorkspaceError(std::string("malformed axiom: ") + e.what(), l.number);
      }
    } else if (kw == "assume" || kw == "expect") {
      deferred.push_back(&l);
    } else {
      throw WorkspaceError("unknown directive '" + kw + "'", l.number);
    }
  }

  auto declared = [&](const Agent& a, size_t line) {
    if (std::find(agents.begin(), agents.end(), a) == agents.end()) {
      throw WorkspaceError("undeclared agent '" + a.id + "'", line);
    }
  };
  for (const auto& [u, v] : order) {
    declared(u, first_order_line);
    declared(v, first_order_line);
  }
  try {
    ws.universe = AgentUniverse::FromGenerators(agents, order);
  } catch (const std::invalid_argument& e) {
    throw WorkspaceError(e.what(), first_order_line);
  }
  if (ws.axioms.empty()) {
    ws.system = StandardSystem(ws.universe, ws.box);
  } else {
    try {
      ws.system = Compile(ws.axioms, ws.universe);
    } catch (const std::invalid_argument& e) {
      throw WorkspaceError(std::string("malformed axiom: ") + e.what(), 0);
    }
  }

  for (const Agent& a : agents) ws.trust_spec.graph.AddVertex(a);
  for (const auto& [line, e] : edges) {
    declared(e.first, line);
    declared(e.second, line);
    ws.trust_spec.graph.AddEdge(e.first, e.second);
  }
  for (const auto& [line, e] : trust) {
    declared(e.truster, line);
    declared(e.trustee, line);
    if (e.truster == e.trustee) throw WorkspaceError("self trust edge", line);
    ws.trust_spec.asserted.insert(e);
    ws.trust_spec.graph.AddEdge(e.trustee, e.truster);
  }
  try {
    ws.network = BuildNetwork(ws.trust_spec);
  } catch (const std::invalid_argument& e) {
    throw WorkspaceError(e.what(), mode_line);
  }

  std::set<std::string> names;
  for (const Line* lp : deferred) {
    const Line& l = *lp;
    size_t colon = l.text.find(':');
    if (l.words[0] == "assume") {
      if (colon == std::string::npos) {
        throw WorkspaceError("expected 'assume <name> : <formula>'", l.number);
      }
      std::string name = Trim(l.text.substr(6, colon - 6));
      if (!IsName(name)) throw WorkspaceError("invalid assumption name '" + name + "'", l.number);
      if (!names.insert(name).second) {
        throw WorkspaceError("assumption '" + name + "' declared twice", l.number);
      }
      ws.assumptions.push_back(
          {name, ParseWorkspaceFormula(ws, l.text.substr(colon + 1), l.number), l.number});
      continue;
    }
    Expectation e;
    e.line = l.number;
    e.text = l.text;
    if (l.words.size() < 2) throw WorkspaceError("empty expectation", l.number);
    const std::string& kind = l.words[1];
    if (kind == "proved" || kind == "not-provable" || kind == "refuted") {
      e.kind = kind == "proved"         ? ExpectKind::kProved
               : kind == "not-provable" ? ExpectKind::kNotProvable
                                        : ExpectKind::kRefuted;
      if (colon == std::string::npos) throw WorkspaceError("expected ': <formula>'", l.number);
      std::vector<std::string> head = Words(l.text.substr(0, colon));
      for (size_t i = 2; i < head.size();) {
        if (head[i] == "from") {
          std::string joined;
          for (++i; i < head.size() && head[i] != "budget"; ++i) joined += head[i] + ",";
          e.from = SplitNames(joined);
        } else if (head[i] == "budget" && i + 1 < head.size()) {
          e.budget = ParseCount(head[i + 1], l.number, "a budget");
          i += 2;
        } else {
          throw WorkspaceError("expected 'from <names>' or 'budget <N>' before ':'", l.number);
        }
      }
      e.formula = ParseWorkspaceFormula(ws, l.text.substr(colon + 1), l.number);
    } else if (kind == "derived" || kind == "verified") {
      need(l, 6, "expect " + kind + " <n> <a> <b> <P>");
      e.kind = kind == "derived" ? ExpectKind::kDerived : ExpectKind::kVerified;
      e.edge = {ParseCount(l.words[2], l.number, "an order"), Agent(l.words[3]), Agent(l.words[4]),
                l.words[5]};
      declared(e.edge.truster, l.number);
      declared(e.edge.trustee, l.number);
    } else if (kind == "derived-count") {
      need(l, 3, "expect derived-count <N>");
      e.kind = ExpectKind::kDerivedCount;
      e.count = ParseCount(l.words[2], l.number, "a count");
    } else if (kind == "risk") {
      e.kind = ExpectKind::kRisk;
      if (l.words.size() < 6 || l.words[l.words.size() - 2] != "=") {
        throw WorkspaceError("expected 'expect risk KofN p1 .. pn = value'", l.number);
      }
      try {
        std::tie(e.k, e.n) = ParseThreshold(l.words[2]);
      } catch (const std::invalid_argument& x) {
        throw WorkspaceError(x.what(), l.number);
      }
      for (size_t i = 3; i + 2 < l.words.size(); ++i) {
        e.probabilities.push_back(ParseProbability(l.words[i], l.number));
      }
      e.value = ParseProbability(l.words.back(), l.number);
      try {
        RiskAggregate(e.k, e.n, e.probabilities);
      } catch (const std::invalid_argument& x) {
        throw WorkspaceError(x.what(), l.number);
      }
    } else {
      throw WorkspaceError("unknown expectation '" + kind + "'", l.number);
    }
    ws.expectations.push_back(std::move(e));
  }
  return ws;
}

Workspace LoadWorkspace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw WorkspaceError("cannot read " + path, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseWorkspace(ss.str());
}

std::string ReportVerdictName(ReportVerdict v) {
  switch (v) {
    case ReportVerdict::kProved:
      return "Proved";
    case ReportVerdict::kNotProvable:
      return "NotProvable";
    case ReportVerdict::kBudgetExceeded:
      return "BudgetExceeded";
    case ReportVerdict::kDerived:
      return "Derived";
    case ReportVerdict::kRefuted:
      return "Refuted";
    case ReportVerdict::kUndetermined:
      return "Undetermined";
  }
  return "?";
}

int ExitCode(ReportVerdict v) {
  switch (v) {
    case ReportVerdict::kProved:
    case ReportVerdict::kDerived:
      return 0;
    case ReportVerdict::kNotProvable:
    case ReportVerdict::kRefuted:
      return 1;
    default:
      return 2;
  }
}

namespace {

struct Prepared {
  Formula goal;
  FlatContext ctx;
  std::vector<std::string> names;
};

Prepared Prepare(const Workspace& ws, const std::string& formula, const QueryOptions& opts) {
  Prepared p{ParseWorkspaceFormula(ws, formula), ws.Context(opts.from), {}};
  FlatContext seen;
  for (const NamedFormula& a : ws.assumptions) {
    if (p.ctx.Contains(a.formula) && seen.Add(a.formula)) p.names.push_back(a.name);
  }
  return p;
}

}  // namespace

QueryReport ProveQuery(const Workspace& ws, const std::string& formula, const QueryOptions& opts) {
  QueryReport r;
  r.query = "prove " + formula;
  Prepared p = Prepare(ws, formula, opts);
  r.hypotheses = p.names;
  ProverOptions po;
  po.budget = opts.budget;
  ProveResult pr = Prove(p.ctx, p.goal, ws.system, po);
  r.stats = pr.stats;
  switch (pr.verdict) {
    case Verdict::kProved: {
      std::string why;
      if (!CheckProof(*pr.proof, ws.system, &why)) {
        throw std::logic_error("prover returned an invalid proof: " + why);
      }
      r.verdict = ReportVerdict::kProved;
      r.proof = pr.proof;
      r.term = ExtractTerm(*pr.proof, ws.system);
      if (!(Typecheck(ModalContext::FromFlat(p.ctx), *r.term, ws.system) == p.goal)) {
        throw std::logic_error("extracted term does not have the goal type");
      }
      r.used = ws.NamesOf(UsedAssumptions(*pr.proof, ws.system));
      break;
    }
    case Verdict::kNotProvable:
      r.verdict = ReportVerdict::kNotProvable;
      break;
    case Verdict::kBudgetExceeded:
      r.verdict = ReportVerdict::kBudgetExceeded;
      r.note = "search budget of " + std::to_string(opts.budget) + " nodes exhausted";
      break;
  }
  return r;
}

QueryReport TermQuery(const Workspace& ws, const std::string& formula, const QueryOptions& opts) {
  QueryReport r = ProveQuery(ws, formula, opts);
  r.query = "term " + formula;
  if (!r.term) return r;
  NormalizeResult nr = Normalize(*r.term, {}, ws.system);
  r.normal = nr.term;
  r.normal_steps = nr.steps;
  if (!nr.normal) r.note = "normalization stopped after " + std::to_string(nr.steps) + " steps";
  Formula goal = r.proof->goal;
  if (!(Typecheck(ModalContext::FromFlat(r.proof->context), nr.term, ws.system) == goal)) {
    throw std::logic_error("normal form does not have the goal type");
  }
  return r;
}

QueryReport CountermodelQuery(const Workspace& ws, const std::string& formula,
                              const QueryOptions& opts) {
  QueryReport r;
  r.query = "countermodel " + formula;
  Prepared p = Prepare(ws, formula, opts);
  r.hypotheses = p.names;
  CountermodelOptions co;
  co.max_worlds = opts.worlds;
  CountermodelResult cm = FindCountermodel(p.ctx, p.goal, ws.system, co);
  r.candidates = cm.candidates;
  if (cm.status == CountermodelResult::Status::kFound) {
    if (!Conforms(*cm.frame, ws.system) || !((RefutingWorlds(*cm.frame, p.ctx, p.goal) >> cm.world) & 1)) {
      throw std::logic_error("countermodel search returned a non-refuting frame");
    }
    r.verdict = ReportVerdict::kRefuted;
    r.frame = cm.frame;
    r.world = cm.world;
  } else {
    r.verdict = ReportVerdict::kUndetermined;
    r.note = cm.status == CountermodelResult::Status::kNotFound
                 ? "no countermodel with at most " + std::to_string(opts.worlds) + " worlds"
                 : "search limits reached";
  }
  return r;
}

QueryReport TrustDeriveQuery(const Workspace& ws, const QueryOptions& opts) {
  QueryReport r;
  r.query = opts.verify ? "trust-derive --verify" : "trust-derive";
  SaturationResult sat = SaturateTrust(ws.trust_spec.asserted, ws.network);
  for (const TrustDerivation& d : sat.log) {
    if (d.rule != TrustRule::kAsserted) r.derived.push_back(d);
  }
  r.verdict = ReportVerdict::kDerived;
  if (!opts.verify) return r;
  TrustLanguage lang = ws.Language();
  ProverOptions po;
  po.budget = opts.budget;
  bool refuted = false, budget = false;
  for (const TrustDerivation& d : r.derived) {
    VerifyReport v = VerifyDerivation(lang, ws.system, d, po);
    for (const ProveResult& pr : v.results) {
      refuted = refuted || pr.verdict == Verdict::kNotProvable;
      budget = budget || pr.verdict == Verdict::kBudgetExceeded;
      r.stats.nodes_expanded += pr.stats.nodes_expanded;
      r.stats.max_depth = std::max(r.stats.max_depth, pr.stats.max_depth);
      r.stats.subsumption_prunes += pr.stats.subsumption_prunes;
      r.stats.cache_hits += pr.stats.cache_hits;
    }
    r.verified.push_back(std::move(v));
  }
  if (refuted) {
    r.verdict = ReportVerdict::kNotProvable;
  } else if (budget) {
    r.verdict = ReportVerdict::kBudgetExceeded;
  }
  return r;
}

QueryReport RiskQuery(const std::string& threshold, const std::vector<double>& failure) {
  auto [k, n] = ParseThreshold(threshold);
  QueryReport r;
  r.query = "risk " + threshold;
  for (double p : failure) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, p);
    r.query += " " + std::string(buf, res.ptr);
  }
  r.risk = RiskAggregate(k, n, failure);
  r.verdict = ReportVerdict::kDerived;
  return r;
}

namespace {

std::string Join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::string DerivationLine(const TrustDerivation& d) {
  std::string s = "derived " + RenderTrustEdge(d.conclusion);
  if (d.left && d.right) {
    s += "  # " + TrustRuleName(d.rule) + ": " + RenderTrustEdge(*d.left) + " + " +
         RenderTrustEdge(*d.right);
  }
  return s;
}

json ProofJson(const ProofTree& p) {
  json j;
  j["rule"] = RuleName(p.rule);
  j["goal"] = RenderFormula(p.goal);
  if (p.principal) j["principal"] = RenderFormula(*p.principal);
  json prem = json::array();
  for (const ProofPtr& q : p.premises) prem.push_back(ProofJson(*q));
  j["premises"] = prem;
  return j;
}

std::string FormatRisk(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

std::string RenderReport(const QueryReport& r) {
  std::ostringstream out;
  out << "query: " << r.query << "\n";
  out << "verdict: " << ReportVerdictName(r.verdict) << "\n";
  if (!r.note.empty()) out << "note: " << r.note << "\n";
  if (!r.hypotheses.empty() && (r.term || r.frame)) {
    std::vector<std::string> legend;
    for (size_t i = 0; i < r.hypotheses.size(); ++i) {
      legend.push_back("h" + std::to_string(i) + "=" + r.hypotheses[i]);
    }
    out << "hypotheses: " << Join(legend, ", ") << "\n";
  }
  if (r.proof) {
    out << "used: " << (r.used.empty() ? "(none)" : Join(r.used, ", ")) << "\n";
    out << "proof: " << ProofSize(*r.proof) << " nodes, height " << ProofHeight(*r.proof) << "\n";
  }
  if (r.term) out << "term: " << RenderTerm(*r.term) << "\n";
  if (r.normal) out << "normal form (" << r.normal_steps << " steps): " << RenderTerm(*r.normal) << "\n";
  if (r.frame) {
    out << "refuting world: " << r.frame->names()[r.world] << "\n";
    out << RenderFrame(*r.frame);
  }
  for (const TrustDerivation& d : r.derived) out << DerivationLine(d) << "\n";
  for (const VerifyReport& v : r.verified) {
    std::vector<std::string> bad;
    for (size_t i = 0; i < v.results.size(); ++i) {
      if (v.results[i].verdict != Verdict::kProved) {
        bad.push_back("obligation " + std::to_string(i) + " " + VerdictName(v.results[i].verdict));
      }
    }
    out << (v.ok() ? "verified " : "unverified ") << RenderTrustEdge(v.derivation.conclusion);
    if (!bad.empty()) out << ": " << Join(bad, ", ");
    out << "\n";
  }
  if (r.risk) out << "risk: " << FormatRisk(*r.risk) << "\n";
  if (r.proof || r.verdict == ReportVerdict::kNotProvable ||
      r.verdict == ReportVerdict::kBudgetExceeded) {
    out << "stats: nodes " << r.stats.nodes_expanded << ", depth " << r.stats.max_depth
        << ", prunes " << r.stats.subsumption_prunes << ", cache hits " << r.stats.cache_hits
        << "\n";
  }
  return out.str();
}

std::string ReportToJson(const QueryReport& r, int indent) {
  json j;
  j["query"] = r.query;
  j["verdict"] = ReportVerdictName(r.verdict);
  if (!r.note.empty()) j["note"] = r.note;
  if (!r.hypotheses.empty()) j["hypotheses"] = r.hypotheses;
  if (r.proof) {
    j["used_assumptions"] = r.used;
    j["proof"] = ProofJson(*r.proof);
  }
  if (r.term) j["term"] = RenderTerm(*r.term);
  if (r.normal) {
    j["normal_form"] = RenderTerm(*r.normal);
    j["normal_steps"] = r.normal_steps;
  }
  if (r.frame) {
    j["countermodel"] = json::parse(FrameToJson(*r.frame));
    j["refuting_world"] = r.frame->names()[r.world];
  }
  if (r.verdict == ReportVerdict::kRefuted || r.candidates) j["frames_examined"] = r.candidates;
  if (!r.derived.empty() || r.query.rfind("trust-derive", 0) == 0) {
    json d = json::array();
    for (const TrustDerivation& x : r.derived) {
      json e;
      e["order"] = x.conclusion.order;
      e["truster"] = x.conclusion.truster.id;
      e["trustee"] = x.conclusion.trustee.id;
      e["predicate"] = x.conclusion.predicate;
      e["rule"] = TrustRuleName(x.rule);
      e["left"] = RenderTrustEdge(*x.left);
      e["right"] = RenderTrustEdge(*x.right);
      d.push_back(e);
    }
    j["derived"] = d;
  }
  if (!r.verified.empty()) {
    json v = json::array();
    for (const VerifyReport& x : r.verified) {
      json e;
      e["edge"] = RenderTrustEdge(x.derivation.conclusion);
      e["ok"] = x.ok();
      json obl = json::array();
      for (size_t i = 0; i < x.goals.size(); ++i) {
        json o;
        o["goal"] = RenderFormula(x.goals[i]);
        o["verdict"] = VerdictName(x.results[i].verdict);
        o["nodes"] = x.results[i].stats.nodes_expanded;
        obl.push_back(o);
      }
      e["obligations"] = obl;
      v.push_back(e);
    }
    j["verified"] = v;
  }
  if (r.risk) j["risk"] = *r.risk;
  json s;
  s["nodes_expanded"] = r.stats.nodes_expanded;
  s["max_depth"] = r.stats.max_depth;
  s["subsumption_prunes"] = r.stats.subsumption_prunes;
  s["cache_hits"] = r.stats.cache_hits;
  j["stats"] = s;
  return j.dump(indent);
}

std::vector<ExpectationResult> CheckExpectations(const Workspace& ws, const QueryOptions& opts) {
  std::vector<ExpectationResult> out;
  std::optional<SaturationResult> sat;
  auto saturated = [&]() -> const SaturationResult& {
    if (!sat) sat = SaturateTrust(ws.trust_spec.asserted, ws.network);
    return *sat;
  };
  for (const Expectation& e : ws.expectations) {
    ExpectationResult res{e, false, ""};
    QueryOptions q = opts;
    q.from = e.from;
    if (e.budget) q.budget = *e.budget;
    switch (e.kind) {
      case ExpectKind::kProved:
      case ExpectKind::kNotProvable: {
        ProverOptions po;
        po.budget = q.budget;
        ProveResult pr = Prove(ws.Context(q.from), e.formula, ws.system, po);
        Verdict want = e.kind == ExpectKind::kProved ? Verdict::kProved : Verdict::kNotProvable;
        res.ok = pr.verdict == want;
        if (res.ok && pr.proof) res.ok = CheckProof(*pr.proof, ws.system);
        res.detail = VerdictName(pr.verdict) + " (" + std::to_string(pr.stats.nodes_expanded) +
                     " nodes)";
        break;
      }
      case ExpectKind::kRefuted: {
        CountermodelOptions co;
        co.max_worlds = q.worlds;
        FlatContext ctx = ws.Context(q.from);
        CountermodelResult cm = FindCountermodel(ctx, e.formula, ws.system, co);
        res.ok = cm.status == CountermodelResult::Status::kFound && Conforms(*cm.frame, ws.system) &&
                 ((RefutingWorlds(*cm.frame, ctx, e.formula) >> cm.world) & 1);
        res.detail = CountermodelStatusName(cm.status);
        if (cm.frame) res.detail += " (" + std::to_string(cm.frame->size()) + " worlds)";
        break;
      }
      case ExpectKind::kDerived:
        res.ok = saturated().Derived().count(e.edge) > 0;
        res.detail = res.ok ? "derived" : "not derived";
        break;
      case ExpectKind::kDerivedCount: {
        size_t n = saturated().Derived().size();
        res.ok = n == e.count;
        res.detail = std::to_string(n) + " derived";
        break;
      }
      case ExpectKind::kVerified: {
        const TrustDerivation* d = saturated().Find(e.edge);
        if (!d) {
          res.detail = "not derived";
          break;
        }
        ProverOptions po;
        po.budget = q.budget;
        VerifyReport v = VerifyDerivation(ws.Language(), ws.system, *d, po);
        res.ok = v.ok();
        size_t proved = 0;
        for (const ProveResult& pr : v.results) proved += pr.verdict == Verdict::kProved;
        res.detail = std::to_string(proved) + "/" + std::to_string(v.goals.size()) +
                     " obligations proved";
        break;
      }
      case ExpectKind::kRisk: {
        double got = RiskAggregate(e.k, e.n, e.probabilities);
        res.ok = std::fabs(got - e.value) <= 1e-12;
        res.detail = "risk " + FormatRisk(got);
        break;
      }
    }
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace trustlogic
