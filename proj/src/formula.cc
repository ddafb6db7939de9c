// Copyright 2026 The trustlogic Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "trustlogic/formula.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <unordered_set>

namespace trustlogic {

bool IsValidAgentId(const std::string& id) {
  if (id.empty()) return false;
  for (char c : id) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// AgentUniverse

AgentUniverse::AgentUniverse(std::vector<Agent> agents,
                             std::set<std::pair<Agent, Agent>> leq,
                             std::optional<Agent> bottom,
                             std::optional<Agent> top)
    : agents_(std::move(agents)), bottom_(std::move(bottom)), top_(std::move(top)) {
  const size_t n = agents_.size();
  std::set<Agent> seen;
  for (const Agent& a : agents_) {
    if (!IsValidAgentId(a.id)) {
      throw std::invalid_argument("invalid agent id '" + a.id + "'");
    }
    if (!seen.insert(a).second) {
      throw std::invalid_argument("duplicate agent '" + a.id + "'");
    }
  }
  leq_.assign(n * n, false);
  for (const auto& [a, b] : leq) {
    auto ia = IndexOf(a);
    auto ib = IndexOf(b);
    if (!ia || !ib) {
      throw std::invalid_argument("order mentions unknown agent '" +
                                  (ia ? b.id : a.id) + "'");
    }
    leq_[*ia * n + *ib] = true;
  }
  for (size_t i = 0; i < n; ++i) {
    if (!leq_[i * n + i]) {
      throw std::invalid_argument("order is not reflexive at '" +
                                  agents_[i].id + "'");
    }
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (!leq_[i * n + j]) continue;
      for (size_t k = 0; k < n; ++k) {
        if (leq_[j * n + k] && !leq_[i * n + k]) {
          throw std::invalid_argument("order is not transitive: " +
                                      agents_[i].id + " <= " + agents_[j].id +
                                      " <= " + agents_[k].id);
        }
      }
    }
  }
  if (bottom_) {
    auto ib = IndexOf(*bottom_);
    if (!ib) throw std::invalid_argument("unknown bottom agent");
    for (size_t j = 0; j < n; ++j) {
      if (!leq_[*ib * n + j]) {
        throw std::invalid_argument("bottom agent is not below '" +
                                    agents_[j].id + "'");
      }
    }
  }
  if (top_) {
    auto it = IndexOf(*top_);
    if (!it) throw std::invalid_argument("unknown top agent");
    for (size_t j = 0; j < n; ++j) {
      if (!leq_[j * n + *it]) {
        throw std::invalid_argument("top agent is not above '" +
                                    agents_[j].id + "'");
      }
    }
  }
}

AgentUniverse AgentUniverse::FromGenerators(
    std::vector<Agent> agents,
    const std::vector<std::pair<Agent, Agent>>& generators,
    std::optional<Agent> bottom, std::optional<Agent> top) {
  const size_t n = agents.size();
  std::map<Agent, size_t> index;
  for (size_t i = 0; i < n; ++i) index[agents[i]] = i;
  std::vector<bool> m(n * n, false);
  for (size_t i = 0; i < n; ++i) m[i * n + i] = true;
  for (const auto& [a, b] : generators) {
    auto ia = index.find(a);
    auto ib = index.find(b);
    if (ia == index.end() || ib == index.end()) {
      throw std::invalid_argument("order mentions unknown agent");
    }
    m[ia->second * n + ib->second] = true;
  }
  if (bottom) {
    auto ib = index.find(*bottom);
    if (ib == index.end()) throw std::invalid_argument("unknown bottom agent");
    for (size_t j = 0; j < n; ++j) m[ib->second * n + j] = true;
  }
  if (top) {
    auto it = index.find(*top);
    if (it == index.end()) throw std::invalid_argument("unknown top agent");
    for (size_t j = 0; j < n; ++j) m[j * n + it->second] = true;
  }
  for (size_t k = 0; k < n; ++k) {
    for (size_t i = 0; i < n; ++i) {
      if (!m[i * n + k]) continue;
      for (size_t j = 0; j < n; ++j) {
        if (m[k * n + j]) m[i * n + j] = true;
      }
    }
  }
  std::set<std::pair<Agent, Agent>> leq;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (m[i * n + j]) leq.insert({agents[i], agents[j]});
    }
  }
  return AgentUniverse(std::move(agents), std::move(leq), std::move(bottom),
                       std::move(top));
}

AgentUniverse AgentUniverse::Discrete(const std::vector<std::string>& ids) {
  std::vector<Agent> agents;
  for (const auto& id : ids) agents.emplace_back(id);
  return FromGenerators(std::move(agents), {});
}

std::optional<size_t> AgentUniverse::IndexOf(const Agent& a) const {
  for (size_t i = 0; i < agents_.size(); ++i) {
    if (agents_[i] == a) return i;
  }
  return std::nullopt;
}

bool AgentUniverse::Contains(const Agent& a) const { return IndexOf(a).has_value(); }

bool AgentUniverse::Leq(const Agent& a, const Agent& b) const {
  auto ia = IndexOf(a);
  auto ib = IndexOf(b);
  if (!ia || !ib) return false;
  return LeqIndex(*ia, *ib);
}

// ---------------------------------------------------------------------------
// Modality

Modality Modality::Belief(Agent a) { return Modality(Kind::kBelief, std::move(a), Agent()); }
Modality Modality::Interact(Agent r, Agent s) {
  return Modality(Kind::kInteract, std::move(r), std::move(s));
}
Modality Modality::Box() { return Modality(Kind::kBox, Agent(), Agent()); }
Modality Modality::Wish(Agent a) { return Modality(Kind::kWish, std::move(a), Agent()); }
Modality Modality::Named(std::string id) {
  return Modality(Kind::kNamed, Agent(std::move(id)), Agent());
}

std::vector<Agent> Modality::Agents() const {
  switch (kind_) {
    case Kind::kBelief:
    case Kind::kWish:
      return {first_};
    case Kind::kInteract:
      return {first_, second_};
    default:
      return {};
  }
}

std::string Modality::ToString() const {
  switch (kind_) {
    case Kind::kBelief:
      return "[B " + first_.id + "]";
    case Kind::kInteract:
      return "[I " + first_.id + " <- " + second_.id + "]";
    case Kind::kBox:
      return "[box]";
    case Kind::kWish:
      return "[W " + first_.id + "]";
    case Kind::kNamed:
      return "[M " + first_.id + "]";
  }
  return "[?]";
}

std::string RenderModalityList(const ModalityList& l) {
  std::string out;
  for (const Modality& m : l) out += m.ToString();
  return out.empty() ? "." : out;
}

// ---------------------------------------------------------------------------
// Formula

struct FormulaNode {
  Formula::Kind kind;
  std::string token;
  std::optional<Modality> modality;
  Formula a;
  Formula b;
  size_t hash = 0;
  size_t size = 1;
  size_t depth = 1;
};

namespace {

size_t Mix(size_t h, size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

size_t HashModality(const Modality& m) {
  size_t h = std::hash<int>()(static_cast<int>(m.kind()));
  h = Mix(h, std::hash<std::string>()(m.agent().id));
  h = Mix(h, std::hash<std::string>()(m.sender().id));
  return h;
}

const std::shared_ptr<const FormulaNode>& TopNode() {
  static const auto* node = new std::shared_ptr<const FormulaNode>([] {
    auto n = std::make_shared<FormulaNode>();
    n->kind = Formula::Kind::kTop;
    n->hash = 0x51ed270b;
    return n;
  }());
  return *node;
}

}  // namespace


Formula Formula::Top() { return Formula(); }

Formula Formula::Bot() {
  static const Formula* bot = new Formula([] {
    auto n = std::make_shared<FormulaNode>();
    n->kind = Kind::kBot;
    n->hash = 0x2f1a9b3c;
    return Formula(std::shared_ptr<const FormulaNode>(n));
  }());
  return *bot;
}

Formula Formula::Token(std::string name) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = Kind::kToken;
  n->hash = Mix(0x7a3, std::hash<std::string>()(name));
  n->token = std::move(name);
  return Formula(std::shared_ptr<const FormulaNode>(n));
}

Formula Formula::Modal(Modality m, Formula body) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = Kind::kModal;
  n->hash = Mix(Mix(0x3c1, HashModality(m)), body.hash());
  n->size = body.size() + 1;
  n->depth = body.depth() + 1;
  n->modality = std::move(m);
  n->a = std::move(body);
  return Formula(std::shared_ptr<const FormulaNode>(n));
}

namespace {

std::shared_ptr<FormulaNode> BinaryNode(Formula::Kind kind, Formula l, Formula r) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = kind;
  n->hash = Mix(Mix(static_cast<size_t>(kind) * 0x1f3, l.hash()), r.hash());
  n->size = l.size() + r.size() + 1;
  n->depth = std::max(l.depth(), r.depth()) + 1;
  n->a = std::move(l);
  n->b = std::move(r);
  return n;
}

}  // namespace

Formula Formula::Imp(Formula l, Formula r) {
  return Formula(std::shared_ptr<const FormulaNode>(BinaryNode(Kind::kImp, std::move(l), std::move(r))));
}
Formula Formula::And(Formula l, Formula r) {
  return Formula(std::shared_ptr<const FormulaNode>(BinaryNode(Kind::kAnd, std::move(l), std::move(r))));
}
Formula Formula::Or(Formula l, Formula r) {
  return Formula(std::shared_ptr<const FormulaNode>(BinaryNode(Kind::kOr, std::move(l), std::move(r))));
}

const FormulaNode& Formula::node() const { return node_ ? *node_ : *TopNode(); }

Formula::Kind Formula::kind() const { return node().kind; }
const std::string& Formula::token() const { return node().token; }
const Modality& Formula::modality() const { return *node().modality; }
const Formula& Formula::body() const { return node().a; }
const Formula& Formula::lhs() const { return node().a; }
const Formula& Formula::rhs() const { return node().b; }
size_t Formula::hash() const { return node().hash; }
size_t Formula::size() const { return node().size; }
size_t Formula::depth() const { return node().depth; }

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  const FormulaNode& x = node();
  const FormulaNode& y = other.node();
  if (&x == &y) return true;
  if (x.hash != y.hash || x.kind != y.kind || x.size != y.size) return false;
  switch (x.kind) {
    case Kind::kTop:
    case Kind::kBot:
      return true;
    case Kind::kToken:
      return x.token == y.token;
    case Kind::kModal:
      return *x.modality == *y.modality && x.a == y.a;
    default:
      return x.a == y.a && x.b == y.b;
  }
}

int CompareFormulas(const Formula& x, const Formula& y) {
  if (x.kind() != y.kind()) return x.kind() < y.kind() ? -1 : 1;
  switch (x.kind()) {
    case Formula::Kind::kTop:
    case Formula::Kind::kBot:
      return 0;
    case Formula::Kind::kToken:
      return x.token().compare(y.token()) < 0 ? -1 : (x.token() == y.token() ? 0 : 1);
    case Formula::Kind::kModal: {
      if (x.modality() != y.modality()) return x.modality() < y.modality() ? -1 : 1;
      return CompareFormulas(x.body(), y.body());
    }
    default: {
      int c = CompareFormulas(x.lhs(), y.lhs());
      if (c != 0) return c;
      return CompareFormulas(x.rhs(), y.rhs());
    }
  }
}

bool Formula::operator<(const Formula& other) const {
  return CompareFormulas(*this, other) < 0;
}

// ---------------------------------------------------------------------------
// Macros

Formula Not(const Formula& a) { return Formula::Imp(a, Formula::Bot()); }

Formula BigAnd(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::Top();
  Formula acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = Formula::And(acc, fs[i]);
  return acc;
}

Formula BigOr(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::Bot();
  Formula acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = Formula::Or(acc, fs[i]);
  return acc;
}

Formula ForAll(const std::vector<Agent>& agents,
               const std::function<Formula(const Agent&)>& f) {
  std::vector<Formula> fs;
  for (const Agent& a : agents) fs.push_back(f(a));
  return BigAnd(fs);
}

Formula Exists(const std::vector<Agent>& agents,
               const std::function<Formula(const Agent&)>& f) {
  std::vector<Formula> fs;
  for (const Agent& a : agents) fs.push_back(f(a));
  return BigOr(fs);
}

Formula ApplyModalities(const ModalityList& l, const Formula& body) {
  Formula acc = body;
  for (auto it = l.rbegin(); it != l.rend(); ++it) acc = Formula::Modal(*it, acc);
  return acc;
}

ModalityList ChainModalities(const std::vector<Agent>& chain) {
  if (chain.size() < 2) {
    throw std::invalid_argument("a chain needs at least two agents");
  }
  ModalityList l;
  for (size_t i = 0; i + 1 < chain.size(); ++i) {
    l.push_back(Modality::Interact(chain[i], chain[i + 1]));
  }
  return l;
}

Formula Chain(const std::vector<Agent>& chain, const Formula& body) {
  return ApplyModalities(ChainModalities(chain), body);
}

Formula Validity(const ModalityList& l, const Formula& body) {
  return Formula::Imp(ApplyModalities(l, body), body);
}

namespace {

void CollectTokens(const Formula& f, std::vector<std::string>& out,
                   std::set<std::string>& seen) {
  switch (f.kind()) {
    case Formula::Kind::kToken:
      if (seen.insert(f.token()).second) out.push_back(f.token());
      return;
    case Formula::Kind::kModal:
      CollectTokens(f.body(), out, seen);
      return;
    case Formula::Kind::kImp:
    case Formula::Kind::kAnd:
    case Formula::Kind::kOr:
      CollectTokens(f.lhs(), out, seen);
      CollectTokens(f.rhs(), out, seen);
      return;
    default:
      return;
  }
}

void CollectModalities(const Formula& f, std::set<Modality>& out) {
  switch (f.kind()) {
    case Formula::Kind::kModal:
      out.insert(f.modality());
      CollectModalities(f.body(), out);
      return;
    case Formula::Kind::kImp:
    case Formula::Kind::kAnd:
    case Formula::Kind::kOr:
      CollectModalities(f.lhs(), out);
      CollectModalities(f.rhs(), out);
      return;
    default:
      return;
  }
}

}  // namespace

std::vector<std::string> TokensOf(const std::vector<Formula>& fs) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const Formula& f : fs) CollectTokens(f, out, seen);
  return out;
}

std::set<Modality> ModalitiesOf(const std::vector<Formula>& fs) {
  std::set<Modality> out;
  for (const Formula& f : fs) CollectModalities(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

bool IdentStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool IdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Parser {
 public:
  Parser(const std::string& text, const AgentUniverse* universe)
      : text_(text), universe_(universe) {}

  Formula ParseAll() {
    Formula f = ParseImp();
    SkipSpace();
    if (pos_ != text_.size()) Fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

  Modality ParseModalityOnly() {
    SkipSpace();
    Modality m = ParseModal();
    SkipSpace();
    if (pos_ != text_.size()) Fail("trailing input after modality");
    return m;
  }

 private:
  [[noreturn]] void Fail(const std::string& msg) { throw ParseError(msg, pos_); }

  void SkipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool Peek(const std::string& s) {
    SkipSpace();
    return text_.compare(pos_, s.size(), s) == 0;
  }

  bool Accept(const std::string& s) {
    if (Peek(s)) {
      pos_ += s.size();
      return true;
    }
    return false;
  }

  void Expect(const std::string& s) {
    if (!Accept(s)) Fail("expected '" + s + "'");
  }

  // [A-Za-z_][A-Za-z0-9_()]* where parentheses must balance inside the name.
  std::string Name() {
    SkipSpace();
    if (pos_ >= text_.size() || !IdentStart(text_[pos_])) Fail("expected identifier");
    size_t start = pos_;
    int depth = 0;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (IdentChar(c)) {
        ++pos_;
      } else if (c == '(') {
        ++depth;
        ++pos_;
      } else if (c == ')' && depth > 0) {
        --depth;
        ++pos_;
      } else {
        break;
      }
    }
    if (depth != 0) Fail("unbalanced parenthesis in name");
    return text_.substr(start, pos_ - start);
  }

  Agent AgentName() {
    size_t at = pos_;
    std::string id = Name();
    if (universe_ != nullptr && !universe_->Contains(Agent(id))) {
      throw ParseError("unknown agent '" + id + "'", at);
    }
    return Agent(id);
  }

  Formula ParseImp() {
    Formula lhs = ParseOr();
    if (Accept("->")) {
      Formula rhs = ParseImp();
      return Formula::Imp(lhs, rhs);
    }
    return lhs;
  }

  Formula ParseOr() {
    Formula acc = ParseAnd();
    while (Accept("|")) acc = Formula::Or(acc, ParseAnd());
    return acc;
  }

  Formula ParseAnd() {
    Formula acc = ParseUnary();
    while (Accept("&")) acc = Formula::And(acc, ParseUnary());
    return acc;
  }

  Modality ParseModal() {
    Expect("[");
    SkipSpace();
    size_t at = pos_;
    std::string head = Name();
    Modality m = Modality::Box();
    if (head == "B") {
      m = Modality::Belief(AgentName());
    } else if (head == "W") {
      m = Modality::Wish(AgentName());
    } else if (head == "I") {
      Agent r = AgentName();
      Expect("<-");
      Agent s = AgentName();
      m = Modality::Interact(r, s);
    } else if (head == "box") {
      m = Modality::Box();
    } else if (head == "M") {
      m = Modality::Named(Name());
    } else {
      throw ParseError("unknown modality '" + head + "'", at);
    }
    Expect("]");
    return m;
  }

  Formula ParseUnary() {
    SkipSpace();
    if (pos_ >= text_.size()) Fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '[') {
      Modality m = ParseModal();
      return Formula::Modal(m, ParseUnary());
    }
    if (c == '(') {
      ++pos_;
      Formula f = ParseImp();
      Expect(")");
      return f;
    }
    if (IdentStart(c)) {
      std::string name = Name();
      if (name == "true") return Formula::Top();
      if (name == "false") return Formula::Bot();
      return Formula::Token(name);
    }
    Fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& text_;
  const AgentUniverse* universe_;
  size_t pos_ = 0;
};

int Precedence(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::kImp:
      return 1;
    case Formula::Kind::kOr:
      return 2;
    case Formula::Kind::kAnd:
      return 3;
    default:
      return 4;
  }
}

void Render(const Formula& f, int min_prec, std::string& out) {
  bool paren = Precedence(f) < min_prec;
  if (paren) out += '(';
  switch (f.kind()) {
    case Formula::Kind::kTop:
      out += "true";
      break;
    case Formula::Kind::kBot:
      out += "false";
      break;
    case Formula::Kind::kToken:
      out += f.token();
      break;
    case Formula::Kind::kModal:
      out += f.modality().ToString();
      if (f.body().is(Formula::Kind::kModal)) {
        Render(f.body(), 4, out);
      } else {
        out += '(';
        Render(f.body(), 1, out);
        out += ')';
      }
      break;
    case Formula::Kind::kImp:
      Render(f.lhs(), 2, out);
      out += " -> ";
      Render(f.rhs(), 1, out);
      break;
    case Formula::Kind::kOr:
      Render(f.lhs(), 2, out);
      out += " | ";
      Render(f.rhs(), 3, out);
      break;
    case Formula::Kind::kAnd:
      Render(f.lhs(), 3, out);
      out += " & ";
      Render(f.rhs(), 4, out);
      break;
  }
  if (paren) out += ')';
}

}  // namespace

Formula ParseFormula(const std::string& text) { return Parser(text, nullptr).ParseAll(); }

Formula ParseFormula(const std::string& text, const AgentUniverse& universe) {
  return Parser(text, &universe).ParseAll();
}

Modality ParseModality(const std::string& text) {
  return Parser(text, nullptr).ParseModalityOnly();
}

std::string RenderFormula(const Formula& f) {
  std::string out;
  Render(f, 1, out);
  return out;
}

// ---------------------------------------------------------------------------
// Contexts

FlatContext::FlatContext(std::initializer_list<Formula> fs) {
  for (const Formula& f : fs) Add(f);
}

FlatContext::FlatContext(const std::vector<Formula>& fs) {
  for (const Formula& f : fs) Add(f);
}

bool FlatContext::Add(const Formula& f) {
  if (Contains(f)) return false;
  formulas_.push_back(f);
  return true;
}

bool FlatContext::Contains(const Formula& f) const {
  return std::find(formulas_.begin(), formulas_.end(), f) != formulas_.end();
}

FlatContext FlatContext::With(const Formula& f) const {
  FlatContext c = *this;
  c.Add(f);
  return c;
}

FlatContext FlatContext::Without(const Formula& f) const {
  FlatContext c;
  for (const Formula& g : formulas_) {
    if (g != f) c.formulas_.push_back(g);
  }
  return c;
}

ModalContext::ModalContext(std::vector<ContextEntry> entries)
    : entries_(std::move(entries)) {
  std::set<std::string> names;
  for (const auto& e : entries_) {
    if (const auto* h = std::get_if<Hypothesis>(&e)) {
      if (!names.insert(h->name).second) {
        throw std::invalid_argument("duplicate hypothesis name '" + h->name + "'");
      }
    }
  }
}

ModalContext ModalContext::FromFlat(const FlatContext& ctx, const std::string& prefix) {
  std::vector<ContextEntry> entries;
  for (size_t i = 0; i < ctx.size(); ++i) {
    entries.push_back(Hypothesis{prefix + std::to_string(i), ctx.formulas()[i]});
  }
  return ModalContext(std::move(entries));
}

ModalContext ModalContext::WithHypothesis(std::string name, Formula f) const {
  std::vector<ContextEntry> e = entries_;
  e.push_back(Hypothesis{std::move(name), std::move(f)});
  return ModalContext(std::move(e));
}

ModalContext ModalContext::WithLock(Modality m) const {
  ModalContext c = *this;
  c.entries_.push_back(Lock{std::move(m)});
  return c;
}

ModalityList ModalContext::LockWord() const {
  ModalityList l;
  for (const auto& e : entries_) {
    if (const auto* k = std::get_if<Lock>(&e)) l.push_back(k->modality);
  }
  return l;
}

size_t ModalContext::LockCount() const {
  size_t n = 0;
  for (const auto& e : entries_) n += std::holds_alternative<Lock>(e) ? 1 : 0;
  return n;
}

bool ModalContext::HasName(const std::string& name) const {
  for (const auto& e : entries_) {
    if (const auto* h = std::get_if<Hypothesis>(&e); h && h->name == name) return true;
  }
  return false;
}

FlatContext ModalContext::Hypotheses() const {
  FlatContext c;
  for (const auto& e : entries_) {
    if (const auto* h = std::get_if<Hypothesis>(&e)) c.Add(h->formula);
  }
  return c;
}

ModalContext ModalContext::Prefix(size_t n) const {
  ModalContext c;
  c.entries_.assign(entries_.begin(), entries_.begin() + std::min(n, entries_.size()));
  return c;
}

std::string RenderModalContext(const ModalContext& ctx) {
  std::string out;
  for (size_t i = 0; i < ctx.entries().size(); ++i) {
    if (i > 0) out += ", ";
    const auto& e = ctx.entries()[i];
    if (const auto* h = std::get_if<Hypothesis>(&e)) {
      out += h->name + " : " + RenderFormula(h->formula);
    } else {
      out += "{" + std::get<Lock>(e).modality.ToString() + "}";
    }
  }
  return out;
}

std::string RenderSequent(const FlatContext& ctx, const Formula& goal) {
  std::string out;
  for (size_t i = 0; i < ctx.size(); ++i) {
    if (i > 0) out += ", ";
    out += RenderFormula(ctx.formulas()[i]);
  }
  out += out.empty() ? "|- " : " |- ";
  out += RenderFormula(goal);
  return out;
}

}  // namespace trustlogic
