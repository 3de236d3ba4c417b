#include "certlab/formula.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "certlab/errors.hpp"
#include "certlab/rng.hpp"

namespace certlab {

struct Formula::Node {
  FormulaKind kind;
  std::string a, b;  // atom operands; quantifier binder in `a`
  std::shared_ptr<const Node> left, right;
};

Formula Formula::eq(std::string a, std::string b) {
  return Formula(std::make_shared<Node>(Node{FormulaKind::Eq, std::move(a), std::move(b), nullptr, nullptr}));
}
Formula Formula::adj(std::string a, std::string b) {
  return Formula(std::make_shared<Node>(Node{FormulaKind::Adj, std::move(a), std::move(b), nullptr, nullptr}));
}
Formula Formula::lnot(Formula f) {
  return Formula(std::make_shared<Node>(Node{FormulaKind::Not, "", "", std::move(f.node_), nullptr}));
}
Formula Formula::land(Formula a, Formula b) {
  return Formula(std::make_shared<Node>(Node{FormulaKind::And, "", "", std::move(a.node_), std::move(b.node_)}));
}
Formula Formula::lor(Formula a, Formula b) {
  return Formula(std::make_shared<Node>(Node{FormulaKind::Or, "", "", std::move(a.node_), std::move(b.node_)}));
}
Formula Formula::forall(std::string var, Formula body) {
  return Formula(std::make_shared<Node>(Node{FormulaKind::Forall, std::move(var), "", std::move(body.node_), nullptr}));
}
Formula Formula::exists(std::string var, Formula body) {
  return Formula(std::make_shared<Node>(Node{FormulaKind::Exists, std::move(var), "", std::move(body.node_), nullptr}));
}

FormulaKind Formula::kind() const { return node_->kind; }
const std::string& Formula::var1() const { return node_->a; }
const std::string& Formula::var2() const { return node_->b; }

Formula Formula::child(int i) const {
  return Formula(i == 0 ? node_->left : node_->right);
}

int Formula::child_count() const {
  switch (node_->kind) {
    case FormulaKind::Eq:
    case FormulaKind::Adj:
      return 0;
    case FormulaKind::Not:
    case FormulaKind::Forall:
    case FormulaKind::Exists:
      return 1;
    case FormulaKind::And:
    case FormulaKind::Or:
      return 2;
  }
  return 0;
}

bool Formula::same_as(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (node_->kind != other.node_->kind) return false;
  if (node_->a != other.node_->a || node_->b != other.node_->b) return false;
  for (int i = 0; i < child_count(); ++i)
    if (!child(i).same_as(other.child(i))) return false;
  return true;
}

namespace {

bool is_binary(const Formula& f) {
  return f.kind() == FormulaKind::And || f.kind() == FormulaKind::Or;
}

std::string print(const Formula& f);

// Operand in a unary position (negation body, quantifier body, chain
// element): binary nodes need parentheses to survive reparsing.
std::string print_unary(const Formula& f) {
  if (is_binary(f)) return "(" + print(f) + ")";
  return print(f);
}

std::string print(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Eq:
      return f.var1() + " = " + f.var2();
    case FormulaKind::Adj:
      return f.var1() + " ~ " + f.var2();
    case FormulaKind::Not:
      return "!" + print_unary(f.child(0));
    case FormulaKind::Forall:
      return "forall " + f.var1() + " " + print_unary(f.child(0));
    case FormulaKind::Exists:
      return "exists " + f.var1() + " " + print_unary(f.child(0));
    case FormulaKind::And:
    case FormulaKind::Or: {
      // Flatten the left spine; left association matches the parser.
      std::vector<Formula> elems;
      Formula cur = f;
      while (cur.kind() == f.kind()) {
        elems.push_back(cur.child(1));
        cur = cur.child(0);
      }
      elems.push_back(cur);
      std::reverse(elems.begin(), elems.end());
      std::string sep = f.kind() == FormulaKind::And ? " & " : " | ";
      std::string out = "(";
      for (std::size_t i = 0; i < elems.size(); ++i) {
        if (i) out += sep;
        out += print_unary(elems[i]);
      }
      return out + ")";
    }
  }
  return "";
}

struct Token {
  enum Kind { Ident, Eq, Adj, Not, And, Or, LParen, RParen, Exists, Forall, End } kind;
  std::string text;
  int pos;
};

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    int pos = static_cast<int>(i) + 1;
    switch (c) {
      case '=': out.push_back({Token::Eq, "=", pos}); ++i; continue;
      case '~': out.push_back({Token::Adj, "~", pos}); ++i; continue;
      case '!': out.push_back({Token::Not, "!", pos}); ++i; continue;
      case '&': out.push_back({Token::And, "&", pos}); ++i; continue;
      case '|': out.push_back({Token::Or, "|", pos}); ++i; continue;
      case '(': out.push_back({Token::LParen, "(", pos}); ++i; continue;
      case ')': out.push_back({Token::RParen, ")", pos}); ++i; continue;
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
        ++i;
      std::string word = text.substr(start, i - start);
      if (word == "exists")
        out.push_back({Token::Exists, word, pos});
      else if (word == "forall")
        out.push_back({Token::Forall, word, pos});
      else
        out.push_back({Token::Ident, word, pos});
      continue;
    }
    throw ParseError("column " + std::to_string(pos) + ": unexpected character '" +
                     std::string(1, c) + "'");
  }
  out.push_back({Token::End, "", static_cast<int>(text.size()) + 1});
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  Formula parse() {
    Formula f = disjunction();
    expect(Token::End, "end of input");
    return f;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  Token take() { return toks_[i_++]; }

  [[noreturn]] void fail(const std::string& want) {
    const Token& t = peek();
    std::string got = t.kind == Token::End ? "end of input" : "'" + t.text + "'";
    throw ParseError("column " + std::to_string(t.pos) + ": expected " + want + ", got " + got);
  }

  void expect(Token::Kind k, const std::string& want) {
    if (peek().kind != k) fail(want);
    ++i_;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (peek().kind == Token::Or) {
      take();
      f = Formula::lor(std::move(f), conjunction());
    }
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (peek().kind == Token::And) {
      take();
      f = Formula::land(std::move(f), unary());
    }
    return f;
  }

  Formula unary() {
    switch (peek().kind) {
      case Token::Not:
        take();
        return Formula::lnot(unary());
      case Token::Exists:
      case Token::Forall: {
        Token q = take();
        if (peek().kind != Token::Ident) fail("variable after '" + q.text + "'");
        std::string var = take().text;
        Formula body = unary();
        return q.kind == Token::Exists ? Formula::exists(var, std::move(body))
                                       : Formula::forall(var, std::move(body));
      }
      case Token::LParen: {
        take();
        Formula f = disjunction();
        expect(Token::RParen, "')'");
        return f;
      }
      case Token::Ident: {
        std::string a = take().text;
        if (peek().kind == Token::Eq) {
          take();
          if (peek().kind != Token::Ident) fail("variable after '='");
          return Formula::eq(a, take().text);
        }
        if (peek().kind == Token::Adj) {
          take();
          if (peek().kind != Token::Ident) fail("variable after '~'");
          return Formula::adj(a, take().text);
        }
        fail("'=' or '~' after variable");
      }
      default:
        fail("formula");
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& free) {
  switch (f.kind()) {
    case FormulaKind::Eq:
    case FormulaKind::Adj:
      if (!bound.count(f.var1())) free.insert(f.var1());
      if (!bound.count(f.var2())) free.insert(f.var2());
      return;
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      bool was_bound = bound.count(f.var1()) != 0;
      bound.insert(f.var1());
      collect_free(f.child(0), bound, free);
      if (!was_bound) bound.erase(f.var1());
      return;
    }
    default:
      for (int i = 0; i < f.child_count(); ++i) collect_free(f.child(i), bound, free);
  }
}

}  // namespace

std::string Formula::str() const { return print(*this); }

Formula parse_formula(const std::string& text) { return Parser(text).parse(); }

Formula parse_sentence(const std::string& text) {
  Formula f = parse_formula(text);
  auto free = free_variables(f);
  if (!free.empty())
    throw ParseError("unbound variable '" + free.front() + "' in sentence");
  return f;
}

std::vector<std::string> free_variables(const Formula& f) {
  std::set<std::string> bound, free;
  collect_free(f, bound, free);
  return {free.begin(), free.end()};
}

bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

int quantifier_depth(const Formula& f) {
  int sub = 0;
  for (int i = 0; i < f.child_count(); ++i) sub = std::max(sub, quantifier_depth(f.child(i)));
  if (f.kind() == FormulaKind::Forall || f.kind() == FormulaKind::Exists) return sub + 1;
  return sub;
}

int quantifier_count(const Formula& f) {
  int total = f.kind() == FormulaKind::Forall || f.kind() == FormulaKind::Exists ? 1 : 0;
  for (int i = 0; i < f.child_count(); ++i) total += quantifier_count(f.child(i));
  return total;
}

namespace {

void collect_names(const Formula& f, std::set<std::string>& names) {
  switch (f.kind()) {
    case FormulaKind::Eq:
    case FormulaKind::Adj:
      names.insert(f.var1());
      names.insert(f.var2());
      return;
    case FormulaKind::Forall:
    case FormulaKind::Exists:
      names.insert(f.var1());
      break;
    default:
      break;
  }
  for (int i = 0; i < f.child_count(); ++i) collect_names(f.child(i), names);
}

struct FreshNames {
  std::set<std::string> used;
  int counter = 0;
  std::string next() {
    for (;;) {
      std::string name = "v" + std::to_string(++counter);
      if (used.insert(name).second) return name;
    }
  }
};

Formula rename_apart(const Formula& f, std::map<std::string, std::string>& env, FreshNames& fresh) {
  switch (f.kind()) {
    case FormulaKind::Eq:
    case FormulaKind::Adj: {
      auto sub = [&](const std::string& v) {
        auto it = env.find(v);
        return it == env.end() ? v : it->second;
      };
      return f.kind() == FormulaKind::Eq ? Formula::eq(sub(f.var1()), sub(f.var2()))
                                         : Formula::adj(sub(f.var1()), sub(f.var2()));
    }
    case FormulaKind::Not:
      return Formula::lnot(rename_apart(f.child(0), env, fresh));
    case FormulaKind::And:
      return Formula::land(rename_apart(f.child(0), env, fresh),
                           rename_apart(f.child(1), env, fresh));
    case FormulaKind::Or:
      return Formula::lor(rename_apart(f.child(0), env, fresh),
                          rename_apart(f.child(1), env, fresh));
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      std::string name = fresh.next();
      auto it = env.find(f.var1());
      std::string saved;
      bool had = it != env.end();
      if (had) saved = it->second;
      env[f.var1()] = name;
      Formula body = rename_apart(f.child(0), env, fresh);
      if (had)
        env[f.var1()] = saved;
      else
        env.erase(f.var1());
      return f.kind() == FormulaKind::Forall ? Formula::forall(name, std::move(body))
                                             : Formula::exists(name, std::move(body));
    }
  }
  throw ValidationError("unreachable formula kind");
}

struct PrefixMatrix {
  std::vector<PrenexForm::Binder> prefix;
  Formula matrix;
};

PrefixMatrix pull_quantifiers(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Eq:
    case FormulaKind::Adj:
      return {{}, f};
    case FormulaKind::Not: {
      PrefixMatrix sub = pull_quantifiers(f.child(0));
      for (auto& b : sub.prefix) b.universal = !b.universal;
      return {std::move(sub.prefix), Formula::lnot(std::move(sub.matrix))};
    }
    case FormulaKind::And:
    case FormulaKind::Or: {
      PrefixMatrix l = pull_quantifiers(f.child(0));
      PrefixMatrix r = pull_quantifiers(f.child(1));
      // Bound variables are already renamed apart, so simple
      // concatenation of the prefixes is sound.
      l.prefix.insert(l.prefix.end(), r.prefix.begin(), r.prefix.end());
      Formula m = f.kind() == FormulaKind::And ? Formula::land(std::move(l.matrix), std::move(r.matrix))
                                               : Formula::lor(std::move(l.matrix), std::move(r.matrix));
      return {std::move(l.prefix), std::move(m)};
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      PrefixMatrix sub = pull_quantifiers(f.child(0));
      std::vector<PrenexForm::Binder> prefix{{f.kind() == FormulaKind::Forall, f.var1()}};
      prefix.insert(prefix.end(), sub.prefix.begin(), sub.prefix.end());
      return {std::move(prefix), std::move(sub.matrix)};
    }
  }
  throw ValidationError("unreachable formula kind");
}

PrefixMatrix prenex_parts(const Formula& f) {
  FreshNames fresh;
  collect_names(f, fresh.used);
  std::map<std::string, std::string> env;
  Formula renamed = rename_apart(f, env, fresh);
  return pull_quantifiers(renamed);
}

}  // namespace

Formula to_prenex(const Formula& f) {
  PrefixMatrix pm = prenex_parts(f);
  Formula out = std::move(pm.matrix);
  for (auto it = pm.prefix.rbegin(); it != pm.prefix.rend(); ++it)
    out = it->universal ? Formula::forall(it->var, std::move(out))
                        : Formula::exists(it->var, std::move(out));
  return out;
}

PrenexForm prenex_decompose(const Formula& f) {
  PrefixMatrix pm = prenex_parts(f);
  return {std::move(pm.prefix), std::move(pm.matrix)};
}

bool is_existential(const Formula& f) {
  for (const auto& b : prenex_parts(f).prefix)
    if (b.universal) return false;
  return true;
}

namespace {

struct Env {
  std::vector<std::pair<std::string, NodeId>> binds;
  NodeId lookup(const std::string& v) const {
    for (auto it = binds.rbegin(); it != binds.rend(); ++it)
      if (it->first == v) return it->second;
    throw ValidationError("unbound variable '" + v + "'");
  }
};

bool eval_rec(const Graph& g, const Formula& f, Env& env) {
  switch (f.kind()) {
    case FormulaKind::Eq:
      return env.lookup(f.var1()) == env.lookup(f.var2());
    case FormulaKind::Adj: {
      NodeId a = env.lookup(f.var1()), b = env.lookup(f.var2());
      return a != b && g.adjacent(a, b);
    }
    case FormulaKind::Not:
      return !eval_rec(g, f.child(0), env);
    case FormulaKind::And:
      return eval_rec(g, f.child(0), env) && eval_rec(g, f.child(1), env);
    case FormulaKind::Or:
      return eval_rec(g, f.child(0), env) || eval_rec(g, f.child(1), env);
    case FormulaKind::Forall:
      for (NodeId v : g.nodes()) {
        env.binds.emplace_back(f.var1(), v);
        bool ok = eval_rec(g, f.child(0), env);
        env.binds.pop_back();
        if (!ok) return false;
      }
      return true;
    case FormulaKind::Exists:
      for (NodeId v : g.nodes()) {
        env.binds.emplace_back(f.var1(), v);
        bool ok = eval_rec(g, f.child(0), env);
        env.binds.pop_back();
        if (ok) return true;
      }
      return false;
  }
  throw ValidationError("unreachable formula kind");
}

}  // namespace

bool evaluate(const Graph& g, const Formula& sentence) {
  auto free = free_variables(sentence);
  if (!free.empty())
    throw ValidationError("evaluate requires a sentence; '" + free.front() + "' is free");
  Env env;
  return eval_rec(g, sentence, env);
}

namespace {

const char* kVarPool[] = {"x", "y", "z", "u", "w", "s", "p", "q"};

Formula gen_formula(Rng& rng, int q_budget, std::vector<std::string>& bound, int& size_budget) {
  --size_budget;
  bool can_atom = bound.size() >= 1;
  bool can_quant = q_budget > 0 && bound.size() < std::size(kVarPool);
  if (!can_atom && !can_quant)
    throw ValidationError("random sentence needs quantifier depth >= 1");
  // Out of size budget: close off with an atom, quantifying first if no
  // variable is bound yet.
  if (size_budget <= 0) {
    if (can_atom) {
      const std::string& a = bound[rng.below(bound.size())];
      const std::string& b = bound[rng.below(bound.size())];
      return rng.chance(0.4) ? Formula::eq(a, b) : Formula::adj(a, b);
    }
    std::string var = kVarPool[bound.size()];
    bound.push_back(var);
    Formula body = gen_formula(rng, q_budget - 1, bound, size_budget);
    bound.pop_back();
    return rng.chance(0.5) ? Formula::exists(var, std::move(body))
                           : Formula::forall(var, std::move(body));
  }
  int quant_weight = can_quant ? (bound.size() < 2 ? 55 : 20) : 0;
  int atom_weight = can_atom ? 30 : 0;
  int not_weight = 12, and_weight = 14, or_weight = 14;
  int total = quant_weight + atom_weight + not_weight + and_weight + or_weight;
  int pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(total)));
  if ((pick -= quant_weight) < 0) {
    std::string var = kVarPool[bound.size()];
    bound.push_back(var);
    Formula body = gen_formula(rng, q_budget - 1, bound, size_budget);
    bound.pop_back();
    return rng.chance(0.5) ? Formula::exists(var, std::move(body))
                           : Formula::forall(var, std::move(body));
  }
  if ((pick -= atom_weight) < 0) {
    const std::string& a = bound[rng.below(bound.size())];
    const std::string& b = bound[rng.below(bound.size())];
    return rng.chance(0.4) ? Formula::eq(a, b) : Formula::adj(a, b);
  }
  if ((pick -= not_weight) < 0) return Formula::lnot(gen_formula(rng, q_budget, bound, size_budget));
  if ((pick -= and_weight) < 0) {
    Formula l = gen_formula(rng, q_budget, bound, size_budget);
    return Formula::land(std::move(l), gen_formula(rng, q_budget, bound, size_budget));
  }
  Formula l = gen_formula(rng, q_budget, bound, size_budget);
  return Formula::lor(std::move(l), gen_formula(rng, q_budget, bound, size_budget));
}

}  // namespace

Formula random_sentence(Rng& rng, int max_depth) {
  if (max_depth < 1) throw ValidationError("random_sentence needs max_depth >= 1");
  std::vector<std::string> bound;
  int size_budget = 2 + rng.below_int(10);
  return gen_formula(rng, max_depth, bound, size_budget);
}

}  // namespace certlab
