#pragma once

#include <memory>
#include <string>
#include <vector>

#include "certlab/graph.hpp"

namespace certlab {

class Rng;

enum class FormulaKind { Eq, Adj, Not, And, Or, Forall, Exists };

// Immutable first-order formula over the graph signature: equality and a
// symmetric irreflexive adjacency relation. Quantifiers range over the
// vertex set.
class Formula {
 public:
  static Formula eq(std::string a, std::string b);
  static Formula adj(std::string a, std::string b);
  static Formula lnot(Formula f);
  static Formula land(Formula a, Formula b);
  static Formula lor(Formula a, Formula b);
  static Formula forall(std::string var, Formula body);
  static Formula exists(std::string var, Formula body);

  FormulaKind kind() const;
  const std::string& var1() const;  // Eq/Adj left operand; quantifier binder
  const std::string& var2() const;  // Eq/Adj right operand
  Formula child(int i) const;       // 0 for Not/quantifiers, 0..1 for And/Or
  int child_count() const;

  bool same_as(const Formula& other) const;  // structural equality
  std::string str() const;                   // reparseable concrete syntax

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Concrete syntax: 'x = y', 'x ~ y', '!', '&', '|', 'exists x', 'forall x',
// parentheses. '!' and quantifiers bind tighter than '&', which binds
// tighter than '|'; a quantifier's unparenthesized body is a single
// negation/quantifier/atom/parenthesized group.
Formula parse_formula(const std::string& text);
// Additionally rejects free variables.
Formula parse_sentence(const std::string& text);

std::vector<std::string> free_variables(const Formula& f);
bool is_sentence(const Formula& f);
int quantifier_depth(const Formula& f);  // max nesting
int quantifier_count(const Formula& f);

// Equivalent prenex form; bound variables are renamed apart first with
// fresh names, so no capture occurs. Quantifier count is preserved.
Formula to_prenex(const Formula& f);

struct PrenexForm {
  struct Binder {
    bool universal;
    std::string var;
  };
  std::vector<Binder> prefix;  // outermost first
  Formula matrix;              // quantifier free
};
PrenexForm prenex_decompose(const Formula& f);

// True iff the prenex form of f has a purely existential prefix.
bool is_existential(const Formula& f);

// Brute-force model checking, O(n^quantifier_depth * |f|). Requires a
// sentence (throws ValidationError on free variables).
bool evaluate(const Graph& g, const Formula& sentence);

// Deterministic random sentence of quantifier depth <= max_depth (>= 1).
Formula random_sentence(Rng& rng, int max_depth);

}  // namespace certlab
