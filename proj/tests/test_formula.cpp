#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "certlab/errors.hpp"
#include "certlab/formula.hpp"
#include "certlab/graph.hpp"
#include "certlab/rng.hpp"

using namespace certlab;

namespace {

const char* kTriangle = "exists x exists y exists z (x ~ y & y ~ z & x ~ z)";

}  // namespace

TEST_CASE("parser round-trips through str()") {
  std::vector<std::string> samples = {
      "exists x exists y x ~ y",
      kTriangle,
      "forall x exists y x ~ y",
      "forall x forall y (x = y | x ~ y)",
      "exists x !(exists y x ~ y)",
      "forall x (x = x & !(x ~ x))",
  };
  for (const std::string& s : samples) {
    Formula f = parse_sentence(s);
    Formula again = parse_sentence(f.str());
    CHECK(again.same_as(f));
  }
}

TEST_CASE("parser reports well-located failures") {
  CHECK_THROWS_AS(parse_formula("exists x x ~"), ParseError);
  CHECK_THROWS_AS(parse_formula("x & & y"), ParseError);
  CHECK_THROWS_AS(parse_formula("(x ~ y"), ParseError);
  CHECK_THROWS_AS(parse_formula(""), ParseError);
  CHECK_THROWS_AS(parse_sentence("x ~ y"), ParseError);  // free variables
  CHECK_NOTHROW(parse_formula("x ~ y"));
}

TEST_CASE("precedence: quantifier and negation over conjunction over disjunction") {
  Formula f = parse_formula("exists x x = x & x ~ y | z = z");
  // parses as ((exists x x=x) & x~y) | z=z
  CHECK(f.kind() == FormulaKind::Or);
  CHECK(f.child(0).kind() == FormulaKind::And);
  CHECK(f.child(0).child(0).kind() == FormulaKind::Exists);

  Formula g = parse_formula("!x = y & z = z");
  CHECK(g.kind() == FormulaKind::And);
  CHECK(g.child(0).kind() == FormulaKind::Not);
}

TEST_CASE("free variables and sentence detection") {
  Formula f = parse_formula("exists x (x ~ y & exists y x ~ y)");
  std::vector<std::string> fv = free_variables(f);
  CHECK(fv == std::vector<std::string>{"y"});
  CHECK_FALSE(is_sentence(f));
  CHECK(is_sentence(parse_formula(kTriangle)));
}

TEST_CASE("quantifier depth and count") {
  Formula tri = parse_sentence(kTriangle);
  CHECK(quantifier_depth(tri) == 3);
  CHECK(quantifier_count(tri) == 3);

  // depth counts nesting, not total binders
  Formula wide = parse_sentence("(exists x x = x) & (exists y y = y)");
  CHECK(quantifier_depth(wide) == 1);
  CHECK(quantifier_count(wide) == 2);
}

TEST_CASE("prenex form preserves quantifier count and truth") {
  std::vector<std::string> samples = {
      "(exists x x = x) & (exists y y = y)",
      "forall x (exists y x ~ y | forall z x = z)",
      "!(exists x forall y x ~ y)",
      "exists x (x = x & !(forall y x ~ y))",
  };
  std::vector<Graph> graphs = {path_graph(4), cycle_graph(5), complete_graph(3), star_graph(3)};
  for (const std::string& s : samples) {
    Formula f = parse_sentence(s);
    Formula p = to_prenex(f);
    CHECK(quantifier_count(p) == quantifier_count(f));
    PrenexForm form = prenex_decompose(p);
    CHECK(quantifier_count(form.matrix) == 0);
    CHECK(static_cast<int>(form.prefix.size()) == quantifier_count(f));
    for (const Graph& g : graphs) CHECK(evaluate(g, p) == evaluate(g, f));
  }
}

TEST_CASE("is_existential sees through negation-free structure only after prenexing") {
  CHECK(is_existential(parse_sentence(kTriangle)));
  CHECK(is_existential(parse_sentence("(exists x x = x) & (exists y y = y)")));
  CHECK_FALSE(is_existential(parse_sentence("forall x exists y x ~ y")));
  // negation flips a universal into an existential
  CHECK(is_existential(parse_sentence("!(forall x exists y !(x ~ y))")) ==
        false);  // inner exists stays
  CHECK(is_existential(parse_sentence("!(forall x x = x)")));
}

TEST_CASE("evaluate agrees with hand-computed truths") {
  Formula tri = parse_sentence(kTriangle);
  CHECK(evaluate(complete_graph(3), tri));
  CHECK(evaluate(complete_graph(4), tri));
  CHECK_FALSE(evaluate(path_graph(4), tri));
  CHECK_FALSE(evaluate(cycle_graph(4), tri));
  CHECK(evaluate(cycle_graph(3), tri));

  Formula univ = parse_sentence("exists x forall y (x = y | x ~ y)");
  CHECK(evaluate(star_graph(3), univ));
  CHECK(evaluate(complete_graph(2), univ));
  CHECK_FALSE(evaluate(path_graph(4), univ));

  Formula apart = parse_sentence("exists x exists y (!(x = y) & !(x ~ y))");
  CHECK(evaluate(path_graph(3), apart));
  CHECK_FALSE(evaluate(complete_graph(5), apart));

  CHECK_THROWS_AS(evaluate(path_graph(3), parse_formula("x ~ y")), ValidationError);
}

TEST_CASE("adjacency atoms are irreflexive even under equal assignments") {
  Formula self = parse_sentence("exists x x ~ x");
  CHECK_FALSE(evaluate(complete_graph(4), self));
}

TEST_CASE("random sentences are deterministic, well-formed and bounded") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Rng a(seed), b(seed);
    Formula f = random_sentence(a, 3);
    Formula g = random_sentence(b, 3);
    CHECK(f.same_as(g));
    CHECK(is_sentence(f));
    CHECK(quantifier_depth(f) >= 1);
    CHECK(quantifier_depth(f) <= 3);
    CHECK_NOTHROW(evaluate(path_graph(4), f));
  }
}
