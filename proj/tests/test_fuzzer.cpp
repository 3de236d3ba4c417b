#include <doctest.h>

#include <set>

#include "certlab/fuzzer.hpp"
#include "certlab/graph.hpp"
#include "certlab/model.hpp"
#include "certlab/schemes.hpp"

using namespace certlab;

TEST_CASE("mutation streams are deterministic and leave the base intact") {
  Graph g = path_graph(5);
  auto scheme = spanning_tree_scheme();
  CertMap base = scheme->prove(g);
  CertMap snapshot = base;

  CertMutator a(base, 42), b(base, 42), c(base, 43);
  bool diverged = false;
  for (int i = 0; i < 50; ++i) {
    CertMap ma = a.next(1 + i % 3);
    CertMap mb = b.next(1 + i % 3);
    CHECK(ma == mb);
    if (ma != c.next(1 + i % 3)) diverged = true;
  }
  CHECK(diverged);
  CHECK(base == snapshot);
}

TEST_CASE("mutations actually change assignments") {
  Graph g = path_graph(5);
  auto scheme = count_scheme();
  CertMap base = scheme->prove(g);
  CertMutator mut(base, 7);
  int changed = 0;
  for (int i = 0; i < 30; ++i)
    if (mut.next(2) != base) ++changed;
  CHECK(changed >= 28);  // identity mutations are possible but rare
}

TEST_CASE("adversarial bases cover every applicable strategy") {
  Graph g = path_graph(6);
  auto scheme = count_scheme();
  auto bases = adversarial_bases(g, *scheme);
  CHECK_FALSE(bases.empty());
  std::set<std::string> labels;
  for (const AttackBase& b : bases) {
    CHECK_FALSE(b.certs.empty());
    labels.insert(b.label.substr(0, b.label.find('#')));
  }
  for (const std::string& s : scheme->attack_strategies()) CHECK(labels.count(s) == 1);
}

TEST_CASE("fuzzing a true no-instance stays clean and counts attempts") {
  // claim: treedepth <= 1, but the 5-path needs 2
  Graph g = path_graph(5);
  auto scheme = treedepth_scheme(1);
  FuzzReport rep = fuzz_soundness(g, *scheme, 400, 9);
  CHECK(rep.attempts == 400);
  CHECK(rep.escapes == 0);
  CHECK(rep.clean());
  CHECK(rep.notes.empty());
}

TEST_CASE("fuzzing reports escapes for a scheme with a hole") {
  struct AcceptAll : Scheme {
    std::string name() const override { return "yes"; }
    CertMap prove(const Graph&) const override { return {}; }
    bool verify(const LocalView&) const override { return true; }
  };
  Graph g = path_graph(4);
  AcceptAll s;
  FuzzReport rep = fuzz_soundness(g, s, 50, 1);
  CHECK(rep.attempts == 50);
  CHECK(rep.escapes == 50);
  CHECK_FALSE(rep.clean());
  CHECK(rep.notes.size() == 16);  // capped
}
