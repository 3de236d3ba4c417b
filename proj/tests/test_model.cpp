#include <doctest.h>

#include <algorithm>
#include <map>

#include "certlab/errors.hpp"
#include "certlab/model.hpp"
#include "support/corpus.hpp"

using namespace certlab;

namespace {

// Rooted at 4, children 2 and 6, leaves below: height-2 elimination tree
// for the 7-path.
Model p7_model() {
  return Model::from_parent_map(
      4, {{4, 4}, {2, 4}, {6, 4}, {1, 2}, {3, 2}, {5, 6}, {7, 6}});
}

}  // namespace

TEST_CASE("model construction validates parent and depth maps") {
  CHECK_NOTHROW(Model(1, {{1, 1}, {2, 1}}, {{1, 0}, {2, 1}}));
  // root must map to itself
  CHECK_THROWS_AS(Model(1, {{1, 2}, {2, 2}}, {{1, 1}, {2, 0}}), ValidationError);
  // depth must be parent's depth + 1
  CHECK_THROWS_AS(Model(1, {{1, 1}, {2, 1}}, {{1, 0}, {2, 2}}), ValidationError);
  // cycle
  CHECK_THROWS_AS(Model::from_parent_map(1, {{1, 1}, {2, 3}, {3, 2}}), ValidationError);
  // parent outside the vertex set
  CHECK_THROWS_AS(Model::from_parent_map(1, {{1, 1}, {2, 9}}), ValidationError);
}

TEST_CASE("model accessors on the 7-path witness") {
  Model m = p7_model();
  CHECK(m.root() == 4);
  CHECK(m.height() == 2);
  CHECK(m.size() == 7);
  CHECK(m.depth(4) == 0);
  CHECK(m.depth(2) == 1);
  CHECK(m.depth(7) == 2);
  CHECK(m.parent(5) == 6);
  CHECK(m.children(2) == std::vector<NodeId>{1, 3});
  CHECK(m.ancestors(5) == std::vector<NodeId>{5, 6, 4});
  CHECK(m.ancestor_at_depth(5, 0) == 4);
  CHECK(m.ancestor_at_depth(5, 1) == 6);
  CHECK(m.is_ancestor_or_self(4, 7));
  CHECK(m.is_ancestor_or_self(6, 6));
  CHECK_FALSE(m.is_ancestor_or_self(2, 5));
  CHECK(m.subtree(6) == std::vector<NodeId>{5, 6, 7});

  Model r = m.restricted_to({4, 2, 1});
  CHECK(r.size() == 3);
  CHECK(r.height() == 2);
  CHECK_THROWS_AS(m.restricted_to({2, 1}), ValidationError);  // missing root
}

TEST_CASE("model validity ties the tree to the graph") {
  Graph p7 = path_graph(7);
  Model m = p7_model();
  CHECK(is_valid_model(p7, m, 2));
  CHECK(is_valid_model(p7, m, 5));
  CHECK_FALSE(is_valid_model(p7, m, 1));  // height exceeds bound

  // edge 3-4 joins siblings under this tree: not a valid model
  Model bad = Model::from_parent_map(
      2, {{2, 2}, {1, 2}, {3, 2}, {4, 2}, {5, 4}, {6, 4}, {7, 4}});
  CHECK_FALSE(is_valid_model(p7, bad, 3));

  // vertex set mismatch throws instead of returning false
  CHECK_THROWS_AS(is_valid_model(path_graph(6), m, 3), ValidationError);
}

TEST_CASE("coherence detection and repair") {
  Graph p7 = path_graph(7);
  CHECK(is_coherent(p7, p7_model()));

  Model chain = Model::from_parent_map(
      1, {{1, 1}, {2, 1}, {3, 2}, {4, 3}, {5, 4}, {6, 5}, {7, 6}});
  CHECK(is_valid_model(p7, chain, 6));
  CHECK(is_coherent(p7, chain));

  // star, center 1: chaining the leaves is valid (the center is an
  // ancestor of everything) but the subtree {3,4,5} has no vertex
  // adjacent to its parent 2.
  Graph star = star_graph(4);
  Model hang = Model::from_parent_map(1, {{1, 1}, {2, 1}, {3, 2}, {4, 3}, {5, 4}});
  CHECK(is_valid_model(star, hang, 4));
  CHECK_FALSE(is_coherent(star, hang));
  CHECK_THROWS_AS(coherence_witness(star, hang), ValidationError);

  Model fixed = make_coherent(star, hang);
  CHECK(is_valid_model(star, fixed, 4));
  CHECK(is_coherent(star, fixed));
  CHECK(fixed.height() <= hang.height());
  CHECK(fixed.height() == 1);  // every leaf reattaches to the center

  std::map<NodeId, NodeId> wit = coherence_witness(star, fixed);
  CHECK(wit.size() == 4);
  for (auto [v, w] : wit) {
    CHECK(fixed.is_ancestor_or_self(v, w));
    CHECK(star.adjacent(w, fixed.parent(v)));
  }
}

TEST_CASE("exact treedepth on named families") {
  CHECK(compute_treedepth_exact(complete_graph(1)).treedepth == 0);
  CHECK(compute_treedepth_exact(path_graph(7)).treedepth == 2);
  // paths on 2^j - 1 vertices have treedepth j - 1 under the height convention
  CHECK(compute_treedepth_exact(path_graph(1)).treedepth == 0);
  CHECK(compute_treedepth_exact(path_graph(3)).treedepth == 1);
  CHECK(compute_treedepth_exact(path_graph(15)).treedepth == 3);
  for (int n = 2; n <= 6; ++n)
    CHECK(compute_treedepth_exact(complete_graph(n)).treedepth == n - 1);
  CHECK(compute_treedepth_exact(cycle_graph(4)).treedepth == 2);
  CHECK(compute_treedepth_exact(star_graph(9)).treedepth == 1);
}

TEST_CASE("exact treedepth returns a valid optimal model") {
  for (int n = 1; n <= 6; ++n) {
    for (const Graph& g : test::connected_graphs_up_to_iso(n)) {
      TreedepthResult res = compute_treedepth_exact(g);
      CHECK(is_valid_model(g, res.model, res.treedepth));
      CHECK(res.model.height() == res.treedepth);
      CHECK(res.treedepth == test::naive_treedepth(g));
      CHECK(res.treedepth == test::tree_enumeration_treedepth(g));
    }
  }
}

TEST_CASE("exact solver rejects oversized and disconnected inputs") {
  CHECK_THROWS_AS(compute_treedepth_exact(path_graph(21)), ValidationError);
  CHECK_NOTHROW(compute_treedepth_exact(path_graph(21), 25));
  Graph split({1, 2, 3}, {{1, 2}}, 9);
  CHECK_THROWS_AS(compute_treedepth_exact(split), ValidationError);
}

TEST_CASE("random bounded-treedepth instances come with their witness") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    int t = 1 + static_cast<int>(seed % 4);
    BoundedTreedepthInstance inst = random_bounded_treedepth_graph(t, 14, seed);
    CHECK(inst.graph.node_count() == 14);
    CHECK(inst.graph.is_connected());
    CHECK(is_valid_model(inst.graph, inst.model, t));
    CHECK(is_coherent(inst.graph, inst.model));
  }
  CHECK_THROWS_AS(random_bounded_treedepth_graph(0, 2, 1), ValidationError);
}

TEST_CASE("model text format round-trips") {
  Model m = p7_model();
  Model back = load_model(save_model(m));
  CHECK(back == m);
  CHECK_THROWS_AS(load_model("m 1 1\n"), ParseError);             // missing depth column
  CHECK_THROWS_AS(load_model("m 1 1 0\nm 2 2 0\n"), ParseError);  // two roots
}
