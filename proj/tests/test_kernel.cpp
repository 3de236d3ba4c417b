#include <doctest.h>

#include <algorithm>
#include <set>

#include "certlab/errors.hpp"
#include "certlab/kernel.hpp"
#include "certlab/model.hpp"
#include "support/corpus.hpp"

using namespace certlab;

namespace {

Model p7_model() {
  return Model::from_parent_map(
      4, {{4, 4}, {2, 4}, {6, 4}, {1, 2}, {3, 2}, {5, 6}, {7, 6}});
}

Reduction reduce_exact(const Graph& g, int k) {
  TreedepthResult res = compute_treedepth_exact(g);
  return k_reduce(g, make_coherent(g, res.model), k);
}

}  // namespace

TEST_CASE("ancestor vectors read adjacency towards each ancestor depth") {
  Graph p7 = path_graph(7);
  Model m = p7_model();
  CHECK(ancestor_vector(p7, m, 4).empty());
  CHECK(ancestor_vector(p7, m, 2) == std::vector<bool>{false});  // 2 !~ 4... adjacency 2-4 absent
  CHECK(ancestor_vector(p7, m, 3) == std::vector<bool>{true, true});  // 3 ~ 4 and 3 ~ 2
  CHECK(ancestor_vector(p7, m, 1) == std::vector<bool>{false, true});
  CHECK(ancestor_vector(p7, m, 5) == std::vector<bool>{true, true});
}

TEST_CASE("type codes round-trip their root label and ignore sibling order") {
  std::vector<bool> anc = {true, false};
  TypeCode a = make_type_code(anc, {"(1|)", "(0|)"});
  TypeCode b = make_type_code(anc, {"(0|)", "(1|)"});
  CHECK(a == b);
  auto root = type_code_root_vector(a);
  REQUIRE(root.has_value());
  CHECK(*root == anc);
  CHECK_FALSE(type_code_root_vector("junk").has_value());
  CHECK_FALSE(type_code_root_vector("").has_value());

  // distinct labels or child multisets give distinct codes
  CHECK(make_type_code({true}, {}) != make_type_code({false}, {}));
  CHECK(make_type_code(anc, {"(1|)"}) != make_type_code(anc, {"(1|)", "(1|)"}));
}

TEST_CASE("computed types are invariant under id relabeling") {
  Graph p7 = path_graph(7);
  Model m = p7_model();
  // same structure shifted by 10
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (auto [a, b] : p7.edges()) edges.emplace_back(a + 10, b + 10);
  Graph shifted({11, 12, 13, 14, 15, 16, 17}, edges, 49);
  Model mshift = Model::from_parent_map(
      14, {{14, 14}, {12, 14}, {16, 14}, {11, 12}, {13, 12}, {15, 16}, {17, 16}});
  for (NodeId v : p7.nodes()) CHECK(compute_type(p7, m, v) == compute_type(shifted, mshift, v + 10));
  // sibling subtrees of the path model are mirror images: same type
  CHECK(compute_type(p7, m, 2) == compute_type(p7, m, 6));
  CHECK(compute_type(p7, m, 1) == compute_type(p7, m, 7));
  CHECK(compute_type(p7, m, 3) == compute_type(p7, m, 5));
}

TEST_CASE("type bound follows the doubly exponential recurrence") {
  CHECK(type_bound(1, 1, 1).value() == 2);
  CHECK(type_bound(1, 1, 0).value() == 4);
  CHECK(type_bound(2, 1, 0).value() == 9);
  CHECK(type_bound(1, 2, 2).value() == 4);
  CHECK(type_bound(1, 2, 1).value() == 32);
  CHECK(type_bound(1, 2, 0).value() == 4294967296ULL);
  CHECK(type_bound(2, 2, 1).value() == 162);

  // topmost level equals 2^t for every k
  for (int k = 1; k <= 3; ++k)
    for (int t = 0; t <= 4; ++t) CHECK(type_bound(k, t, t).value() == (1LL << t));

  CHECK(type_bound(1, 4, 1).is_saturated());
  CHECK(type_bound(1, 4, 1).at_least(1'000'000'000ULL));
  CHECK_FALSE(type_bound(1, 1, 1).at_least(3));
  CHECK(type_bound(1, 1, 0).at_least(4));
  CHECK_THROWS_AS(type_bound(0, 1, 0), ValidationError);
  CHECK_THROWS_AS(type_bound(1, 1, 2), ValidationError);
}

TEST_CASE("k_reduce on the 7-path with k = 1 matches the hand computation") {
  Graph p7 = path_graph(7);
  Reduction r = k_reduce(p7, p7_model(), 1);
  CHECK(r.k == 1);
  // the two depth-1 subtrees are mirror twins; their leaves differ in
  // type (inner leaf sees both ancestors, outer leaf only its parent),
  // so the only pruning removes the larger-id twin subtree
  CHECK(r.kernel.node_count() == 4);
  CHECK(r.pruned_roots == std::set<NodeId>{6});
  CHECK(r.deleted == std::set<NodeId>{5, 6, 7});
  CHECK(r.prune_log.size() == 1);
  CHECK(r.prune_log[0].pruned_root == 6);
  CHECK(r.prune_log[0].depth == 1);
  CHECK(r.type_table.size() == 4);
  CHECK(r.end_type_code(6) == r.end_type_code(2));  // twin subtrees, equal end types
  CHECK(is_valid_model(r.kernel, r.kernel_model, r.model.height()));
  CHECK(end_type_consistency_check(r));
  CHECK(pruning_count_check(r));
}

TEST_CASE("k_reduce on a star keeps exactly k twin leaves") {
  Graph star = star_graph(5);
  Model m = Model::from_parent_map(1, {{1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}, {6, 1}});
  for (int k = 1; k <= 3; ++k) {
    Reduction r = k_reduce(star, m, k);
    CHECK(r.kernel.node_count() == 1 + k);
    CHECK(r.pruned_roots.size() == 5 - static_cast<std::size_t>(k));
    // largest ids go first, smallest k survive
    for (NodeId leaf = 2; leaf <= 1 + k; ++leaf) CHECK(r.survives(leaf));
    CHECK(end_type_consistency_check(r));
    CHECK(pruning_count_check(r));
  }
  // k = 5: nothing to prune
  Reduction r5 = k_reduce(star, m, 5);
  CHECK(r5.kernel.node_count() == 6);
  CHECK(r5.prune_log.empty());
}

TEST_CASE("reduction invariants hold across random bounded-treedepth instances") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    int t = 1 + static_cast<int>(seed % 3);
    int k = 1 + static_cast<int>(seed % 2);
    BoundedTreedepthInstance inst = random_bounded_treedepth_graph(t, 13, seed);
    Model m = make_coherent(inst.graph, inst.model);
    Reduction r = k_reduce(inst.graph, m, k);
    CHECK(end_type_consistency_check(r));
    CHECK(pruning_count_check(r));
    for (std::size_t i = 1; i < r.prune_log.size(); ++i)
      CHECK(r.prune_log[i - 1].depth >= r.prune_log[i].depth);
    CHECK(is_valid_model(r.kernel, r.kernel_model, t));
    CHECK(is_coherent(r.kernel, r.kernel_model));
    // end types are drawn from the table, survivors plus deleted cover g
    for (NodeId v : inst.graph.nodes()) {
      CHECK(r.end_type.count(v) == 1);
      CHECK(r.end_type.at(v) < static_cast<int>(r.type_table.size()));
      CHECK(r.survives(v) == (r.deleted.count(v) == 0));
    }
    // reducing the kernel again is a fixed point
    Reduction again = k_reduce(r.kernel, r.kernel_model, k);
    CHECK(again.prune_log.empty());
    CHECK(again.kernel.node_count() == r.kernel.node_count());

    // distinct end types at each depth never exceed the recurrence bound
    std::map<int, std::set<int>> types_at_depth;
    for (NodeId v : inst.graph.nodes()) types_at_depth[m.depth(v)].insert(r.end_type.at(v));
    for (auto& [d, types] : types_at_depth) {
      ComparableBound bound = type_bound(k, m.height(), d);
      if (!bound.is_saturated()) CHECK_FALSE(bound.value() < types.size());
    }
  }
}

TEST_CASE("saved reductions list every vertex and the type table") {
  Reduction r = reduce_exact(path_graph(7), 1);
  std::string text = save_reduction(r);
  // one line per original vertex plus one per table entry
  std::size_t lines = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  CHECK(lines == 7 + r.type_table.size());
  for (std::size_t i = 0; i < r.type_table.size(); ++i)
    CHECK(text.find("t " + std::to_string(i) + " ") != std::string::npos);
}

TEST_CASE("k_reduce requires a coherent model") {
  Graph star = star_graph(4);
  Model hang = Model::from_parent_map(1, {{1, 1}, {2, 1}, {3, 2}, {4, 3}, {5, 4}});
  CHECK_THROWS_AS(k_reduce(star, hang, 1), ValidationError);
}
