#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "certlab/graph.hpp"

namespace certlab {

// Rooted tree on a vertex set, with cached depths. depth(root) = 0;
// height = number of edges on the longest root-leaf path, so a single
// vertex has height 0. Construction validates the structure: the parent
// map must be acyclic with parent[root] == root, and every depth must be
// parent's depth + 1 (0 at the root).
class Model {
 public:
  Model() = default;
  Model(NodeId root, std::map<NodeId, NodeId> parent, std::map<NodeId, int> depth);

  // Depths derived from the parent map.
  static Model from_parent_map(NodeId root, const std::map<NodeId, NodeId>& parent);

  NodeId root() const { return root_; }
  NodeId parent(NodeId v) const;  // root maps to itself
  int depth(NodeId v) const;
  int height() const { return height_; }
  int size() const { return static_cast<int>(vertices_.size()); }
  const std::vector<NodeId>& vertices() const { return vertices_; }  // sorted
  const std::vector<NodeId>& children(NodeId v) const;               // sorted
  bool has(NodeId v) const { return parent_.count(v) != 0; }

  NodeId ancestor_at_depth(NodeId v, int d) const;  // requires d <= depth(v)
  std::vector<NodeId> ancestors(NodeId v) const;    // v, parent(v), ..., root
  std::vector<NodeId> subtree(NodeId v) const;      // sorted
  bool is_ancestor_or_self(NodeId a, NodeId d) const;

  // Restriction to `keep`; keep must contain the root and be closed
  // under taking parents.
  Model restricted_to(const std::vector<NodeId>& keep) const;

  bool operator==(const Model& other) const;

 private:
  NodeId root_ = 0;
  std::map<NodeId, NodeId> parent_;
  std::map<NodeId, int> depth_;
  std::map<NodeId, std::vector<NodeId>> children_;
  std::vector<NodeId> vertices_;
  int height_ = 0;
};

// True iff m covers exactly g's nodes, every edge of g joins an
// ancestor-descendant pair of m, and height(m) <= t. Coverage mismatch
// throws; a malformed Model cannot be constructed in the first place.
bool is_valid_model(const Graph& g, const Model& m, int t);

// Every non-root subtree contains a vertex adjacent to the parent of the
// subtree's root.
bool is_coherent(const Graph& g, const Model& m);

// Reattaches offending subtrees to the lowest ancestor that has an
// adjacency into the subtree, until coherent. Requires a valid model of
// the connected graph g; the height never increases.
Model make_coherent(const Graph& g, Model m);

// For each non-root v: the smallest vertex in v's subtree adjacent to
// parent(v). Throws ValidationError if the model is not coherent.
std::map<NodeId, NodeId> coherence_witness(const Graph& g, const Model& m);

struct TreedepthResult {
  int treedepth = 0;
  Model model;
};

// Exact minimum-height model via recursion over connected vertex subsets
// with memoization. Requires a connected graph with at most `limit`
// nodes (default 20).
TreedepthResult compute_treedepth_exact(const Graph& g, int limit = 20);

struct BoundedTreedepthInstance {
  Graph graph;
  Model model;
};

// Random rooted tree of height <= t on n nodes, all tree edges present in
// the graph plus random extra ancestor-descendant edges. The returned
// model is therefore valid and coherent for the returned graph. Ids are
// drawn from [1, n^2]. Throws ValidationError when t = 0 and n > 1.
BoundedTreedepthInstance random_bounded_treedepth_graph(int t, int n, std::uint64_t seed);

// Text format: 'm <node> <parent> <depth>' lines, '#' comments.
Model load_model(const std::string& text);
std::string save_model(const Model& m);
Model load_model_file(const std::string& path);
void save_model_file(const Model& m, const std::string& path);

}  // namespace certlab
