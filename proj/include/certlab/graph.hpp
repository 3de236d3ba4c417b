#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace certlab {

// Positive vertex identifier, bounded by Graph::id_bound().
using NodeId = int;

// Finite simple undirected graph with explicit vertex identifiers.
// Invariants enforced at construction: ids in [1, id_bound], no self
// loops, no duplicate edges, edge endpoints present. Connectivity is a
// contract of load_graph and the generators, not of the type itself;
// induced subgraphs may be disconnected.
class Graph {
 public:
  Graph() = default;
  Graph(std::vector<NodeId> nodes, std::vector<std::pair<NodeId, NodeId>> edges,
        long long id_bound);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int edge_count() const { return edge_count_; }
  const std::vector<NodeId>& nodes() const { return nodes_; }
  bool has_node(NodeId v) const { return adj_.count(v) != 0; }
  const std::vector<NodeId>& neighbors(NodeId v) const;  // sorted
  int degree(NodeId v) const { return static_cast<int>(neighbors(v).size()); }
  bool adjacent(NodeId a, NodeId b) const;
  std::vector<std::pair<NodeId, NodeId>> edges() const;  // a < b, sorted
  long long id_bound() const { return id_bound_; }
  bool is_connected() const;

  // Same node set, edge set and id bound.
  bool operator==(const Graph& other) const;

 private:
  std::vector<NodeId> nodes_;                  // sorted
  std::map<NodeId, std::vector<NodeId>> adj_;  // sorted neighbor lists
  long long id_bound_ = 0;
  int edge_count_ = 0;
};

// Identifier range used when none is stated explicitly: n^exponent.
long long default_id_bound(int n, int id_exponent = 2);

// Text format: '#' starts a comment, one header line 'p <n> <m>', then
// n lines 'v <id>' and m lines 'e <a> <b>' in any order. Ids must lie in
// [1, n^id_exponent]. The loaded graph must be connected.
Graph load_graph(const std::string& text, int id_exponent = 2);
std::string save_graph(const Graph& g);
Graph load_graph_file(const std::string& path, int id_exponent = 2);
void save_graph_file(const Graph& g, const std::string& path);

// Induced subgraph on `keep` (every id must exist in g). Connectivity is
// not re-enforced on the result.
Graph induced_subgraph(const Graph& g, const std::vector<NodeId>& keep);

// Deterministic constructions with ids 1..n (star: center 1).
Graph path_graph(int n);
Graph cycle_graph(int n);
Graph complete_graph(int n);
Graph star_graph(int leaves);

// Random connected graph: a random spanning tree plus random extra edges.
// Ids are drawn without replacement from [1, n^2].
Graph random_connected_graph(int n, std::uint64_t seed);

class Rng;

// n distinct ids from [1, bound], in random order.
std::vector<NodeId> draw_distinct_ids(int n, long long bound, Rng& rng);

}  // namespace certlab
