#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "certlab/graph.hpp"
#include "certlab/model.hpp"

namespace certlab {

// Canonical, identifier-free code of a rooted labeled subtree. Two
// vertices have equal codes iff their subtrees are isomorphic as rooted
// trees labeled with ancestor vectors.
using TypeCode = std::string;

// Bit j is set iff v is adjacent to its ancestor at depth j. Length is
// depth(v), so the root has the empty vector.
std::vector<bool> ancestor_vector(const Graph& g, const Model& m, NodeId v);

// Code built from a root label and child codes; children are sorted, so
// the result is invariant under sibling order.
TypeCode make_type_code(const std::vector<bool>& anc, std::vector<TypeCode> children);

// Root label of a well-formed code; nullopt if malformed.
std::optional<std::vector<bool>> type_code_root_vector(const TypeCode& code);

// Code of v's subtree in (g, m), every node labeled with its ancestor
// vector. Invariant under id relabeling and sibling reordering.
TypeCode compute_type(const Graph& g, const Model& m, NodeId v);

// Exact big integer, or "saturated": provably larger than any count this
// project ever compares against (the recurrence grows as a tower).
class ComparableBound {
 public:
  static ComparableBound exact(boost::multiprecision::cpp_int v);
  static ComparableBound saturated();
  bool is_saturated() const { return saturated_; }
  const boost::multiprecision::cpp_int& value() const;  // exact bounds only
  bool at_least(unsigned long long count) const;
  std::string str() const;

 private:
  bool saturated_ = false;
  boost::multiprecision::cpp_int value_{0};
};

// Possible end types of a depth-d vertex under height bound t and
// pruning parameter k: value_t = 2^t, value_d = 2^d * (k+1)^value_{d+1}.
// Requires k >= 1 and 0 <= d <= t.
ComparableBound type_bound(int k, int t, int d);

struct PruneEvent {
  NodeId pruned_root;
  int depth;
};

struct Reduction {
  Graph original;
  Model model;  // coherent model the reduction ran on
  Graph kernel;
  Model kernel_model;
  int k = 0;
  std::set<NodeId> pruned_roots;         // roots of removed subtrees
  std::set<NodeId> deleted;              // all removed vertices
  std::vector<TypeCode> type_table;      // sorted distinct end types
  std::map<NodeId, int> end_type;        // every original vertex -> table index
  std::vector<PruneEvent> prune_log;     // non-increasing depth

  bool survives(NodeId v) const { return deleted.count(v) == 0; }
  const TypeCode& end_type_code(NodeId v) const { return type_table.at(end_type.at(v)); }
};

// Applies valid prunings (a vertex with more than k same-type children
// loses one of those subtrees) deepest first until none applies.
// Deterministic tie-breaking: deepest pruned root first, then smallest
// parent id, then smallest type code; within a group the largest-id
// children are deleted, keeping the k smallest. The end type of a
// deleted vertex is its type at deletion time; survivors keep their
// final type. Requires a coherent valid model.
Reduction k_reduce(const Graph& g, const Model& m, int k);

// Every vertex's recorded end type equals the code rebuilt from its
// ancestor vector and the end types of its non-pruned children.
bool end_type_consistency_check(const Reduction& r);

// For every pruned root, its parent retains exactly k non-pruned
// children of the pruned root's end type, and no parent retains more
// than k non-pruned children of any one end type.
bool pruning_count_check(const Reduction& r);

// Per vertex '<id> <depth> <pruned> <deleted> <end-type-index>' lines,
// then 't <index> <canonical code>' table lines.
std::string save_reduction(const Reduction& r);

}  // namespace certlab
