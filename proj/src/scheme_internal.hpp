#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "certlab/certificate.hpp"
#include "certlab/graph.hpp"
#include "certlab/model.hpp"
#include "certlab/scheme.hpp"

namespace certlab::detail {

struct Widths {
  int id = 0;     // enough for any node id up to the id bound
  int count = 0;  // enough for any count up to n
};

Widths widths_of(const Graph& g);

struct BfsTree {
  std::map<NodeId, NodeId> parent;  // root maps to itself
  std::map<NodeId, int> dist;
};

// Deterministic BFS over sorted adjacency; covers the component of root.
BfsTree bfs_tree(const Graph& g, NodeId root);

// Spanning tree field triple. A prefix distinguishes several trees inside
// one certificate ("" for the primary one).
void add_tree_fields(Certificate& c, NodeId parent, NodeId root, int dist, Widths wd,
                     const std::string& prefix = "");

struct TreeClaim {
  NodeId parent = 0;
  NodeId root = 0;
  std::int64_t dist = 0;
};

std::optional<TreeClaim> read_tree_fields(const Certificate& c, const std::string& prefix = "");

// Exactly the given field names (any order).
bool has_exact_fields(const Certificate& c, std::vector<std::string> expect);

// BFS tree covering all of g, or CannotCertifyError.
BfsTree spanning_tree_of(const Graph& g, NodeId root);

// Adds delta (mod 2^width) to every Int field of that name, including in
// sub-certificates. Used to build wrong-but-plausible certificates.
void mutate_int_field(CertMap& certs, const std::string& name, std::uint64_t delta);

// Distance-1 checks for one spanning tree layer: root iff dist 0, parent
// is a neighbor one step closer, everyone agrees on the root id. The
// claim accessor returns the neighbor's claim for the same tree (or
// nothing, which rejects).
template <typename ClaimOf>
bool check_tree_layer(const LocalView& view, const TreeClaim& mine, ClaimOf&& claim_of) {
  if (mine.dist < 0) return false;
  if (mine.dist == 0) {
    if (mine.root != view.self_id || mine.parent != view.self_id) return false;
  } else {
    if (mine.root == view.self_id) return false;
    if (!view.has_neighbor(mine.parent)) return false;
    auto pc = claim_of(mine.parent);
    if (!pc) return false;
    if (pc->dist != mine.dist - 1 || pc->root != mine.root) return false;
  }
  for (const auto& [uid, ucert] : view.neighbors) {
    auto uc = claim_of(uid);
    if (!uc || uc->root != mine.root) return false;
  }
  return true;
}

}  // namespace certlab::detail
