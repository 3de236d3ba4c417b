#include "support/corpus.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "certlab/errors.hpp"

namespace certlab::test {
namespace {

// Two rounds of neighborhood color refinement, serialized into a string.
// Equal strings are necessary (not sufficient) for isomorphism, so the
// value is only used to bucket candidates before the exact check.
std::string iso_invariant(const Graph& g) {
  std::map<NodeId, std::string> color;
  for (NodeId v : g.nodes()) color[v] = std::to_string(g.degree(v));
  for (int round = 0; round < 2; ++round) {
    std::map<NodeId, std::string> next;
    for (NodeId v : g.nodes()) {
      std::vector<std::string> around;
      around.reserve(g.neighbors(v).size());
      for (NodeId u : g.neighbors(v)) around.push_back(color.at(u));
      std::sort(around.begin(), around.end());
      std::string s = color.at(v) + "(";
      for (const std::string& c : around) {
        s += c;
        s += ',';
      }
      s += ')';
      next[v] = std::move(s);
    }
    color = std::move(next);
  }
  std::vector<std::string> all;
  all.reserve(color.size());
  for (auto& [v, c] : color) all.push_back(std::move(c));
  std::sort(all.begin(), all.end());
  std::string out =
      std::to_string(g.node_count()) + "/" + std::to_string(g.edge_count()) + ":";
  for (const std::string& c : all) {
    out += c;
    out += ';';
  }
  return out;
}

bool isomorphic(const Graph& a, const Graph& b) {
  if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return false;
  int n = a.node_count();
  std::vector<NodeId> order = a.nodes();
  std::sort(order.begin(), order.end(), [&](NodeId x, NodeId y) {
    if (a.degree(x) != a.degree(y)) return a.degree(x) > a.degree(y);
    return x < y;
  });
  const std::vector<NodeId>& bn = b.nodes();
  std::map<NodeId, NodeId> assign;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::function<bool(int)> place = [&](int i) -> bool {
    if (i == n) return true;
    NodeId va = order[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      NodeId vb = bn[static_cast<std::size_t>(j)];
      if (a.degree(va) != b.degree(vb)) continue;
      bool ok = true;
      for (int p = 0; p < i && ok; ++p) {
        NodeId pa = order[static_cast<std::size_t>(p)];
        if (a.adjacent(va, pa) != b.adjacent(vb, assign.at(pa))) ok = false;
      }
      if (!ok) continue;
      used[static_cast<std::size_t>(j)] = 1;
      assign[va] = vb;
      if (place(i + 1)) return true;
      used[static_cast<std::size_t>(j)] = 0;
      assign.erase(va);
    }
    return false;
  };
  return place(0);
}

}  // namespace

std::vector<Graph> connected_graphs_up_to_iso(int n) {
  if (n < 1 || n > 8) throw ValidationError("corpus enumeration supports 1..8 nodes");
  std::vector<Graph> reps;
  reps.push_back(Graph({1}, {}, default_id_bound(1)));
  for (int size = 2; size <= n; ++size) {
    std::vector<Graph> next;
    std::map<std::string, std::vector<std::size_t>> buckets;
    int base_n = size - 1;
    // Every connected graph on `size` nodes arises from a connected graph
    // on size-1 nodes by attaching one more vertex to a nonempty neighbor
    // set (delete any non-cut vertex to see this).
    for (const Graph& base : reps) {
      for (unsigned mask = 1; mask < (1u << base_n); ++mask) {
        std::vector<NodeId> nodes = base.nodes();
        nodes.push_back(size);
        std::vector<std::pair<NodeId, NodeId>> edges = base.edges();
        for (int i = 0; i < base_n; ++i)
          if (mask & (1u << i)) edges.emplace_back(i + 1, size);
        Graph cand(std::move(nodes), std::move(edges), default_id_bound(size));
        std::string inv = iso_invariant(cand);
        std::vector<std::size_t>& bucket = buckets[inv];
        bool dup = false;
        for (std::size_t idx : bucket) {
          if (isomorphic(cand, next[idx])) {
            dup = true;
            break;
          }
        }
        if (!dup) {
          bucket.push_back(next.size());
          next.push_back(std::move(cand));
        }
      }
    }
    reps = std::move(next);
  }
  return reps;
}

namespace {

int naive_td_mask(const std::vector<std::vector<int>>& adj, unsigned mask,
                  std::map<unsigned, int>& memo) {
  int count = __builtin_popcount(mask);
  if (count == 1) return 0;
  auto hit = memo.find(mask);
  if (hit != memo.end()) return hit->second;
  int n = static_cast<int>(adj.size());
  // component of the lowest set bit
  unsigned comp = mask & static_cast<unsigned>(-static_cast<int>(mask));
  unsigned frontier = comp;
  while (frontier != 0) {
    int v = __builtin_ctz(frontier);
    frontier &= frontier - 1;
    for (int u : adj[static_cast<std::size_t>(v)]) {
      unsigned bit = 1u << u;
      if ((mask & bit) && !(comp & bit)) {
        comp |= bit;
        frontier |= bit;
      }
    }
  }
  int result;
  if (comp != mask) {
    result = std::max(naive_td_mask(adj, comp, memo), naive_td_mask(adj, mask & ~comp, memo));
  } else {
    result = INT_MAX;
    for (int v = 0; v < n; ++v) {
      if (!(mask & (1u << v))) continue;
      result = std::min(result, 1 + naive_td_mask(adj, mask & ~(1u << v), memo));
    }
  }
  memo[mask] = result;
  return result;
}

}  // namespace

int naive_treedepth(const Graph& g) {
  int n = g.node_count();
  if (n < 1 || n > 16) throw ValidationError("vertex-removal oracle supports 1..16 nodes");
  const std::vector<NodeId>& verts = g.nodes();
  auto index_of = [&](NodeId v) {
    return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
  };
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (auto [a, b] : g.edges()) {
    adj[static_cast<std::size_t>(index_of(a))].push_back(index_of(b));
    adj[static_cast<std::size_t>(index_of(b))].push_back(index_of(a));
  }
  std::map<unsigned, int> memo;
  return naive_td_mask(adj, (n == 32 ? ~0u : (1u << n) - 1), memo);
}

namespace {

std::vector<std::pair<int, int>> decode_pruefer(const std::vector<int>& code, int n) {
  std::vector<int> deg(static_cast<std::size_t>(n), 1);
  for (int c : code) deg[static_cast<std::size_t>(c)]++;
  std::set<int> leaves;
  for (int i = 0; i < n; ++i)
    if (deg[static_cast<std::size_t>(i)] == 1) leaves.insert(i);
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(n - 1));
  for (int c : code) {
    int leaf = *leaves.begin();
    leaves.erase(leaves.begin());
    edges.emplace_back(leaf, c);
    if (--deg[static_cast<std::size_t>(c)] == 1) leaves.insert(c);
  }
  int a = *leaves.begin();
  leaves.erase(leaves.begin());
  edges.emplace_back(a, *leaves.begin());
  return edges;
}

}  // namespace

int tree_enumeration_treedepth(const Graph& g) {
  int n = g.node_count();
  if (n < 1 || n > 6) throw ValidationError("tree enumeration oracle supports 1..6 nodes");
  if (n == 1) return 0;
  const std::vector<NodeId>& verts = g.nodes();
  auto index_of = [&](NodeId v) {
    return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
  };
  std::vector<std::pair<int, int>> gedges;
  for (auto [a, b] : g.edges()) gedges.emplace_back(index_of(a), index_of(b));

  int best = INT_MAX;
  std::vector<int> code(static_cast<std::size_t>(std::max(0, n - 2)), 0);
  while (true) {
    std::vector<std::pair<int, int>> tedges = decode_pruefer(code, n);
    std::vector<std::vector<int>> tadj(static_cast<std::size_t>(n));
    for (auto [a, b] : tedges) {
      tadj[static_cast<std::size_t>(a)].push_back(b);
      tadj[static_cast<std::size_t>(b)].push_back(a);
    }
    for (int root = 0; root < n; ++root) {
      std::vector<int> parent(static_cast<std::size_t>(n), -1);
      std::vector<int> depth(static_cast<std::size_t>(n), -1);
      std::vector<int> queue = {root};
      depth[static_cast<std::size_t>(root)] = 0;
      for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        int v = queue[qi];
        for (int u : tadj[static_cast<std::size_t>(v)]) {
          if (depth[static_cast<std::size_t>(u)] >= 0) continue;
          depth[static_cast<std::size_t>(u)] = depth[static_cast<std::size_t>(v)] + 1;
          parent[static_cast<std::size_t>(u)] = v;
          queue.push_back(u);
        }
      }
      auto ancestor_related = [&](int a, int b) {
        if (depth[static_cast<std::size_t>(a)] < depth[static_cast<std::size_t>(b)])
          std::swap(a, b);
        while (depth[static_cast<std::size_t>(a)] > depth[static_cast<std::size_t>(b)])
          a = parent[static_cast<std::size_t>(a)];
        return a == b;
      };
      bool valid = true;
      for (auto [a, b] : gedges)
        if (!ancestor_related(a, b)) {
          valid = false;
          break;
        }
      if (!valid) continue;
      int height = 0;
      for (int v = 0; v < n; ++v) height = std::max(height, depth[static_cast<std::size_t>(v)]);
      best = std::min(best, height);
    }
    if (code.empty()) break;
    int i = static_cast<int>(code.size()) - 1;
    while (i >= 0) {
      if (++code[static_cast<std::size_t>(i)] < n) break;
      code[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return best;
}

}  // namespace certlab::test
