#include "certlab/model.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "certlab/errors.hpp"
#include "certlab/rng.hpp"

namespace certlab {

Model::Model(NodeId root, std::map<NodeId, NodeId> parent, std::map<NodeId, int> depth)
    : root_(root), parent_(std::move(parent)), depth_(std::move(depth)) {
  if (parent_.empty()) throw ValidationError("model has no vertices");
  auto rit = parent_.find(root_);
  if (rit == parent_.end() || rit->second != root_)
    throw ValidationError("model root must map to itself");
  if (depth_.size() != parent_.size())
    throw ValidationError("model parent and depth maps cover different vertex sets");
  for (auto [v, p] : parent_) {
    if (!parent_.count(p))
      throw ValidationError("parent of " + std::to_string(v) + " is not a model vertex");
    if (v != root_ && p == v) throw ValidationError("non-root " + std::to_string(v) + " is its own parent");
    if (v != root_) children_[p].push_back(v);
    children_[v];
    vertices_.push_back(v);
  }
  // Reachability from the root catches parent cycles; the depth law
  // pins every stored depth.
  std::vector<NodeId> order{root_};
  std::set<NodeId> seen{root_};
  for (std::size_t i = 0; i < order.size(); ++i)
    for (NodeId c : children_[order[i]])
      if (seen.insert(c).second) order.push_back(c);
  if (seen.size() != parent_.size()) throw ValidationError("model parent map contains a cycle");
  for (NodeId v : vertices_) {
    auto dit = depth_.find(v);
    if (dit == depth_.end()) throw ValidationError("missing depth for " + std::to_string(v));
    int want = v == root_ ? 0 : depth_.at(parent_.at(v)) + 1;
    if (dit->second != want)
      throw ValidationError("depth of " + std::to_string(v) + " is " + std::to_string(dit->second) +
                            ", expected " + std::to_string(want));
    height_ = std::max(height_, dit->second);
  }
}

Model Model::from_parent_map(NodeId root, const std::map<NodeId, NodeId>& parent) {
  std::map<NodeId, std::vector<NodeId>> children;
  for (auto [v, p] : parent)
    if (v != p) children[p].push_back(v);
  std::map<NodeId, int> depth;
  depth[root] = 0;
  std::vector<NodeId> order{root};
  for (std::size_t i = 0; i < order.size(); ++i)
    for (NodeId c : children[order[i]]) {
      depth[c] = depth[order[i]] + 1;
      order.push_back(c);
    }
  return Model(root, parent, std::move(depth));
}

NodeId Model::parent(NodeId v) const {
  auto it = parent_.find(v);
  if (it == parent_.end()) throw ValidationError("unknown model vertex " + std::to_string(v));
  return it->second;
}

int Model::depth(NodeId v) const {
  auto it = depth_.find(v);
  if (it == depth_.end()) throw ValidationError("unknown model vertex " + std::to_string(v));
  return it->second;
}

const std::vector<NodeId>& Model::children(NodeId v) const {
  auto it = children_.find(v);
  if (it == children_.end()) throw ValidationError("unknown model vertex " + std::to_string(v));
  return it->second;
}

NodeId Model::ancestor_at_depth(NodeId v, int d) const {
  if (d < 0 || d > depth(v)) throw ValidationError("ancestor_at_depth: depth out of range");
  NodeId cur = v;
  while (depth_.at(cur) > d) cur = parent_.at(cur);
  return cur;
}

std::vector<NodeId> Model::ancestors(NodeId v) const {
  std::vector<NodeId> out{v};
  NodeId cur = v;
  while (cur != root_) {
    cur = parent(cur);
    out.push_back(cur);
  }
  return out;
}

std::vector<NodeId> Model::subtree(NodeId v) const {
  std::vector<NodeId> out{v};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (NodeId c : children(out[i])) out.push_back(c);
  std::sort(out.begin(), out.end());
  return out;
}

bool Model::is_ancestor_or_self(NodeId a, NodeId d) const {
  NodeId cur = d;
  int da = depth(a);
  while (depth_.at(cur) > da) cur = parent_.at(cur);
  return cur == a;
}

Model Model::restricted_to(const std::vector<NodeId>& keep) const {
  std::map<NodeId, NodeId> parent;
  std::map<NodeId, int> depth;
  std::set<NodeId> in_set(keep.begin(), keep.end());
  if (!in_set.count(root_)) throw ValidationError("model restriction must keep the root");
  for (NodeId v : keep) {
    NodeId p = parent_.at(v);
    if (!in_set.count(p)) throw ValidationError("model restriction is not parent-closed");
    parent[v] = p;
    depth[v] = depth_.at(v);
  }
  return Model(root_, std::move(parent), std::move(depth));
}

bool Model::operator==(const Model& other) const {
  return root_ == other.root_ && parent_ == other.parent_ && depth_ == other.depth_;
}

bool is_valid_model(const Graph& g, const Model& m, int t) {
  if (m.vertices() != g.nodes())
    throw ValidationError("model vertex set differs from graph node set");
  if (m.height() > t) return false;
  for (auto [a, b] : g.edges())
    if (!m.is_ancestor_or_self(a, b) && !m.is_ancestor_or_self(b, a)) return false;
  return true;
}

namespace {

// Smallest vertex of subtree(w) adjacent to `target`, or 0 if none.
NodeId subtree_adjacency(const Graph& g, const Model& m, NodeId w, NodeId target) {
  for (NodeId x : m.subtree(w))
    if (g.adjacent(x, target)) return x;
  return 0;
}

}  // namespace

bool is_coherent(const Graph& g, const Model& m) {
  for (NodeId w : m.vertices())
    if (w != m.root() && subtree_adjacency(g, m, w, m.parent(w)) == 0) return false;
  return true;
}

Model make_coherent(const Graph& g, Model m) {
  for (;;) {
    NodeId offender = 0;
    for (NodeId w : m.vertices()) {
      if (w == m.root()) continue;
      if (subtree_adjacency(g, m, w, m.parent(w)) == 0) {
        offender = w;
        break;
      }
    }
    if (offender == 0) return m;
    // Deepest strict ancestor of parent(offender) adjacent to the subtree.
    NodeId v = m.parent(offender);
    NodeId attach = 0;
    NodeId cur = v;
    while (cur != m.root()) {
      cur = m.parent(cur);
      if (subtree_adjacency(g, m, offender, cur) != 0) {
        attach = cur;
        break;
      }
    }
    if (attach == 0)
      throw ValidationError("make_coherent: subtree of " + std::to_string(offender) +
                            " has no outside adjacency; graph disconnected?");
    std::map<NodeId, NodeId> parent;
    for (NodeId x : m.vertices()) parent[x] = m.parent(x);
    parent[offender] = attach;
    m = Model::from_parent_map(m.root(), parent);
  }
}

std::map<NodeId, NodeId> coherence_witness(const Graph& g, const Model& m) {
  std::map<NodeId, NodeId> witness;
  for (NodeId w : m.vertices()) {
    if (w == m.root()) continue;
    NodeId x = subtree_adjacency(g, m, w, m.parent(w));
    if (x == 0)
      throw ValidationError("model is not coherent at vertex " + std::to_string(w));
    witness[w] = x;
  }
  return witness;
}

namespace {

using Mask = std::uint64_t;

struct ExactSolver {
  std::vector<NodeId> ids;       // index -> node id
  std::vector<Mask> adj;         // index -> adjacency mask
  std::unordered_map<Mask, std::pair<int, int>> memo;  // mask -> (height, root index)

  std::vector<Mask> components(Mask mask) const {
    std::vector<Mask> out;
    Mask left = mask;
    while (left) {
      Mask comp = left & -left;
      for (;;) {
        Mask grow = comp;
        Mask bits = comp;
        while (bits) {
          int i = std::countr_zero(bits);
          bits &= bits - 1;
          grow |= adj[i] & mask;
        }
        if (grow == comp) break;
        comp = grow;
      }
      out.push_back(comp);
      left &= ~comp;
    }
    return out;
  }

  int solve(Mask mask) {
    if (std::popcount(mask) == 1) return 0;
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second.first;
    int best = 1 << 20, best_root = -1;
    Mask bits = mask;
    while (bits) {
      int v = std::countr_zero(bits);
      bits &= bits - 1;
      Mask rest = mask & ~(Mask(1) << v);
      int worst = 0;
      for (Mask comp : components(rest)) worst = std::max(worst, solve(comp));
      if (1 + worst < best) {
        best = 1 + worst;
        best_root = v;
      }
    }
    memo[mask] = {best, best_root};
    return best;
  }

  void build(Mask mask, NodeId parent_of_root, std::map<NodeId, NodeId>& parent) {
    int root;
    if (std::popcount(mask) == 1) {
      root = std::countr_zero(mask);
    } else {
      solve(mask);
      root = memo.at(mask).second;
    }
    NodeId rid = ids[root];
    parent[rid] = parent_of_root == 0 ? rid : parent_of_root;
    Mask rest = mask & ~(Mask(1) << root);
    for (Mask comp : components(rest)) build(comp, rid, parent);
  }
};

}  // namespace

TreedepthResult compute_treedepth_exact(const Graph& g, int limit) {
  int n = g.node_count();
  if (n < 1) throw ValidationError("treedepth of the empty graph is undefined");
  if (n > limit)
    throw ValidationError("exact treedepth limited to " + std::to_string(limit) + " nodes, got " +
                          std::to_string(n));
  if (!g.is_connected()) throw ValidationError("exact treedepth requires a connected graph");
  ExactSolver s;
  s.ids = g.nodes();
  std::map<NodeId, int> index;
  for (int i = 0; i < n; ++i) index[s.ids[i]] = i;
  s.adj.assign(n, 0);
  for (auto [a, b] : g.edges()) {
    s.adj[index[a]] |= Mask(1) << index[b];
    s.adj[index[b]] |= Mask(1) << index[a];
  }
  Mask all = n == 64 ? ~Mask(0) : (Mask(1) << n) - 1;
  int td = s.solve(all);
  std::map<NodeId, NodeId> parent;
  s.build(all, 0, parent);
  NodeId root = 0;
  for (auto [v, p] : parent)
    if (v == p) root = v;
  return {td, Model::from_parent_map(root, parent)};
}

BoundedTreedepthInstance random_bounded_treedepth_graph(int t, int n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("random_bounded_treedepth_graph needs n >= 1");
  if (t < 0) throw ValidationError("random_bounded_treedepth_graph needs t >= 0");
  if (t == 0 && n > 1)
    throw ValidationError("infeasible: a height-0 model fits only a single vertex");
  Rng rng(seed);
  std::vector<NodeId> ids = draw_distinct_ids(n, default_id_bound(n), rng);
  std::map<NodeId, NodeId> parent;
  std::map<NodeId, int> depth;
  parent[ids[0]] = ids[0];
  depth[ids[0]] = 0;
  std::vector<NodeId> eligible;  // placed vertices with depth < t
  if (t > 0) eligible.push_back(ids[0]);
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::set<std::pair<NodeId, NodeId>> present;
  auto add = [&](NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    if (present.insert({a, b}).second) edges.emplace_back(a, b);
  };
  for (int i = 1; i < n; ++i) {
    NodeId p = eligible[rng.below_int(static_cast<int>(eligible.size()))];
    parent[ids[i]] = p;
    depth[ids[i]] = depth[p] + 1;
    if (depth[ids[i]] < t) eligible.push_back(ids[i]);
    add(ids[i], p);
  }
  Model m(ids[0], parent, depth);
  // Extra edges only between ancestor-descendant pairs keep the model valid.
  for (int i = 1; i < n; ++i) {
    NodeId cur = m.parent(ids[i]);
    while (cur != m.root()) {
      cur = m.parent(cur);
      if (rng.chance(0.3)) add(ids[i], cur);
    }
  }
  Graph g(ids, edges, default_id_bound(n));
  return {std::move(g), std::move(m)};
}

Model load_model(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::map<NodeId, NodeId> parent;
  std::map<NodeId, int> depth;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string tag;
    NodeId v, p;
    int d;
    if (!(ls >> tag >> v >> p >> d) || tag != "m")
      throw ParseError("line " + std::to_string(lineno) + ": expected 'm <node> <parent> <depth>'");
    std::string rest;
    if (ls >> rest) throw ParseError("line " + std::to_string(lineno) + ": trailing token");
    if (parent.count(v)) throw ParseError("line " + std::to_string(lineno) + ": repeated vertex");
    parent[v] = p;
    depth[v] = d;
  }
  if (parent.empty()) throw ParseError("model file has no 'm' lines");
  NodeId root = 0;
  int roots = 0;
  for (auto [v, p] : parent)
    if (v == p) {
      root = v;
      ++roots;
    }
  if (roots != 1) throw ParseError("model file must have exactly one root (parent == self)");
  return Model(root, std::move(parent), std::move(depth));
}

std::string save_model(const Model& m) {
  std::ostringstream out;
  for (NodeId v : m.vertices())
    out << "m " << v << " " << m.parent(v) << " " << m.depth(v) << "\n";
  return out.str();
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_model(buf.str());
}

void save_model_file(const Model& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write model file: " + path);
  out << save_model(m);
}

}  // namespace certlab
