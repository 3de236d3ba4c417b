#include "certlab/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "certlab/errors.hpp"
#include "certlab/rng.hpp"

namespace certlab {

Graph::Graph(std::vector<NodeId> nodes, std::vector<std::pair<NodeId, NodeId>> edges,
             long long id_bound)
    : nodes_(std::move(nodes)), id_bound_(id_bound) {
  std::sort(nodes_.begin(), nodes_.end());
  if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end())
    throw ValidationError("duplicate node id");
  for (NodeId v : nodes_) {
    if (v < 1) throw ValidationError("node id " + std::to_string(v) + " is not positive");
    if (static_cast<long long>(v) > id_bound_)
      throw ValidationError("node id " + std::to_string(v) + " exceeds id bound " +
                            std::to_string(id_bound_));
    adj_[v];
  }
  for (auto [a, b] : edges) {
    if (a == b) throw ValidationError("self loop at node " + std::to_string(a));
    auto ia = adj_.find(a), ib = adj_.find(b);
    if (ia == adj_.end() || ib == adj_.end())
      throw ValidationError("edge endpoint " + std::to_string(ia == adj_.end() ? a : b) +
                            " is not a declared node");
    ia->second.push_back(b);
    ib->second.push_back(a);
  }
  for (auto& [v, nb] : adj_) {
    std::sort(nb.begin(), nb.end());
    if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
      throw ValidationError("duplicate edge at node " + std::to_string(v));
  }
  edge_count_ = static_cast<int>(edges.size());
}

const std::vector<NodeId>& Graph::neighbors(NodeId v) const {
  auto it = adj_.find(v);
  if (it == adj_.end()) throw ValidationError("unknown node " + std::to_string(v));
  return it->second;
}

bool Graph::adjacent(NodeId a, NodeId b) const {
  const auto& nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edge_count_);
  for (const auto& [v, nb] : adj_)
    for (NodeId u : nb)
      if (v < u) out.emplace_back(v, u);
  return out;
}

bool Graph::is_connected() const {
  if (nodes_.empty()) return false;
  std::set<NodeId> seen{nodes_.front()};
  std::vector<NodeId> stack{nodes_.front()};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (NodeId u : neighbors(v))
      if (seen.insert(u).second) stack.push_back(u);
  }
  return seen.size() == nodes_.size();
}

bool Graph::operator==(const Graph& other) const {
  return nodes_ == other.nodes_ && adj_ == other.adj_ && id_bound_ == other.id_bound_;
}

long long default_id_bound(int n, int id_exponent) {
  if (n < 1 || id_exponent < 1) throw ValidationError("id bound needs n >= 1 and exponent >= 1");
  long long b = 1;
  for (int i = 0; i < id_exponent; ++i) b *= n;
  return b;
}

namespace {

std::vector<std::string> content_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    lines.push_back(line);
  }
  return lines;
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

Graph load_graph(const std::string& text, int id_exponent) {
  auto lines = content_lines(text);
  int n = -1, m = -1;
  std::vector<NodeId> nodes;
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    std::istringstream ls(lines[i]);
    std::string tag;
    ls >> tag;
    auto fail = [&](const std::string& what) {
      throw ParseError("line " + std::to_string(i + 1) + ": " + what);
    };
    if (tag == "p") {
      if (n >= 0) fail("repeated 'p' header");
      if (!(ls >> n >> m) || n < 1 || m < 0) fail("expected 'p <n> <m>'");
    } else if (tag == "v") {
      NodeId v;
      if (n < 0) fail("'v' before 'p' header");
      if (!(ls >> v)) fail("expected 'v <id>'");
      nodes.push_back(v);
    } else if (tag == "e") {
      NodeId a, b;
      if (n < 0) fail("'e' before 'p' header");
      if (!(ls >> a >> b)) fail("expected 'e <id> <id>'");
      edges.emplace_back(a, b);
    } else {
      fail("unknown directive '" + tag + "'");
    }
    std::string rest;
    if (ls >> rest) fail("trailing token '" + rest + "'");
  }
  if (n < 0) throw ParseError("missing 'p <n> <m>' header");
  if (static_cast<int>(nodes.size()) != n)
    throw ParseError("header declares " + std::to_string(n) + " nodes, found " +
                     std::to_string(nodes.size()));
  if (static_cast<int>(edges.size()) != m)
    throw ParseError("header declares " + std::to_string(m) + " edges, found " +
                     std::to_string(edges.size()));
  Graph g(std::move(nodes), std::move(edges), default_id_bound(n, id_exponent));
  if (!g.is_connected()) throw ValidationError("graph is not connected");
  return g;
}

std::string save_graph(const Graph& g) {
  std::ostringstream out;
  out << "p " << g.node_count() << " " << g.edge_count() << "\n";
  for (NodeId v : g.nodes()) out << "v " << v << "\n";
  for (auto [a, b] : g.edges()) out << "e " << a << " " << b << "\n";
  return out.str();
}

Graph load_graph_file(const std::string& path, int id_exponent) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_graph(buf.str(), id_exponent);
}

void save_graph_file(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write graph file: " + path);
  out << save_graph(g);
}

Graph induced_subgraph(const Graph& g, const std::vector<NodeId>& keep) {
  std::set<NodeId> in_set;
  for (NodeId v : keep) {
    if (!g.has_node(v)) throw ValidationError("induced subgraph: unknown node " + std::to_string(v));
    in_set.insert(v);
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v : in_set)
    for (NodeId u : g.neighbors(v))
      if (v < u && in_set.count(u)) edges.emplace_back(v, u);
  return Graph(std::vector<NodeId>(in_set.begin(), in_set.end()), std::move(edges), g.id_bound());
}

namespace {

Graph ladder(int n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  std::vector<NodeId> nodes(n);
  for (int i = 0; i < n; ++i) nodes[i] = i + 1;
  return Graph(std::move(nodes), edges, default_id_bound(n));
}

}  // namespace

Graph path_graph(int n) {
  if (n < 1) throw ValidationError("path_graph needs n >= 1");
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (int i = 1; i < n; ++i) edges.emplace_back(i, i + 1);
  return ladder(n, edges);
}

Graph cycle_graph(int n) {
  if (n < 3) throw ValidationError("cycle_graph needs n >= 3");
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (int i = 1; i < n; ++i) edges.emplace_back(i, i + 1);
  edges.emplace_back(1, n);
  return ladder(n, edges);
}

Graph complete_graph(int n) {
  if (n < 1) throw ValidationError("complete_graph needs n >= 1");
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) edges.emplace_back(a, b);
  return ladder(n, edges);
}

Graph star_graph(int leaves) {
  if (leaves < 0) throw ValidationError("star_graph needs leaves >= 0");
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (int i = 0; i < leaves; ++i) edges.emplace_back(1, i + 2);
  return ladder(leaves + 1, edges);
}

std::vector<NodeId> draw_distinct_ids(int n, long long bound, Rng& rng) {
  std::set<NodeId> picked;
  while (static_cast<int>(picked.size()) < n)
    picked.insert(static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(bound)) + 1));
  std::vector<NodeId> ids(picked.begin(), picked.end());
  rng.shuffle(ids);
  return ids;
}

Graph random_connected_graph(int n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("random_connected_graph needs n >= 1");
  Rng rng(seed);
  long long bound = default_id_bound(n);
  std::vector<NodeId> ids = draw_distinct_ids(n, bound, rng);
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::set<std::pair<NodeId, NodeId>> present;
  auto add = [&](NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    if (present.insert({a, b}).second) edges.emplace_back(a, b);
  };
  for (int i = 1; i < n; ++i) add(ids[i], ids[rng.below_int(i)]);
  double p = n > 1 ? 2.0 / n : 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.chance(p)) add(ids[i], ids[j]);
  return Graph(std::move(ids), std::move(edges), bound);
}

}  // namespace certlab
