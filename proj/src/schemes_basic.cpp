#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "certlab/errors.hpp"
#include "certlab/schemes.hpp"
#include "scheme_internal.hpp"

namespace certlab {
namespace detail {

Widths widths_of(const Graph& g) {
  Widths wd;
  wd.id = bit_width_for(static_cast<std::uint64_t>(g.id_bound()));
  wd.count = bit_width_for(static_cast<std::uint64_t>(g.node_count()));
  return wd;
}

BfsTree bfs_tree(const Graph& g, NodeId root) {
  BfsTree t;
  t.parent[root] = root;
  t.dist[root] = 0;
  std::deque<NodeId> queue{root};
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (NodeId u : g.neighbors(v)) {
      if (t.parent.count(u)) continue;
      t.parent[u] = v;
      t.dist[u] = t.dist[v] + 1;
      queue.push_back(u);
    }
  }
  return t;
}

void add_tree_fields(Certificate& c, NodeId parent, NodeId root, int dist, Widths wd,
                     const std::string& prefix) {
  c.add_int(prefix + "parent", static_cast<std::uint64_t>(parent), wd.id);
  c.add_int(prefix + "root", static_cast<std::uint64_t>(root), wd.id);
  c.add_int(prefix + "dist", static_cast<std::uint64_t>(dist), wd.count);
}

std::optional<TreeClaim> read_tree_fields(const Certificate& c, const std::string& prefix) {
  auto parent = c.get_int(prefix + "parent");
  auto root = c.get_int(prefix + "root");
  auto dist = c.get_int(prefix + "dist");
  if (!parent || !root || !dist) return std::nullopt;
  TreeClaim claim;
  claim.parent = static_cast<NodeId>(*parent);
  claim.root = static_cast<NodeId>(*root);
  claim.dist = static_cast<std::int64_t>(*dist);
  return claim;
}

bool has_exact_fields(const Certificate& c, std::vector<std::string> expect) {
  std::vector<std::string> names;
  for (const auto& f : c.fields()) names.push_back(f.name);
  std::sort(names.begin(), names.end());
  std::sort(expect.begin(), expect.end());
  return names == expect;
}

BfsTree spanning_tree_of(const Graph& g, NodeId root) {
  BfsTree tree = bfs_tree(g, root);
  if (static_cast<int>(tree.parent.size()) != g.node_count())
    throw CannotCertifyError("graph is not connected");
  return tree;
}

namespace {
void mutate_int_rec(Certificate& c, const std::string& name, std::uint64_t delta) {
  for (auto& f : c.fields()) {
    if (f.name == name && f.kind == FieldKind::Int) {
      std::uint64_t mask = f.declared_bits >= 64 ? ~0ULL : ((1ULL << f.declared_bits) - 1);
      f.int_value = (f.int_value + delta) & mask;
    }
    if (f.kind == FieldKind::SubCerts)
      for (auto& s : f.subs) mutate_int_rec(s, name, delta);
  }
}
}  // namespace

void mutate_int_field(CertMap& certs, const std::string& name, std::uint64_t delta) {
  for (auto& [v, c] : certs) mutate_int_rec(c, name, delta);
}

}  // namespace detail

namespace {

using detail::BfsTree;
using detail::has_exact_fields;
using detail::mutate_int_field;
using detail::spanning_tree_of;
using detail::TreeClaim;
using detail::Widths;

std::map<NodeId, int> subtree_counts(const Graph& g, const BfsTree& tree) {
  std::vector<NodeId> order(g.nodes());
  std::sort(order.begin(), order.end(),
            [&](NodeId a, NodeId b) { return tree.dist.at(a) > tree.dist.at(b); });
  std::map<NodeId, int> sub;
  for (NodeId v : order) sub[v] = 1;
  for (NodeId v : order)
    if (tree.dist.at(v) > 0) sub[tree.parent.at(v)] += sub[v];
  return sub;
}

class SpanningTreeScheme : public Scheme {
 public:
  std::string name() const override { return "st"; }

  CertMap prove(const Graph& g) const override {
    Widths wd = detail::widths_of(g);
    NodeId root = g.nodes().front();
    BfsTree tree = spanning_tree_of(g, root);
    CertMap certs;
    for (NodeId v : g.nodes()) {
      Certificate c;
      detail::add_tree_fields(c, tree.parent.at(v), root, tree.dist.at(v), wd);
      certs[v] = std::move(c);
    }
    return certs;
  }

  bool verify(const LocalView& view) const override {
    if (!has_exact_fields(view.self_cert, {"parent", "root", "dist"})) return false;
    auto mine = detail::read_tree_fields(view.self_cert);
    if (!mine) return false;
    auto claim_of = [&](NodeId u) -> std::optional<TreeClaim> {
      const Certificate* c = view.neighbor_cert(u);
      if (!c) return std::nullopt;
      return detail::read_tree_fields(*c);
    };
    return detail::check_tree_layer(view, *mine, claim_of);
  }

  std::vector<std::string> attack_strategies() const override {
    return {"dist-shift", "foreign-root"};
  }

  std::vector<CertMap> attack(const Graph& g, const std::string& strategy) const override {
    CertMap certs = prove(g);
    if (strategy == "dist-shift") {
      mutate_int_field(certs, "dist", 1);
    } else if (strategy == "foreign-root") {
      // id_bound is only a real root id on a single-vertex graph, where
      // this would not be a forgery at all
      if (g.has_node(static_cast<NodeId>(g.id_bound()))) return {};
      for (auto& [v, c] : certs)
        for (auto& f : c.fields())
          if (f.name == "root") f.int_value = static_cast<std::uint64_t>(g.id_bound());
    }
    return {std::move(certs)};
  }
};

struct CountClaims {
  TreeClaim tree;
  std::uint64_t total = 0;
  std::uint64_t sub = 0;
};

std::optional<CountClaims> read_count_fields(const Certificate& c) {
  auto tree = detail::read_tree_fields(c);
  auto total = c.get_int("total");
  auto sub = c.get_int("sub");
  if (!tree || !total || !sub) return std::nullopt;
  return CountClaims{*tree, *total, *sub};
}

// Spanning tree plus subtree aggregation: sub = 1 + children subs,
// everyone agrees on total, the root's sub equals it.
bool check_count_layer(const LocalView& view, const CountClaims& mine) {
  auto claim_of = [&](NodeId u) -> std::optional<TreeClaim> {
    const Certificate* c = view.neighbor_cert(u);
    if (!c) return std::nullopt;
    auto nc = read_count_fields(*c);
    if (!nc) return std::nullopt;
    return nc->tree;
  };
  if (!detail::check_tree_layer(view, mine.tree, claim_of)) return false;
  unsigned __int128 children_sum = 0;
  for (const auto& [uid, ucert] : view.neighbors) {
    auto uc = read_count_fields(ucert);
    if (!uc) return false;
    if (uc->total != mine.total) return false;
    if (uc->tree.parent == view.self_id) children_sum += uc->sub;
  }
  if (children_sum + 1 != mine.sub) return false;
  if (mine.tree.dist == 0 && mine.sub != mine.total) return false;
  return true;
}

class CountScheme : public Scheme {
 public:
  std::string name() const override { return "count"; }

  CertMap prove(const Graph& g) const override {
    Widths wd = detail::widths_of(g);
    NodeId root = g.nodes().front();
    BfsTree tree = spanning_tree_of(g, root);
    std::map<NodeId, int> sub = subtree_counts(g, tree);
    CertMap certs;
    for (NodeId v : g.nodes()) {
      Certificate c;
      detail::add_tree_fields(c, tree.parent.at(v), root, tree.dist.at(v), wd);
      c.add_int("total", static_cast<std::uint64_t>(g.node_count()), wd.count);
      c.add_int("sub", static_cast<std::uint64_t>(sub.at(v)), wd.count);
      certs[v] = std::move(c);
    }
    return certs;
  }

  bool verify(const LocalView& view) const override {
    if (!has_exact_fields(view.self_cert, {"parent", "root", "dist", "total", "sub"}))
      return false;
    auto mine = read_count_fields(view.self_cert);
    if (!mine) return false;
    return check_count_layer(view, *mine);
  }

  std::vector<std::string> attack_strategies() const override {
    return {"total-plus-one", "total-minus-one"};
  }

  std::vector<CertMap> attack(const Graph& g, const std::string& strategy) const override {
    CertMap certs = prove(g);
    if (strategy == "total-plus-one") mutate_int_field(certs, "total", 1);
    if (strategy == "total-minus-one") mutate_int_field(certs, "total", ~0ULL);
    return {std::move(certs)};
  }
};

template <typename AdjFn>
bool eval_qfree(const Formula& f, const std::map<std::string, NodeId>& env, AdjFn&& adj) {
  switch (f.kind()) {
    case FormulaKind::Eq:
      return env.at(f.var1()) == env.at(f.var2());
    case FormulaKind::Adj: {
      NodeId a = env.at(f.var1());
      NodeId b = env.at(f.var2());
      return a != b && adj(a, b);
    }
    case FormulaKind::Not:
      return !eval_qfree(f.child(0), env, adj);
    case FormulaKind::And:
      return eval_qfree(f.child(0), env, adj) && eval_qfree(f.child(1), env, adj);
    case FormulaKind::Or:
      return eval_qfree(f.child(0), env, adj) || eval_qfree(f.child(1), env, adj);
    default:
      return false;  // quantifier inside a matrix: malformed
  }
}

class ExistentialFoScheme : public Scheme {
 public:
  explicit ExistentialFoScheme(Formula sentence)
      : sentence_(std::move(sentence)), prenex_(prenex_decompose(sentence_)) {
    if (!is_sentence(sentence_)) throw ValidationError("existential scheme needs a sentence");
    for (const auto& b : prenex_.prefix)
      if (b.universal) throw ValidationError("sentence is not existential");
    if (prenex_.prefix.empty())
      throw ValidationError("existential scheme needs at least one quantifier");
  }

  std::string name() const override { return "efo"; }

  CertMap prove(const Graph& g) const override {
    int k = static_cast<int>(prenex_.prefix.size());
    const auto& nodes = g.nodes();
    std::vector<int> pick(k, 0);
    std::vector<NodeId> wit;
    while (true) {
      std::map<std::string, NodeId> env;
      for (int i = 0; i < k; ++i) env[prenex_.prefix[i].var] = nodes[pick[i]];
      if (eval_qfree(prenex_.matrix, env,
                     [&](NodeId a, NodeId b) { return g.adjacent(a, b); })) {
        for (int i = 0; i < k; ++i) wit.push_back(nodes[pick[i]]);
        break;
      }
      int i = k - 1;
      while (i >= 0 && ++pick[i] == static_cast<int>(nodes.size())) {
        pick[i] = 0;
        --i;
      }
      if (i < 0) throw CannotCertifyError("sentence does not hold");
    }
    return build_certs(g, wit);
  }

  bool verify(const LocalView& view) const override {
    int k = static_cast<int>(prenex_.prefix.size());
    const Certificate& c = view.self_cert;
    if (!has_exact_fields(c, {"wit", "mat", "trees"})) return false;
    const auto* wit = c.get_ids("wit");
    const auto* mat = c.get_bits("mat");
    const auto* trees = c.get_subs("trees");
    if (!wit || !mat || !trees) return false;
    if (static_cast<int>(wit->size()) != k || static_cast<int>(mat->size()) != k * k ||
        static_cast<int>(trees->size()) != k)
      return false;
    for (int i = 0; i < k; ++i) {
      if ((*mat)[i * k + i]) return false;
      for (int j = i + 1; j < k; ++j)
        if ((*mat)[i * k + j] != (*mat)[j * k + i]) return false;
    }
    for (const auto& [uid, ucert] : view.neighbors) {
      const auto* uwit = ucert.get_ids("wit");
      const auto* umat = ucert.get_bits("mat");
      if (!uwit || !umat || *uwit != *wit || *umat != *mat) return false;
    }
    // Every witness id is pinned to a real vertex by its own tree.
    for (int i = 0; i < k; ++i) {
      auto mine = detail::read_tree_fields((*trees)[i]);
      if (!mine) return false;
      if (mine->root != (*wit)[i]) return false;
      auto claim_of = [&](NodeId u) -> std::optional<TreeClaim> {
        const Certificate* nc = view.neighbor_cert(u);
        if (!nc) return std::nullopt;
        const auto* nt = nc->get_subs("trees");
        if (!nt || static_cast<int>(nt->size()) != k) return std::nullopt;
        return detail::read_tree_fields((*nt)[i]);
      };
      if (!detail::check_tree_layer(view, *mine, claim_of)) return false;
    }
    // A witness vertex checks its own matrix row against true adjacency.
    for (int i = 0; i < k; ++i) {
      if ((*wit)[i] != view.self_id) continue;
      for (int j = 0; j < k; ++j) {
        bool claimed = (*mat)[i * k + j];
        bool actual = (*wit)[j] != view.self_id && view.has_neighbor((*wit)[j]);
        if (claimed != actual) return false;
      }
    }
    auto row_of = [&](NodeId a) {
      for (int i = 0; i < k; ++i)
        if ((*wit)[i] == a) return i;
      return 0;
    };
    std::map<std::string, NodeId> env;
    for (int i = 0; i < k; ++i) env[prenex_.prefix[i].var] = (*wit)[i];
    return eval_qfree(prenex_.matrix, env, [&](NodeId a, NodeId b) {
      return static_cast<bool>((*mat)[row_of(a) * k + row_of(b)]);
    });
  }

  std::vector<std::string> attack_strategies() const override {
    return {"clique-matrix", "true-matrix"};
  }

  std::vector<CertMap> attack(const Graph& g, const std::string& strategy) const override {
    int k = static_cast<int>(prenex_.prefix.size());
    const auto& nodes = g.nodes();
    std::vector<NodeId> wit;
    for (int i = 0; i < k; ++i) wit.push_back(nodes[i % nodes.size()]);
    CertMap certs = build_certs(g, wit);
    if (strategy == "clique-matrix") {
      for (auto& [v, c] : certs)
        for (auto& f : c.fields())
          if (f.name == "mat")
            for (int i = 0; i < k; ++i)
              for (int j = 0; j < k; ++j) f.bit_vec[i * k + j] = wit[i] != wit[j];
    }
    return {std::move(certs)};
  }

 private:
  CertMap build_certs(const Graph& g, const std::vector<NodeId>& wit) const {
    int k = static_cast<int>(wit.size());
    Widths wd = detail::widths_of(g);
    std::vector<bool> mat(static_cast<std::size_t>(k) * k, false);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        mat[i * k + j] = wit[i] != wit[j] && g.adjacent(wit[i], wit[j]);
    std::vector<BfsTree> trees;
    for (int i = 0; i < k; ++i) trees.push_back(spanning_tree_of(g, wit[i]));
    CertMap certs;
    for (NodeId v : g.nodes()) {
      Certificate c;
      c.add_ids("wit", wit, wd.id);
      c.add_bits("mat", mat);
      std::vector<Certificate> subs;
      for (int i = 0; i < k; ++i) {
        Certificate s;
        detail::add_tree_fields(s, trees[i].parent.at(v), wit[i], trees[i].dist.at(v), wd);
        subs.push_back(std::move(s));
      }
      c.add_subs("trees", std::move(subs));
      certs[v] = std::move(c);
    }
    return certs;
  }

  Formula sentence_;
  PrenexForm prenex_;
};

int graph_level(const Graph& g) {
  int n = g.node_count();
  if (n == 1) return 3;
  bool clique = true;
  bool universal = false;
  for (NodeId v : g.nodes()) {
    if (g.degree(v) == n - 1)
      universal = true;
    else
      clique = false;
  }
  if (clique) return 2;
  if (universal) return 1;
  return 0;
}

class Depth2FoScheme : public Scheme {
 public:
  explicit Depth2FoScheme(Formula sentence)
      : sentence_(std::move(sentence)), truth_(depth2_classify(sentence_)) {}

  std::string name() const override { return "fo2"; }

  CertMap prove(const Graph& g) const override {
    int level = graph_level(g);
    if (!truth_.truth_for_level(level)) throw CannotCertifyError("sentence does not hold");
    return build_for_level(g, level);
  }

  bool verify(const LocalView& view) const override {
    const Certificate& c = view.self_cert;
    if (!has_exact_fields(c, {"level", "parent", "root", "dist", "total", "sub", "aux"}))
      return false;
    auto level = c.get_int("level");
    auto mine = read_count_fields(c);
    const auto* aux = c.get_subs("aux");
    if (!level || !mine || !aux) return false;
    if (*level > 3) return false;
    if (!truth_.truth_for_level(static_cast<int>(*level))) return false;
    for (const auto& [uid, ucert] : view.neighbors) {
      auto ulevel = ucert.get_int("level");
      if (!ulevel || *ulevel != *level) return false;
    }
    if (!check_count_layer(view, *mine)) return false;
    std::uint64_t total = mine->total;
    std::uint64_t deg = static_cast<std::uint64_t>(view.self_degree);
    switch (*level) {
      case 3:
        if (total != 1 || !aux->empty()) return false;
        break;
      case 2:
        if (total < 2 || deg + 1 != total || !aux->empty()) return false;
        break;
      case 1: {
        if (total < 3 || aux->size() != 1) return false;
        auto alt = detail::read_tree_fields((*aux)[0]);
        if (!alt) return false;
        auto claim_of = [&](NodeId u) -> std::optional<TreeClaim> {
          const Certificate* nc = view.neighbor_cert(u);
          if (!nc) return std::nullopt;
          const auto* na = nc->get_subs("aux");
          if (!na || na->size() != 1) return std::nullopt;
          return detail::read_tree_fields((*na)[0]);
        };
        if (!detail::check_tree_layer(view, *alt, claim_of)) return false;
        // Main root is universal, the alternate root is not.
        if (mine->tree.dist == 0 && deg + 1 != total) return false;
        if (alt->dist == 0 && deg + 1 >= total) return false;
        break;
      }
      default:
        if (deg + 1 >= total || !aux->empty()) return false;
        break;
    }
    return true;
  }

  std::vector<std::string> attack_strategies() const override {
    return {"level-up", "level-down"};
  }

  std::vector<CertMap> attack(const Graph& g, const std::string& strategy) const override {
    int level = graph_level(g);
    int forced = strategy == "level-up" ? (level + 1) % 4 : (level + 3) % 4;
    return {build_for_level(g, forced)};
  }

 private:
  CertMap build_for_level(const Graph& g, int level) const {
    Widths wd = detail::widths_of(g);
    int n = g.node_count();
    NodeId root = g.nodes().front();
    NodeId alt_root = root;
    if (level == 1) {
      for (NodeId v : g.nodes())
        if (g.degree(v) == n - 1) {
          root = v;
          break;
        }
      for (NodeId v : g.nodes())
        if (g.degree(v) < n - 1) {
          alt_root = v;
          break;
        }
    }
    BfsTree tree = spanning_tree_of(g, root);
    std::map<NodeId, int> sub = subtree_counts(g, tree);
    std::optional<BfsTree> alt;
    if (level == 1) alt = spanning_tree_of(g, alt_root);
    CertMap certs;
    for (NodeId v : g.nodes()) {
      Certificate c;
      c.add_int("level", static_cast<std::uint64_t>(level), 2);
      detail::add_tree_fields(c, tree.parent.at(v), root, tree.dist.at(v), wd);
      c.add_int("total", static_cast<std::uint64_t>(n), wd.count);
      c.add_int("sub", static_cast<std::uint64_t>(sub.at(v)), wd.count);
      std::vector<Certificate> subs;
      if (alt) {
        Certificate s;
        detail::add_tree_fields(s, alt->parent.at(v), alt_root, alt->dist.at(v), wd);
        subs.push_back(std::move(s));
      }
      c.add_subs("aux", std::move(subs));
      certs[v] = std::move(c);
    }
    return certs;
  }

  Formula sentence_;
  Depth2Classification truth_;
};

}  // namespace

bool Depth2Classification::truth_for_level(int level) const {
  switch (level) {
    case 3:
      return on_single;
    case 2:
      return on_clique;
    case 1:
      return on_universal;
    default:
      return on_generic;
  }
}

Depth2Classification depth2_classify(const Formula& sentence) {
  if (!is_sentence(sentence)) throw ValidationError("classification needs a sentence");
  if (quantifier_depth(sentence) > 2) throw ValidationError("quantifier depth exceeds 2");
  Depth2Classification c;
  c.on_single = evaluate(complete_graph(1), sentence);
  c.on_clique = evaluate(complete_graph(2), sentence);
  c.on_universal = evaluate(star_graph(2), sentence);
  c.on_generic = evaluate(path_graph(4), sentence);
  return c;
}

std::unique_ptr<Scheme> spanning_tree_scheme() { return std::make_unique<SpanningTreeScheme>(); }

std::unique_ptr<Scheme> count_scheme() { return std::make_unique<CountScheme>(); }

std::unique_ptr<Scheme> existential_fo_scheme(Formula sentence) {
  return std::make_unique<ExistentialFoScheme>(std::move(sentence));
}

std::unique_ptr<Scheme> depth2_fo_scheme(Formula sentence) {
  return std::make_unique<Depth2FoScheme>(std::move(sentence));
}

}  // namespace certlab
