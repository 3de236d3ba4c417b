#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "certlab/errors.hpp"
#include "certlab/kernel.hpp"
#include "certlab/schemes.hpp"
#include "scheme_internal.hpp"

namespace certlab {
namespace {

using detail::BfsTree;
using detail::has_exact_fields;
using detail::mutate_int_field;
using detail::spanning_tree_of;
using detail::TreeClaim;
using detail::Widths;

struct TdWidths {
  Widths base;
  int depth = 0;  // fragment depth tags, values 1..t+1
};

TdWidths td_widths_of(const Graph& g, int t) {
  TdWidths wd;
  wd.base = detail::widths_of(g);
  wd.depth = bit_width_for(static_cast<std::uint64_t>(t) + 1);
  return wd;
}

// Coherent model of height <= t: the supplied one, or an exact solve.
Model certifiable_model(const Graph& g, int t, const std::optional<Model>& supplied) {
  if (supplied) {
    bool ok = false;
    try {
      ok = is_valid_model(g, *supplied, t);
    } catch (const ValidationError&) {
      ok = false;
    }
    if (!ok) throw CannotCertifyError("supplied model does not fit the graph within the bound");
    return make_coherent(g, *supplied);
  }
  TreedepthResult res;
  try {
    res = compute_treedepth_exact(g);
  } catch (const ValidationError& e) {
    throw CannotCertifyError(e.what());
  }
  if (res.treedepth > t) throw CannotCertifyError("graph treedepth exceeds the bound");
  return make_coherent(g, res.model);
}

// Ancestor id list plus one spanning tree row per proper ancestor: the
// tree of an ancestor's subtree is rooted at that subtree's exit vertex
// (the witness that the subtree touches its parent).
CertMap base_treedepth_certs(const Graph& g, const Model& m, const TdWidths& wd) {
  std::map<NodeId, NodeId> exits = coherence_witness(g, m);
  std::map<NodeId, BfsTree> trees;
  for (NodeId u : m.vertices()) {
    if (u == m.root()) continue;
    Graph sub = induced_subgraph(g, m.subtree(u));
    BfsTree tree = detail::bfs_tree(sub, exits.at(u));
    if (static_cast<int>(tree.parent.size()) != sub.node_count())
      throw ValidationError("subtree of " + std::to_string(u) + " is not connected");
    trees.emplace(u, std::move(tree));
  }
  CertMap certs;
  for (NodeId v : m.vertices()) {
    Certificate c;
    c.add_ids("list", m.ancestors(v), wd.base.id);
    std::vector<Certificate> frags;
    for (int j = 1; j <= m.depth(v); ++j) {
      NodeId u = m.ancestor_at_depth(v, j);
      const BfsTree& tree = trees.at(u);
      Certificate s;
      s.add_int("depth", static_cast<std::uint64_t>(j), wd.depth);
      detail::add_tree_fields(s, tree.parent.at(v), exits.at(u), tree.dist.at(v), wd.base);
      frags.push_back(std::move(s));
    }
    c.add_subs("frags", std::move(frags));
    certs[v] = std::move(c);
  }
  return certs;
}

struct TdParsed {
  std::vector<NodeId> list;  // self first, root last
  int d = 0;
  std::vector<TreeClaim> frags;
};

std::optional<TdParsed> parse_td(const Certificate& c, int t) {
  const auto* list = c.get_ids("list");
  const auto* frags = c.get_subs("frags");
  if (!list || !frags || list->empty()) return std::nullopt;
  int d = static_cast<int>(list->size()) - 1;
  if (d > t) return std::nullopt;
  std::vector<NodeId> sorted(*list);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return std::nullopt;
  if (static_cast<int>(frags->size()) != d) return std::nullopt;
  TdParsed p;
  p.list = *list;
  p.d = d;
  for (int i = 0; i < d; ++i) {
    const Certificate& s = (*frags)[i];
    if (!has_exact_fields(s, {"depth", "parent", "root", "dist"})) return std::nullopt;
    auto tag = s.get_int("depth");
    auto claim = detail::read_tree_fields(s);
    if (!tag || !claim || *tag != static_cast<std::uint64_t>(i) + 1) return std::nullopt;
    p.frags.push_back(*claim);
  }
  return p;
}

bool is_suffix(const std::vector<NodeId>& shorter, const std::vector<NodeId>& longer) {
  if (shorter.size() > longer.size()) return false;
  return std::equal(shorter.rbegin(), shorter.rend(), longer.rbegin());
}

// Accepted everywhere, the lists define a height <= t model that every
// edge respects: adjacent lists nest, every fragment row points one step
// closer to the subtree's exit, and the exit vertex must see the
// subtree's parent (whose own list is then realized by a real vertex).
bool check_td_layer(const LocalView& view, int t, const TdParsed& mine) {
  if (mine.list[0] != view.self_id) return false;
  for (const auto& [uid, ucert] : view.neighbors) {
    const auto* ul = ucert.get_ids("list");
    if (!ul || ul->empty() || static_cast<int>(ul->size()) > t + 1) return false;
    if (!is_suffix(*ul, mine.list) && !is_suffix(mine.list, *ul)) return false;
  }
  for (int j = 1; j <= mine.d; ++j) {
    const TreeClaim& f = mine.frags[j - 1];
    if (f.dist == 0) {
      if (f.root != view.self_id) return false;
      std::vector<NodeId> parent_list(mine.list.end() - j, mine.list.end());
      bool found = false;
      for (const auto& [uid, ucert] : view.neighbors) {
        const auto* ul = ucert.get_ids("list");
        if (ul && *ul == parent_list) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    } else {
      if (!view.has_neighbor(f.parent)) return false;
      const Certificate* pc = view.neighbor_cert(f.parent);
      const auto* plist = pc->get_ids("list");
      const auto* pfrags = pc->get_subs("frags");
      if (!plist || !pfrags) return false;
      if (plist->size() != pfrags->size() + 1) return false;
      if (plist->size() < static_cast<std::size_t>(j) + 1) return false;
      if (!std::equal(mine.list.end() - (j + 1), mine.list.end(), plist->end() - (j + 1)))
        return false;
      const Certificate& ps = (*pfrags)[j - 1];
      auto ptag = ps.get_int("depth");
      auto pclaim = detail::read_tree_fields(ps);
      if (!ptag || !pclaim || *ptag != static_cast<std::uint64_t>(j)) return false;
      if (pclaim->dist != f.dist - 1 || pclaim->root != f.root) return false;
    }
  }
  return true;
}

void add_kernel_fields(CertMap& certs, const Model& m, const Reduction& r, const TdWidths& wd) {
  int type_w = bit_width_for(r.type_table.size() - 1);
  std::vector<Certificate> table;
  for (const TypeCode& code : r.type_table) {
    Certificate s;
    s.add_bytes("code", code);
    table.push_back(std::move(s));
  }
  for (auto& [v, c] : certs) {
    std::vector<bool> pruned;
    std::vector<NodeId> types;
    for (NodeId a : m.ancestors(v)) {
      pruned.push_back(r.pruned_roots.count(a) != 0);
      types.push_back(r.end_type.at(a));
    }
    c.add_bits("pruned", pruned);
    c.add_ids("types", types, type_w);
    c.add_subs("table", table);
  }
  (void)wd;
}

struct KernelParsed {
  std::vector<bool> pruned;          // aligned with the ancestor list
  std::vector<std::uint64_t> types;  // table indexes, aligned with the list
  std::vector<TypeCode> codes;       // shared table, strictly increasing
};

std::optional<KernelParsed> parse_kernel(const Certificate& c, int d) {
  const auto* pruned = c.get_bits("pruned");
  const auto* types = c.get_ids("types");
  const auto* table = c.get_subs("table");
  if (!pruned || !types || !table || table->empty()) return std::nullopt;
  if (static_cast<int>(pruned->size()) != d + 1) return std::nullopt;
  if (static_cast<int>(types->size()) != d + 1) return std::nullopt;
  KernelParsed p;
  p.pruned = *pruned;
  for (const Certificate& s : *table) {
    if (!has_exact_fields(s, {"code"})) return std::nullopt;
    const auto* code = s.get_bytes("code");
    if (!code) return std::nullopt;
    if (!p.codes.empty() && *code <= p.codes.back()) return std::nullopt;
    p.codes.push_back(*code);
  }
  for (NodeId ty : *types) {
    if (ty < 0 || static_cast<std::size_t>(ty) >= p.codes.size()) return std::nullopt;
    p.types.push_back(static_cast<std::uint64_t>(ty));
  }
  return p;
}

// End types must be reproducible from the ancestor vector and the end
// types of non-pruned children, every parent keeps at most k children of
// one end type, and a pruned child demands exactly k kept siblings of
// its type. Children are aggregated from deeper neighbors' lists; the
// exit vertices force every child subtree to be visible here.
bool check_kernel_layer(const LocalView& view, int k, const TdParsed& td,
                        const KernelParsed& mine) {
  int d = td.d;
  if (mine.pruned.back()) return false;  // the model root cannot be pruned
  std::vector<bool> anc(d);
  for (int i = 0; i < d; ++i) anc[i] = view.has_neighbor(td.list[d - i]);
  auto rv = type_code_root_vector(mine.codes[mine.types[0]]);
  if (!rv || *rv != anc) return false;

  struct Kid {
    std::uint64_t type = 0;
    bool pruned = false;
  };
  std::map<NodeId, Kid> kids;
  for (const auto& [uid, ucert] : view.neighbors) {
    const auto* ul = ucert.get_ids("list");
    if (!ul || ul->empty()) return false;
    auto uk = parse_kernel(ucert, static_cast<int>(ul->size()) - 1);
    if (!uk) return false;
    if (uk->codes != mine.codes) return false;
    std::size_t shared = std::min(ul->size(), td.list.size());
    for (std::size_t i = 0; i < shared; ++i) {
      std::size_t a = td.list.size() - shared + i;
      std::size_t b = ul->size() - shared + i;
      if (mine.pruned[a] != uk->pruned[b] || mine.types[a] != uk->types[b]) return false;
    }
    if (ul->size() > td.list.size() && is_suffix(td.list, *ul)) {
      std::size_t idx = ul->size() - td.list.size() - 1;
      Kid entry{uk->types[idx], static_cast<bool>(uk->pruned[idx])};
      auto [it, inserted] = kids.emplace((*ul)[idx], entry);
      if (!inserted && (it->second.type != entry.type || it->second.pruned != entry.pruned))
        return false;
    }
  }
  std::map<std::uint64_t, int> kept;
  std::set<std::uint64_t> lost;
  std::vector<TypeCode> child_codes;
  for (const auto& [cid, kid] : kids) {
    if (kid.pruned) {
      lost.insert(kid.type);
    } else {
      kept[kid.type] += 1;
      child_codes.push_back(mine.codes[kid.type]);
    }
  }
  for (const auto& [ty, cnt] : kept)
    if (cnt > k) return false;
  for (std::uint64_t ty : lost) {
    auto it = kept.find(ty);
    if (it == kept.end() || it->second != k) return false;
  }
  return make_type_code(anc, child_codes) == mine.codes[mine.types[0]];
}

Certificate::Field* find_field(Certificate& c, const std::string& name) {
  for (auto& f : c.fields())
    if (f.name == name) return &f;
  return nullptr;
}

// Wrong-but-plausible rewrites of the ancestor-list layer, applied to
// certificates built from a model that overshoots the height bound.
void apply_base_attack(CertMap& certs, const std::string& strategy, int height) {
  if (strategy == "dist-shift") {
    mutate_int_field(certs, "dist", 1);
    return;
  }
  for (auto& [v, c] : certs) {
    auto* list = find_field(c, "list");
    auto* frags = find_field(c, "frags");
    auto* pruned = find_field(c, "pruned");
    auto* types = find_field(c, "types");
    if (!list || !frags) continue;
    if (strategy == "drop-root-entry") {
      if (static_cast<int>(list->ids.size()) != height + 1) continue;
      list->ids.pop_back();
      frags->subs.pop_back();
      if (pruned) pruned->bit_vec.pop_back();
      if (types) types->ids.pop_back();
    } else if (strategy == "collapse-middle") {
      if (list->ids.size() < 3) continue;
      list->ids.erase(list->ids.begin() + 1);
      frags->subs.erase(frags->subs.begin());
      for (auto& s : frags->subs)
        for (auto& sf : s.fields())
          if (sf.name == "depth") sf.int_value -= 1;
      if (pruned) pruned->bit_vec.erase(pruned->bit_vec.begin() + 1);
      if (types) types->ids.erase(types->ids.begin() + 1);
    }
  }
}

class TreedepthScheme : public Scheme {
 public:
  TreedepthScheme(int t, std::optional<Model> model) : t_(t), model_(std::move(model)) {
    if (t_ < 0) throw ValidationError("height bound must be nonnegative");
  }

  std::string name() const override { return "td"; }

  CertMap prove(const Graph& g) const override {
    Model m = certifiable_model(g, t_, model_);
    return base_treedepth_certs(g, m, td_widths_of(g, t_));
  }

  bool verify(const LocalView& view) const override {
    if (!has_exact_fields(view.self_cert, {"list", "frags"})) return false;
    auto mine = parse_td(view.self_cert, t_);
    if (!mine) return false;
    return check_td_layer(view, t_, *mine);
  }

  std::vector<std::string> attack_strategies() const override {
    return {"drop-root-entry", "collapse-middle", "dist-shift"};
  }

  std::vector<CertMap> attack(const Graph& g, const std::string& strategy) const override {
    try {
      TreedepthResult res = compute_treedepth_exact(g);
      Model m = make_coherent(g, res.model);
      CertMap certs = base_treedepth_certs(g, m, td_widths_of(g, t_));
      apply_base_attack(certs, strategy, m.height());
      return {std::move(certs)};
    } catch (const ValidationError&) {
      return {};
    } catch (const CannotCertifyError&) {
      return {};
    }
  }

 private:
  int t_;
  std::optional<Model> model_;
};

class KernelScheme : public Scheme {
 public:
  KernelScheme(int k, int t, std::optional<Model> model)
      : k_(k), t_(t), model_(std::move(model)) {
    if (k_ < 1) throw ValidationError("pruning parameter must be at least 1");
    if (t_ < 0) throw ValidationError("height bound must be nonnegative");
  }

  std::string name() const override { return "kernel"; }

  CertMap prove(const Graph& g) const override {
    Model m = certifiable_model(g, t_, model_);
    Reduction r = k_reduce(g, m, k_);
    TdWidths wd = td_widths_of(g, t_);
    CertMap certs = base_treedepth_certs(g, m, wd);
    add_kernel_fields(certs, m, r, wd);
    return certs;
  }

  bool verify(const LocalView& view) const override {
    if (!has_exact_fields(view.self_cert, {"list", "frags", "pruned", "types", "table"}))
      return false;
    auto td = parse_td(view.self_cert, t_);
    if (!td) return false;
    if (!check_td_layer(view, t_, *td)) return false;
    auto kp = parse_kernel(view.self_cert, td->d);
    if (!kp) return false;
    return check_kernel_layer(view, k_, *td, *kp);
  }

  std::vector<std::string> attack_strategies() const override {
    return {"drop-root-entry", "dist-shift", "type-shift"};
  }

  std::vector<CertMap> attack(const Graph& g, const std::string& strategy) const override {
    try {
      TreedepthResult res = compute_treedepth_exact(g);
      Model m = make_coherent(g, res.model);
      Reduction r = k_reduce(g, m, k_);
      TdWidths wd = td_widths_of(g, t_);
      CertMap certs = base_treedepth_certs(g, m, wd);
      add_kernel_fields(certs, m, r, wd);
      if (strategy == "type-shift") {
        for (auto& [v, c] : certs) {
          auto* table = find_field(c, "table");
          auto* types = find_field(c, "types");
          if (!table || !types || table->subs.empty()) continue;
          for (NodeId& ty : types->ids)
            ty = static_cast<NodeId>((ty + 1) % static_cast<NodeId>(table->subs.size()));
        }
      } else {
        apply_base_attack(certs, strategy, m.height());
      }
      return {std::move(certs)};
    } catch (const ValidationError&) {
      return {};
    } catch (const CannotCertifyError&) {
      return {};
    }
  }

 private:
  int k_;
  int t_;
  std::optional<Model> model_;
};

class FoTreedepthScheme : public Scheme {
 public:
  FoTreedepthScheme(Formula sentence, int t, std::optional<Model> model)
      : sentence_(std::move(sentence)),
        t_(t),
        model_(std::move(model)),
        k_(quantifier_depth(sentence_)) {
    if (!is_sentence(sentence_)) throw ValidationError("scheme needs a sentence");
    if (k_ < 1) throw ValidationError("scheme needs at least one quantifier");
    if (t_ < 0) throw ValidationError("height bound must be nonnegative");
  }

  std::string name() const override { return "fo-td"; }

  CertMap prove(const Graph& g) const override {
    if (!evaluate(g, sentence_)) throw CannotCertifyError("sentence does not hold");
    return certs_ignoring_truth(g);
  }

  bool verify(const LocalView& view) const override {
    const Certificate& c = view.self_cert;
    auto td = parse_td(c, t_);
    if (!td) return false;
    auto kp = parse_kernel(c, td->d);
    if (!kp) return false;
    bool survivor =
        std::none_of(kp->pruned.begin(), kp->pruned.end(), [](bool b) { return b; });
    std::vector<std::string> expect = {"list",   "frags",  "pruned", "types",  "table",
                                       "ksize",  "kmat",   "ktypes", "kdepths", "gparent",
                                       "groot",  "gdist",  "stotal", "ssub"};
    if (survivor) expect.push_back("kidx");
    if (!has_exact_fields(c, expect)) return false;
    if (!check_td_layer(view, t_, *td)) return false;
    if (!check_kernel_layer(view, k_, *td, *kp)) return false;

    auto ksize = c.get_int("ksize");
    const auto* kmat = c.get_bits("kmat");
    const auto* ktypes = c.get_ids("ktypes");
    const auto* kdepths = c.get_ids("kdepths");
    auto gtree = detail::read_tree_fields(c, "g");
    auto stotal = c.get_int("stotal");
    auto ssub = c.get_int("ssub");
    if (!ksize || !kmat || !ktypes || !kdepths || !gtree || !stotal || !ssub) return false;
    if (*ksize == 0 || *ksize > (1u << 16)) return false;
    std::size_t K = static_cast<std::size_t>(*ksize);
    if (kmat->size() != K * K || ktypes->size() != K || kdepths->size() != K) return false;
    for (std::size_t i = 0; i < K; ++i) {
      if ((*kmat)[i * K + i]) return false;
      for (std::size_t j = i + 1; j < K; ++j)
        if ((*kmat)[i * K + j] != (*kmat)[j * K + i]) return false;
    }
    for (NodeId ty : *ktypes)
      if (ty < 0 || static_cast<std::size_t>(ty) >= kp->codes.size()) return false;
    for (NodeId dep : *kdepths)
      if (dep < 0 || dep > t_) return false;
    if (!connected_bits(K, *kmat)) return false;
    if (*stotal != K) return false;

    for (const auto& [uid, ucert] : view.neighbors) {
      auto uks = ucert.get_int("ksize");
      const auto* ukm = ucert.get_bits("kmat");
      const auto* ukt = ucert.get_ids("ktypes");
      const auto* ukd = ucert.get_ids("kdepths");
      auto ust = ucert.get_int("stotal");
      if (!uks || !ukm || !ukt || !ukd || !ust) return false;
      if (*uks != *ksize || *ukm != *kmat || *ukt != *ktypes || *ukd != *kdepths ||
          *ust != *stotal)
        return false;
    }

    auto claim_of = [&](NodeId u) -> std::optional<TreeClaim> {
      const Certificate* nc = view.neighbor_cert(u);
      if (!nc) return std::nullopt;
      return detail::read_tree_fields(*nc, "g");
    };
    if (!detail::check_tree_layer(view, *gtree, claim_of)) return false;
    unsigned __int128 sum = survivor ? 1 : 0;
    for (const auto& [uid, ucert] : view.neighbors) {
      auto ut = detail::read_tree_fields(ucert, "g");
      auto us = ucert.get_int("ssub");
      if (!ut || !us) return false;
      if (ut->parent == view.self_id) sum += *us;
    }
    if (sum != *ssub) return false;
    if (gtree->dist == 0 && *ssub != *stotal) return false;

    if (survivor) {
      auto kidx = c.get_int("kidx");
      if (!kidx || *kidx >= K) return false;
      std::size_t i = static_cast<std::size_t>(*kidx);
      if (static_cast<std::uint64_t>((*ktypes)[i]) != kp->types[0]) return false;
      if ((*kdepths)[i] != td->d) return false;
      std::set<std::size_t> present;
      for (const auto& [uid, ucert] : view.neighbors) {
        const auto* upr = ucert.get_bits("pruned");
        if (!upr) return false;
        bool usurv = std::none_of(upr->begin(), upr->end(), [](bool b) { return b; });
        auto ukidx = ucert.get_int("kidx");
        if (usurv != ukidx.has_value()) return false;
        if (usurv) {
          if (*ukidx >= K) return false;
          if (!(*kmat)[i * K + static_cast<std::size_t>(*ukidx)]) return false;
          present.insert(static_cast<std::size_t>(*ukidx));
        }
      }
      for (std::size_t j = 0; j < K; ++j)
        if ((*kmat)[i * K + j] && !present.count(j)) return false;
    }
    return desc_satisfies(K, *kmat);
  }

  std::vector<std::string> attack_strategies() const override {
    return {"force-honest", "swap-desc", "flip-desc-edge", "fake-kidx"};
  }

  std::vector<CertMap> attack(const Graph& g, const std::string& strategy) const override {
    try {
      CertMap certs = certs_ignoring_truth(g);
      if (strategy == "swap-desc") {
        for (auto& [v, c] : certs) {
          auto ks = c.get_int("ksize");
          auto* mat = find_field(c, "kmat");
          if (!ks || !mat) continue;
          std::size_t K = static_cast<std::size_t>(*ks);
          for (std::size_t i = 0; i < K; ++i)
            for (std::size_t j = 0; j < K; ++j) mat->bit_vec[i * K + j] = i != j;
        }
      } else if (strategy == "flip-desc-edge") {
        for (auto& [v, c] : certs) {
          auto ks = c.get_int("ksize");
          auto* mat = find_field(c, "kmat");
          if (!ks || !mat || *ks < 2) continue;
          std::size_t K = static_cast<std::size_t>(*ks);
          mat->bit_vec[0 * K + 1] = !mat->bit_vec[0 * K + 1];
          mat->bit_vec[1 * K + 0] = !mat->bit_vec[1 * K + 0];
        }
      } else if (strategy == "fake-kidx") {
        for (auto& [v, c] : certs) {
          auto* idx = find_field(c, "kidx");
          if (idx) idx->int_value = 0;
        }
      }
      return {std::move(certs)};
    } catch (const ValidationError&) {
      return {};
    } catch (const CannotCertifyError&) {
      return {};
    }
  }

 private:
  CertMap certs_ignoring_truth(const Graph& g) const {
    Model m = certifiable_model(g, t_, model_);
    Reduction r = k_reduce(g, m, k_);
    TdWidths wd = td_widths_of(g, t_);
    CertMap certs = base_treedepth_certs(g, m, wd);
    add_kernel_fields(certs, m, r, wd);

    const std::vector<NodeId>& surv = r.kernel.nodes();
    std::size_t K = surv.size();
    std::vector<bool> kmat(K * K, false);
    for (std::size_t i = 0; i < K; ++i)
      for (std::size_t j = 0; j < K; ++j)
        kmat[i * K + j] = i != j && r.kernel.adjacent(surv[i], surv[j]);
    int type_w = bit_width_for(r.type_table.size() - 1);
    std::vector<NodeId> ktypes;
    std::vector<NodeId> kdepths;
    for (NodeId s : surv) {
      ktypes.push_back(static_cast<NodeId>(r.end_type.at(s)));
      kdepths.push_back(static_cast<NodeId>(r.kernel_model.depth(s)));
    }
    int ksize_w = bit_width_for(K);
    int kidx_w = bit_width_for(K - 1);

    NodeId root = g.nodes().front();
    BfsTree tree = spanning_tree_of(g, root);
    std::vector<NodeId> order(g.nodes());
    std::sort(order.begin(), order.end(),
              [&](NodeId a, NodeId b) { return tree.dist.at(a) > tree.dist.at(b); });
    std::map<NodeId, int> ssub;
    for (NodeId v : order) ssub[v] = r.survives(v) ? 1 : 0;
    for (NodeId v : order)
      if (tree.dist.at(v) > 0) ssub[tree.parent.at(v)] += ssub[v];

    for (auto& [v, c] : certs) {
      c.add_int("ksize", K, ksize_w);
      c.add_bits("kmat", kmat);
      c.add_ids("ktypes", ktypes, type_w);
      c.add_ids("kdepths", kdepths, wd.depth);
      detail::add_tree_fields(c, tree.parent.at(v), root, tree.dist.at(v), wd.base, "g");
      c.add_int("stotal", K, wd.base.count);
      c.add_int("ssub", static_cast<std::uint64_t>(ssub.at(v)), wd.base.count);
      if (r.survives(v)) {
        std::size_t idx = static_cast<std::size_t>(
            std::lower_bound(surv.begin(), surv.end(), v) - surv.begin());
        c.add_int("kidx", idx, kidx_w);
      }
    }
    return certs;
  }

  static bool connected_bits(std::size_t K, const std::vector<bool>& kmat) {
    std::vector<char> seen(K, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t cnt = 1;
    while (!stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < K; ++j)
        if (kmat[i * K + j] && !seen[j]) {
          seen[j] = 1;
          ++cnt;
          stack.push_back(j);
        }
    }
    return cnt == K;
  }

  bool desc_satisfies(std::size_t K, const std::vector<bool>& kmat) const {
    std::string key;
    key.reserve(kmat.size() + 8);
    key += std::to_string(K);
    key += ':';
    for (bool b : kmat) key.push_back(b ? '1' : '0');
    auto it = desc_truth_.find(key);
    if (it != desc_truth_.end()) return it->second;
    std::vector<NodeId> nodes;
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (std::size_t i = 0; i < K; ++i) nodes.push_back(static_cast<NodeId>(i + 1));
    for (std::size_t i = 0; i < K; ++i)
      for (std::size_t j = i + 1; j < K; ++j)
        if (kmat[i * K + j])
          edges.emplace_back(static_cast<NodeId>(i + 1), static_cast<NodeId>(j + 1));
    Graph desc(std::move(nodes), std::move(edges), static_cast<long long>(K));
    bool ok = evaluate(desc, sentence_);
    desc_truth_[key] = ok;
    return ok;
  }

  Formula sentence_;
  int t_;
  std::optional<Model> model_;
  int k_;
  // verify() is called once per node with identical broadcast fields;
  // caching the description evaluation keeps that loop linear.
  mutable std::map<std::string, bool> desc_truth_;
};

}  // namespace

std::unique_ptr<Scheme> treedepth_scheme(int t, std::optional<Model> model) {
  return std::make_unique<TreedepthScheme>(t, std::move(model));
}

std::unique_ptr<Scheme> kernel_scheme(int k, int t, std::optional<Model> model) {
  return std::make_unique<KernelScheme>(k, t, std::move(model));
}

std::unique_ptr<Scheme> fo_treedepth_scheme(Formula sentence, int t, std::optional<Model> model) {
  return std::make_unique<FoTreedepthScheme>(std::move(sentence), t, std::move(model));
}

}  // namespace certlab
