#include "certlab/kernel.hpp"

#include <algorithm>
#include <sstream>

#include "certlab/errors.hpp"

namespace certlab {

std::vector<bool> ancestor_vector(const Graph& g, const Model& m, NodeId v) {
  int d = m.depth(v);
  std::vector<bool> bits(d, false);
  NodeId cur = v;
  while (cur != m.root()) {
    cur = m.parent(cur);
    bits[m.depth(cur)] = g.adjacent(v, cur);
  }
  return bits;
}

TypeCode make_type_code(const std::vector<bool>& anc, std::vector<TypeCode> children) {
  std::sort(children.begin(), children.end());
  std::string out = "(";
  for (bool b : anc) out += b ? '1' : '0';
  out += '|';
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i) out += ',';
    out += children[i];
  }
  out += ')';
  return out;
}

std::optional<std::vector<bool>> type_code_root_vector(const TypeCode& code) {
  if (code.size() < 3 || code.front() != '(' || code.back() != ')') return std::nullopt;
  std::vector<bool> bits;
  for (std::size_t i = 1; i < code.size(); ++i) {
    if (code[i] == '|') return bits;
    if (code[i] == '0')
      bits.push_back(false);
    else if (code[i] == '1')
      bits.push_back(true);
    else
      return std::nullopt;
  }
  return std::nullopt;
}

TypeCode compute_type(const Graph& g, const Model& m, NodeId v) {
  std::vector<TypeCode> child_codes;
  for (NodeId c : m.children(v)) child_codes.push_back(compute_type(g, m, c));
  return make_type_code(ancestor_vector(g, m, v), std::move(child_codes));
}

ComparableBound ComparableBound::exact(boost::multiprecision::cpp_int v) {
  ComparableBound b;
  b.value_ = std::move(v);
  return b;
}

ComparableBound ComparableBound::saturated() {
  ComparableBound b;
  b.saturated_ = true;
  return b;
}

const boost::multiprecision::cpp_int& ComparableBound::value() const {
  if (saturated_) throw ValidationError("saturated bound has no exact value");
  return value_;
}

bool ComparableBound::at_least(unsigned long long count) const {
  return saturated_ || value_ >= count;
}

std::string ComparableBound::str() const {
  if (saturated_) return "saturated";
  return value_.str();
}

ComparableBound type_bound(int k, int t, int d) {
  if (k < 1 || d < 0 || d > t) throw ValidationError("type_bound needs k >= 1 and 0 <= d <= t");
  using boost::multiprecision::cpp_int;
  // Exponents beyond this would make even the bit length of the result
  // unmanageable; every comparison target in this project is tiny, so
  // saturation is exact for all uses.
  const cpp_int exponent_limit = cpp_int(1) << 20;
  cpp_int f = cpp_int(1) << t;
  for (int i = t - 1; i >= d; --i) {
    if (f > exponent_limit) return ComparableBound::saturated();
    unsigned e = f.convert_to<unsigned>();
    f = (cpp_int(1) << i) * boost::multiprecision::pow(cpp_int(k + 1), e);
  }
  return ComparableBound::exact(std::move(f));
}

namespace {

struct ReduceState {
  const Graph& g;
  const Model& m;
  int k;
  std::set<NodeId> alive;
  std::map<NodeId, std::vector<bool>> anc;
  std::map<NodeId, TypeCode> cur_type;

  std::vector<NodeId> alive_children(NodeId v) const {
    std::vector<NodeId> out;
    for (NodeId c : m.children(v))
      if (alive.count(c)) out.push_back(c);
    return out;
  }

  TypeCode rebuild(NodeId v) const {
    std::vector<TypeCode> codes;
    for (NodeId c : alive_children(v)) codes.push_back(cur_type.at(c));
    return make_type_code(anc.at(v), std::move(codes));
  }

  // (parent, type) group with > k alive same-type children, chosen
  // deepest-child first, then smallest parent id, then smallest code.
  struct Candidate {
    int child_depth;
    NodeId parent;
    TypeCode type;
    bool valid = false;
  };

  Candidate find_candidate() const {
    Candidate best;
    for (NodeId v : alive) {
      std::map<TypeCode, int> counts;
      for (NodeId c : alive_children(v)) ++counts[cur_type.at(c)];
      for (const auto& [code, count] : counts) {
        if (count <= k) continue;
        int cd = m.depth(v) + 1;
        if (!best.valid || cd > best.child_depth ||
            (cd == best.child_depth &&
             (v < best.parent || (v == best.parent && code < best.type)))) {
          best = {cd, v, code, true};
        }
      }
    }
    return best;
  }
};

}  // namespace

Reduction k_reduce(const Graph& g, const Model& m, int k) {
  if (k < 1) throw ValidationError("k_reduce needs k >= 1");
  if (!is_valid_model(g, m, m.height()))
    throw ValidationError("k_reduce needs a valid model of g");
  if (!is_coherent(g, m)) throw ValidationError("k_reduce needs a coherent model");

  ReduceState st{g, m, k, {}, {}, {}};
  st.alive.insert(m.vertices().begin(), m.vertices().end());
  for (NodeId v : m.vertices()) st.anc[v] = ancestor_vector(g, m, v);
  // Initial types, deepest first so children are coded before parents.
  std::vector<NodeId> by_depth = m.vertices();
  std::sort(by_depth.begin(), by_depth.end(),
            [&](NodeId a, NodeId b) { return m.depth(a) > m.depth(b); });
  for (NodeId v : by_depth) st.cur_type[v] = st.rebuild(v);

  Reduction r;
  r.original = g;
  r.model = m;
  r.k = k;
  std::map<NodeId, TypeCode> end_code;

  for (;;) {
    auto cand = st.find_candidate();
    if (!cand.valid) break;
    std::vector<NodeId> group;
    for (NodeId c : st.alive_children(cand.parent))
      if (st.cur_type.at(c) == cand.type) group.push_back(c);
    NodeId u = *std::max_element(group.begin(), group.end());
    // End types of the removed subtree freeze at deletion time.
    for (NodeId x : m.subtree(u))
      if (st.alive.count(x)) {
        end_code[x] = st.cur_type.at(x);
        st.alive.erase(x);
        r.deleted.insert(x);
      }
    r.pruned_roots.insert(u);
    r.prune_log.push_back({u, m.depth(u)});
    // Only ancestors of the pruned root change type.
    NodeId cur = u;
    while (cur != m.root()) {
      cur = m.parent(cur);
      st.cur_type[cur] = st.rebuild(cur);
    }
  }

  for (NodeId v : st.alive) end_code[v] = st.cur_type.at(v);

  std::set<TypeCode> distinct;
  for (const auto& [v, code] : end_code) distinct.insert(code);
  r.type_table.assign(distinct.begin(), distinct.end());
  std::map<TypeCode, int> index;
  for (std::size_t i = 0; i < r.type_table.size(); ++i) index[r.type_table[i]] = static_cast<int>(i);
  for (const auto& [v, code] : end_code) r.end_type[v] = index.at(code);

  std::vector<NodeId> alive_sorted(st.alive.begin(), st.alive.end());
  r.kernel = induced_subgraph(g, alive_sorted);
  r.kernel_model = m.restricted_to(alive_sorted);
  return r;
}

bool end_type_consistency_check(const Reduction& r) {
  for (NodeId v : r.model.vertices()) {
    std::vector<TypeCode> codes;
    for (NodeId w : r.model.children(v))
      if (!r.pruned_roots.count(w)) codes.push_back(r.end_type_code(w));
    TypeCode want = make_type_code(ancestor_vector(r.original, r.model, v), std::move(codes));
    if (want != r.end_type_code(v)) return false;
  }
  return true;
}

bool pruning_count_check(const Reduction& r) {
  for (NodeId v : r.model.vertices()) {
    std::map<TypeCode, int> kept;
    for (NodeId w : r.model.children(v))
      if (!r.pruned_roots.count(w)) ++kept[r.end_type_code(w)];
    for (const auto& [code, count] : kept)
      if (count > r.k) return false;
    for (NodeId w : r.model.children(v))
      if (r.pruned_roots.count(w) && kept[r.end_type_code(w)] != r.k) return false;
  }
  return true;
}

std::string save_reduction(const Reduction& r) {
  std::ostringstream out;
  for (NodeId v : r.model.vertices())
    out << v << " " << r.model.depth(v) << " " << (r.pruned_roots.count(v) ? 1 : 0) << " "
        << (r.deleted.count(v) ? 1 : 0) << " " << r.end_type.at(v) << "\n";
  for (std::size_t i = 0; i < r.type_table.size(); ++i)
    out << "t " << i << " " << r.type_table[i] << "\n";
  return out.str();
}

}  // namespace certlab
