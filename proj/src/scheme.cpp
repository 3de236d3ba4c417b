#include "certlab/scheme.hpp"

#include <algorithm>

#include "certlab/errors.hpp"

namespace certlab {

const Certificate* LocalView::neighbor_cert(NodeId v) const {
  auto it = std::lower_bound(neighbors.begin(), neighbors.end(), v,
                             [](const auto& p, NodeId id) { return p.first < id; });
  if (it == neighbors.end() || it->first != v) return nullptr;
  return &it->second;
}

bool LocalView::has_neighbor(NodeId v) const { return neighbor_cert(v) != nullptr; }

std::vector<CertMap> Scheme::attack(const Graph&, const std::string&) const { return {}; }

LocalView make_local_view(const Graph& g, const CertMap& c, NodeId v) {
  auto cert_of = [&](NodeId x) -> const Certificate& {
    auto it = c.find(x);
    if (it == c.end())
      throw ValidationError("missing certificate for node " + std::to_string(x));
    return it->second;
  };
  LocalView view;
  view.self_id = v;
  view.self_degree = g.degree(v);
  view.self_cert = cert_of(v);
  for (NodeId u : g.neighbors(v)) view.neighbors.emplace_back(u, cert_of(u));
  return view;
}

Verdict run_verification(const Graph& g, const CertMap& c, const Scheme& s) {
  Verdict verdict;
  for (NodeId v : g.nodes())
    if (!s.verify(make_local_view(g, c, v))) verdict.rejecting.push_back(v);
  verdict.accepted = verdict.rejecting.empty();
  return verdict;
}

}  // namespace certlab
