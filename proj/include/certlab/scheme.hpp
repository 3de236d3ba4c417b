#pragma once

#include <string>
#include <vector>

#include "certlab/certificate.hpp"
#include "certlab/graph.hpp"

namespace certlab {

// Everything a node's verifier may look at: its own id, degree and
// certificate, plus each graph neighbor's id and certificate.
struct LocalView {
  NodeId self_id = 0;
  int self_degree = 0;
  Certificate self_cert;
  std::vector<std::pair<NodeId, Certificate>> neighbors;  // sorted by id

  const Certificate* neighbor_cert(NodeId v) const;
  bool has_neighbor(NodeId v) const;
};

struct Verdict {
  bool accepted = false;
  std::vector<NodeId> rejecting;  // sorted
};

// A certification scheme: a prover assigning per-node certificates and a
// verifier that is a pure function of one node's local view.
class Scheme {
 public:
  virtual ~Scheme() = default;
  virtual std::string name() const = 0;
  // Throws CannotCertifyError when the property does not hold on g (or
  // no witness structure within reach).
  virtual CertMap prove(const Graph& g) const = 0;
  // Never throws; any malformed certificate is a rejection.
  virtual bool verify(const LocalView& view) const = 0;

  // Structured wrong-but-plausible certificate families used by the
  // soundness harness on no-instances.
  virtual std::vector<std::string> attack_strategies() const { return {}; }
  virtual std::vector<CertMap> attack(const Graph& g, const std::string& strategy) const;
};

// Throws ValidationError when a node is missing its certificate.
LocalView make_local_view(const Graph& g, const CertMap& c, NodeId v);

// Runs the verifier at every node; accepted iff no node rejects.
Verdict run_verification(const Graph& g, const CertMap& c, const Scheme& s);

}  // namespace certlab
