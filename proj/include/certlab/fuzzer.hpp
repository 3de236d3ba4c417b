#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "certlab/certificate.hpp"
#include "certlab/graph.hpp"
#include "certlab/rng.hpp"
#include "certlab/scheme.hpp"

namespace certlab {

// Deterministic stream of corrupted copies of a base certificate
// assignment: value flips, list/bit/byte edits, truncations, field
// removal and whole-certificate swaps between nodes.
class CertMutator {
 public:
  CertMutator(CertMap base, std::uint64_t seed);
  // Fresh copy of the base with `ops` random edits applied.
  CertMap next(int ops);

 private:
  void apply_one(CertMap& certs);
  CertMap base_;
  std::vector<NodeId> nodes_;
  Rng rng_;
};

struct AttackBase {
  std::string label;
  CertMap certs;
};

// Every structured forgery the scheme offers for this graph, labeled by
// strategy. Strategies that do not apply yield nothing.
std::vector<AttackBase> adversarial_bases(const Graph& g, const Scheme& s);

struct FuzzReport {
  long long attempts = 0;
  long long escapes = 0;            // assignments accepted at every node
  std::vector<std::string> notes;   // one per escape, capped at 16
  bool clean() const { return escapes == 0; }
};

// Throws `budget` forged assignments at the verifier: the scheme's own
// attack strategies first, then mutation streams seeded from them (and
// from an all-empty assignment). The graph must NOT satisfy the
// certified property, so every accepted assignment counts as an escape.
FuzzReport fuzz_soundness(const Graph& g, const Scheme& s, long long budget,
                          std::uint64_t seed);

}  // namespace certlab
