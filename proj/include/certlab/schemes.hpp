#pragma once

#include <memory>
#include <optional>

#include "certlab/formula.hpp"
#include "certlab/model.hpp"
#include "certlab/scheme.hpp"

namespace certlab {

// Certifies the BFS spanning tree structure itself: parent, root id and
// distance to the root per node.
std::unique_ptr<Scheme> spanning_tree_scheme();

// Spanning tree plus exact vertex count (total and per-subtree).
std::unique_ptr<Scheme> count_scheme();

// Witness tuple, witness adjacency matrix and one spanning tree per
// witness. Requires an existential sentence.
std::unique_ptr<Scheme> existential_fo_scheme(Formula sentence);

// On connected graphs the truth of a sentence of quantifier depth <= 2
// depends only on which of these hold: exactly one vertex; complete
// graph; universal vertex present. The four realizable combinations are
// evaluated on one representative each.
struct Depth2Classification {
  bool on_single = false;     // K1
  bool on_clique = false;     // K2
  bool on_universal = false;  // P3
  bool on_generic = false;    // P4
  // level 3 = single vertex, 2 = clique, 1 = universal vertex only,
  // 0 = none of the properties.
  bool truth_for_level(int level) const;
};
Depth2Classification depth2_classify(const Formula& sentence);

// Requires quantifier depth <= 2.
std::unique_ptr<Scheme> depth2_fo_scheme(Formula sentence);

// Certifies treedepth <= t: ancestor id lists plus, per non-root
// ancestor, a fragment of a spanning tree of that ancestor's subtree
// rooted at its exit vertex. prove computes an exact model when none is
// supplied (subject to the exact solver's size limit).
std::unique_ptr<Scheme> treedepth_scheme(int t, std::optional<Model> model = std::nullopt);

// Treedepth certificates plus pruned flags, end types per ancestor and a
// shared type table: certifies a k-reduction of the graph.
std::unique_ptr<Scheme> kernel_scheme(int k, int t, std::optional<Model> model = std::nullopt);

// Kernel certificates plus a broadcast description of the kernel that
// every node re-evaluates the sentence on; k = quantifier_depth(sentence).
std::unique_ptr<Scheme> fo_treedepth_scheme(Formula sentence, int t,
                                            std::optional<Model> model = std::nullopt);

}  // namespace certlab
