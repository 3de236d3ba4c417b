#include "certlab/ef_game.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "certlab/errors.hpp"
#include "certlab/formula.hpp"
#include "certlab/rng.hpp"

namespace certlab {

namespace {

using Pairing = std::vector<std::pair<NodeId, NodeId>>;  // sorted, deduplicated

struct GameSearch {
  const Graph& g;
  const Graph& h;
  long long budget;
  long long used = 0;
  // Key: rounds left, then the canonical pairing. Values memoize whether
  // Duplicator wins from that position.
  std::map<std::pair<int, Pairing>, bool> memo;

  // The new pair must relate to every pinned pair the same way on both
  // sides (equality and adjacency).
  static bool extends_partial_iso(const Pairing& pinned, NodeId a, NodeId b, const Graph& g,
                                  const Graph& h) {
    for (auto [u, v] : pinned) {
      if ((a == u) != (b == v)) return false;
      if (a != u && g.adjacent(a, u) != h.adjacent(b, v)) return false;
    }
    return true;
  }

  static Pairing extend(Pairing pinned, NodeId a, NodeId b) {
    auto pos = std::lower_bound(pinned.begin(), pinned.end(), std::make_pair(a, b));
    if (pos == pinned.end() || *pos != std::make_pair(a, b)) pinned.insert(pos, {a, b});
    return pinned;
  }

  // Duplicator answer candidates, most promising first: the identically
  // named vertex (wins immediately when both sides are the same graph),
  // then everything else.
  static std::vector<NodeId> candidates(const Graph& side, NodeId spoiler_pick) {
    std::vector<NodeId> out;
    out.reserve(side.node_count());
    if (side.has_node(spoiler_pick)) out.push_back(spoiler_pick);
    for (NodeId v : side.nodes())
      if (v != spoiler_pick) out.push_back(v);
    return out;
  }

  bool duplicator_wins(const Pairing& pinned, int rounds) {
    if (rounds == 0) return true;
    auto key = std::make_pair(rounds, pinned);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    if (++used > budget)
      throw BudgetExceededError("game search exceeded position budget of " +
                                std::to_string(budget));
    bool win = true;
    // Spoiler picks a side and a vertex; Duplicator needs one good answer.
    for (int side = 0; side < 2 && win; ++side) {
      const Graph& from = side == 0 ? g : h;
      const Graph& to = side == 0 ? h : g;
      for (NodeId a : from.nodes()) {
        bool answered = false;
        for (NodeId b : candidates(to, a)) {
          NodeId ga = side == 0 ? a : b;
          NodeId hb = side == 0 ? b : a;
          if (!extends_partial_iso(pinned, ga, hb, g, h)) continue;
          if (duplicator_wins(extend(pinned, ga, hb), rounds - 1)) {
            answered = true;
            break;
          }
        }
        if (!answered) {
          win = false;
          break;
        }
      }
    }
    memo[key] = win;
    return win;
  }
};

}  // namespace

bool ef_equivalent(const Graph& g, const Graph& h, int rounds, const EfOptions& opts) {
  if (rounds < 0) throw ValidationError("ef_equivalent needs rounds >= 0");
  if (g.node_count() == 0 || h.node_count() == 0)
    throw ValidationError("ef_equivalent needs non-empty graphs");
  GameSearch search{g, h, opts.position_budget, 0, {}};
  return search.duplicator_wins({}, rounds);
}

SampleReport sample_sentence_check(const Graph& g, const Graph& h, int max_depth, int trials,
                                   std::uint64_t seed) {
  if (max_depth < 1) throw ValidationError("sample_sentence_check needs max_depth >= 1");
  Rng rng(seed);
  SampleReport report;
  report.trials = trials;
  for (int i = 0; i < trials; ++i) {
    Formula f = random_sentence(rng, max_depth);
    bool vg = evaluate(g, f);
    bool vh = evaluate(h, f);
    if (vg != vh && report.mismatches.size() < 16)
      report.mismatches.push_back({f.str(), vg, vh});
  }
  return report;
}

}  // namespace certlab
