#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "certlab/graph.hpp"

namespace certlab {

struct EfOptions {
  // Explored game positions before the search gives up with
  // BudgetExceededError (an explicit undecided outcome, never a wrong
  // answer).
  long long position_budget = 10'000'000;
};

// True iff Duplicator wins the `rounds`-round game on (g, h), i.e. iff g
// and h satisfy the same sentences of quantifier depth <= rounds.
// Exhaustive search with memoization on canonicalized positions.
bool ef_equivalent(const Graph& g, const Graph& h, int rounds, const EfOptions& opts = {});

struct SentenceMismatch {
  std::string sentence;
  bool value_g;
  bool value_h;
};

struct SampleReport {
  int trials = 0;
  std::vector<SentenceMismatch> mismatches;  // capped at 16
  bool agreed() const { return mismatches.empty(); }
};

// Evaluates `trials` random sentences of quantifier depth <= max_depth on
// both graphs and reports disagreements. Deterministic in `seed`.
SampleReport sample_sentence_check(const Graph& g, const Graph& h, int max_depth, int trials,
                                   std::uint64_t seed);

}  // namespace certlab
