#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hcsumm/corpus.hpp"
#include "hcsumm/objective.hpp"
#include "hcsumm/rng.hpp"

namespace hcsumm {

// Boolean filter over source positions; set bits define the extracted
// summary, source order preserved.
struct SelectionMask {
  std::vector<std::uint8_t> bits;

  int size() const { return static_cast<int>(bits.size()); }
  int popcount() const;
  std::vector<int> selected() const;
  std::string to_string() const;  // e.g. "01101"
  bool operator==(const SelectionMask&) const = default;
};

// Realizes the masked subsequence.
TokenSequence apply_mask(const TokenSequence& x, const SelectionMask& mask);

// Uniformly random s-subset of n positions. Throws InvalidLength unless
// 1 <= s <= n.
SelectionMask random_mask(int n, int s, Rng& rng);

// Clears one uniformly chosen selected position and sets one uniformly
// chosen unselected position. Throws NoNeighbor when the mask is all ones or
// all zeros.
SelectionMask swap_neighbor(const SelectionMask& mask, Rng& rng);

struct SearchBudget {
  int restarts = 1;
  int steps = 1;
  double beta_r = 0.035;
  double beta_t = 0.1;
};

// R = max(1, round(beta_r * n * s^2)), T likewise with beta_t;
// round half up.
SearchBudget derive_budget(int n, int s, double beta_r, double beta_t);

struct TraceEntry {
  int restart = 0;
  int step = 0;  // 0 is the initial solution of the restart
  double score = 0.0;
  SelectionMask mask;
};

struct SearchResult {
  SelectionMask best_mask;
  ObjectiveValue best_value;
  std::vector<TraceEntry> trace;  // accepted steps only; filled when requested
  long evaluations = 0;           // objective invocations (memoised hits excluded)
  long infeasible_evaluations = 0;
  int best_restart = 0;
  int best_step = 0;  // first step at which the returned score was reached
};

struct SearchOptions {
  int workers = 1;
  bool keep_trace = false;
};

using MaskObjective = std::function<ObjectiveValue(const SelectionMask&)>;

// First-choice hill climbing with restarts over fixed-popcount masks.
// Restart r uses an independent stream seeded by mix_seed(seed, r), so the
// result is deterministic for any worker count and the best score is
// non-decreasing in the number of restarts. A candidate is accepted iff its
// score is not worse than the current one (ties accepted). The overall best
// across restarts is returned, ties broken by the earliest restart.
SearchResult fchc(int n, int s, const MaskObjective& objective, const SearchBudget& budget,
                  std::uint64_t seed, const SearchOptions& options = {});

// Convenience overload bound to a sentence objective.
SearchResult fchc(const TokenSequence& x, const SentenceObjective& objective,
                  const SearchBudget& budget, std::uint64_t seed,
                  const SearchOptions& options = {});

inline constexpr std::uint64_t kDefaultExhaustiveCap = 2'000'000;

// Enumerates all C(n, s) masks in lexicographic order of their selected
// position tuples and returns the maximum; ties keep the first (smallest)
// tuple. Throws TooLarge when C(n, s) exceeds the cap.
SearchResult exhaustive_search(int n, int s, const MaskObjective& objective,
                               std::uint64_t cap = kDefaultExhaustiveCap);

SearchResult exhaustive_search(const TokenSequence& x, const SentenceObjective& objective,
                               std::uint64_t cap = kDefaultExhaustiveCap);

// C(n, s) saturated at 2^63-1.
std::uint64_t n_choose_s(int n, int s);

// JSON-lines rendering of a trace entry: {"restart":..,"step":..,"score":..,"mask":".."}.
std::string trace_entry_to_json(const TraceEntry& entry);

}  // namespace hcsumm
