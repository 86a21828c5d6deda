#include "hcsumm/search.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>
#include <unordered_map>

#include "hcsumm/error.hpp"

namespace hcsumm {

int SelectionMask::popcount() const {
  int count = 0;
  for (std::uint8_t b : bits) count += b != 0;
  return count;
}

std::vector<int> SelectionMask::selected() const {
  std::vector<int> positions;
  for (int i = 0; i < size(); ++i) {
    if (bits[static_cast<std::size_t>(i)]) positions.push_back(i);
  }
  return positions;
}

std::string SelectionMask::to_string() const {
  std::string s(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) s[i] = '1';
  }
  return s;
}

TokenSequence apply_mask(const TokenSequence& x, const SelectionMask& mask) {
  TokenSequence y;
  for (int i = 0; i < mask.size(); ++i) {
    if (mask.bits[static_cast<std::size_t>(i)]) y.tokens.push_back(x[i]);
  }
  return y;
}

SelectionMask random_mask(int n, int s, Rng& rng) {
  if (n < 1 || s < 1 || s > n) {
    throw InvalidLength("random_mask requires 1 <= s <= n, got s=" + std::to_string(s) +
                        " n=" + std::to_string(n));
  }
  // Partial Fisher-Yates over position indices.
  std::vector<int> indices(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) indices[static_cast<std::size_t>(i)] = i;
  SelectionMask mask;
  mask.bits.assign(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < s; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(j)]);
    mask.bits[static_cast<std::size_t>(indices[static_cast<std::size_t>(i)])] = 1;
  }
  return mask;
}

SelectionMask swap_neighbor(const SelectionMask& mask, Rng& rng) {
  std::vector<int> selected, unselected;
  for (int i = 0; i < mask.size(); ++i) {
    (mask.bits[static_cast<std::size_t>(i)] ? selected : unselected).push_back(i);
  }
  if (selected.empty() || unselected.empty()) throw NoNeighbor();
  const int out = selected[rng.below(selected.size())];
  const int in = unselected[rng.below(unselected.size())];
  SelectionMask neighbor = mask;
  neighbor.bits[static_cast<std::size_t>(out)] = 0;
  neighbor.bits[static_cast<std::size_t>(in)] = 1;
  return neighbor;
}

SearchBudget derive_budget(int n, int s, double beta_r, double beta_t) {
  const double scale = static_cast<double>(n) * static_cast<double>(s) * static_cast<double>(s);
  SearchBudget budget;
  budget.beta_r = beta_r;
  budget.beta_t = beta_t;
  budget.restarts = std::max(1, static_cast<int>(std::floor(beta_r * scale + 0.5)));
  budget.steps = std::max(1, static_cast<int>(std::floor(beta_t * scale + 0.5)));
  return budget;
}

std::uint64_t n_choose_s(int n, int s) {
  if (s < 0 || s > n) return 0;
  s = std::min(s, n - s);
  constexpr std::uint64_t kMax = std::numeric_limits<std::int64_t>::max();
  std::uint64_t result = 1;
  for (int i = 1; i <= s; ++i) {
    const auto factor = static_cast<std::uint64_t>(n - s + i);
    if (result > kMax / factor) return kMax;
    result = result * factor / static_cast<std::uint64_t>(i);
  }
  return result;
}

namespace {

struct RestartOutcome {
  SelectionMask final_mask;
  ObjectiveValue final_value;
  int first_attained = 0;  // first step at which the final score was reached
  long evaluations = 0;
  long infeasible = 0;
  std::vector<TraceEntry> trace;
};

RestartOutcome run_restart(int n, int s, const MaskObjective& objective,
                           const SearchBudget& budget, std::uint64_t restart_seed, int restart,
                           bool keep_trace) {
  Rng rng(restart_seed);
  RestartOutcome out;

  // Memoised objective keyed by the mask bit pattern; the walk revisits
  // masks on plateaus.
  std::unordered_map<std::string, ObjectiveValue> memo;
  const auto evaluate = [&](const SelectionMask& mask) {
    const std::string key = mask.to_string();
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const ObjectiveValue value = objective(mask);
    ++out.evaluations;
    if (!value.feasible) ++out.infeasible;
    memo.emplace(key, value);
    return value;
  };

  SelectionMask current = random_mask(n, s, rng);
  ObjectiveValue current_value = evaluate(current);
  out.first_attained = 0;
  if (keep_trace) out.trace.push_back({restart, 0, current_value.log_score, current});

  for (int t = 1; t <= budget.steps; ++t) {
    const SelectionMask candidate = swap_neighbor(current, rng);
    const ObjectiveValue value = evaluate(candidate);
    if (compare(value, current_value) != std::strong_ordering::less) {
      if (compare(value, current_value) == std::strong_ordering::greater) out.first_attained = t;
      current = candidate;
      current_value = value;
      if (keep_trace) out.trace.push_back({restart, t, value.log_score, candidate});
    }
  }
  out.final_mask = std::move(current);
  out.final_value = current_value;
  return out;
}

void parallel_for(int tasks, int workers, const std::function<void(int)>& body) {
  workers = std::max(1, std::min(workers, tasks));
  if (workers == 1) {
    for (int i = 0; i < tasks; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= tasks) return;
        body(i);
      }
    });
  }
  for (auto& thread : pool) thread.join();
}

}  // namespace

SearchResult fchc(int n, int s, const MaskObjective& objective, const SearchBudget& budget,
                  std::uint64_t seed, const SearchOptions& options) {
  if (n < 1 || s < 1 || s > n) {
    throw InvalidLength("fchc requires 1 <= s <= n, got s=" + std::to_string(s) +
                        " n=" + std::to_string(n));
  }

  SearchResult result;
  if (s == n) {
    // The single feasible mask; no search.
    SelectionMask mask;
    mask.bits.assign(static_cast<std::size_t>(n), 1);
    result.best_value = objective(mask);
    result.best_mask = mask;
    result.evaluations = 1;
    if (!result.best_value.feasible) result.infeasible_evaluations = 1;
    if (options.keep_trace) {
      result.trace.push_back({0, 0, result.best_value.log_score, result.best_mask});
    }
    return result;
  }

  const int restarts = std::max(1, budget.restarts);
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(restarts));
  parallel_for(restarts, options.workers, [&](int r) {
    outcomes[static_cast<std::size_t>(r)] =
        run_restart(n, s, objective, budget, mix_seed(seed, static_cast<std::uint64_t>(r)), r,
                    options.keep_trace);
  });

  int best = 0;
  for (int r = 1; r < restarts; ++r) {
    if (compare(outcomes[static_cast<std::size_t>(r)].final_value,
                outcomes[static_cast<std::size_t>(best)].final_value) ==
        std::strong_ordering::greater) {
      best = r;
    }
  }
  for (const auto& outcome : outcomes) {
    result.evaluations += outcome.evaluations;
    result.infeasible_evaluations += outcome.infeasible;
    if (options.keep_trace) {
      result.trace.insert(result.trace.end(), outcome.trace.begin(), outcome.trace.end());
    }
  }
  result.best_mask = outcomes[static_cast<std::size_t>(best)].final_mask;
  result.best_value = outcomes[static_cast<std::size_t>(best)].final_value;
  result.best_restart = best;
  result.best_step = outcomes[static_cast<std::size_t>(best)].first_attained;
  return result;
}

SearchResult fchc(const TokenSequence& x, const SentenceObjective& objective,
                  const SearchBudget& budget, std::uint64_t seed, const SearchOptions& options) {
  const MaskObjective f = [&objective](const SelectionMask& mask) {
    return objective.score_positions(mask.selected());
  };
  return fchc(x.size(), objective.target_length(), f, budget, seed, options);
}

SearchResult exhaustive_search(int n, int s, const MaskObjective& objective, std::uint64_t cap) {
  if (n < 1 || s < 1 || s > n) {
    throw InvalidLength("exhaustive_search requires 1 <= s <= n, got s=" + std::to_string(s) +
                        " n=" + std::to_string(n));
  }
  const std::uint64_t candidates = n_choose_s(n, s);
  if (candidates > cap) throw TooLarge(candidates, cap);

  std::vector<int> positions(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) positions[static_cast<std::size_t>(i)] = i;

  SearchResult result;
  bool first = true;
  for (;;) {
    SelectionMask mask;
    mask.bits.assign(static_cast<std::size_t>(n), 0);
    for (int p : positions) mask.bits[static_cast<std::size_t>(p)] = 1;
    const ObjectiveValue value = objective(mask);
    ++result.evaluations;
    if (!value.feasible) ++result.infeasible_evaluations;
    if (first || compare(value, result.best_value) == std::strong_ordering::greater) {
      result.best_value = value;
      result.best_mask = mask;
      first = false;
    }
    // Advance to the next combination in lexicographic order.
    int i = s - 1;
    while (i >= 0 && positions[static_cast<std::size_t>(i)] == n - s + i) --i;
    if (i < 0) break;
    ++positions[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < s; ++j) {
      positions[static_cast<std::size_t>(j)] = positions[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return result;
}

SearchResult exhaustive_search(const TokenSequence& x, const SentenceObjective& objective,
                               std::uint64_t cap) {
  const MaskObjective f = [&objective](const SelectionMask& mask) {
    return objective.score_positions(mask.selected());
  };
  return exhaustive_search(x.size(), objective.target_length(), f, cap);
}

std::string trace_entry_to_json(const TraceEntry& entry) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "{\"restart\":%d,\"step\":%d,\"score\":%.17g,\"mask\":\"",
                entry.restart, entry.step, entry.score);
  return std::string(buf) + entry.mask.to_string() + "\"}";
}

}  // namespace hcsumm
