#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hcsumm/corpus.hpp"
#include "hcsumm/embedding.hpp"
#include "hcsumm/ngram_lm.hpp"

namespace hcsumm {

inline constexpr double kNegInfinity = -std::numeric_limits<double>::infinity();

enum class LmMode { kBidirectional, kForwardOnly };

struct ObjectiveConfig {
  double gamma = 12.0;
  int target_length = 1;
  bool use_similarity = true;
  LmMode lm_mode = LmMode::kBidirectional;
};

// Composite score in natural-log space:
//   log_score = ln f_lm + gamma * ln f_sim   when |y| == target_length,
//   -inf otherwise (infeasible).
// Disabled terms contribute 0 (their component is reported as 1).
struct ObjectiveValue {
  double log_score = kNegInfinity;
  double f_lm = 0.0;
  double f_sim = 0.0;
  bool feasible = false;
};

// Total order on log_score with -inf strictly smallest; equal scores compare
// equal regardless of components.
std::strong_ordering compare(const ObjectiveValue& a, const ObjectiveValue& b);

// Read-only scorer bundle; all members must outlive anything scoring with it.
struct Scorers {
  const NGramLanguageModel* forward = nullptr;
  const NGramLanguageModel* backward = nullptr;  // may be null when lm_mode is kForwardOnly
  const EmbeddingTable* embeddings = nullptr;    // may be null when use_similarity is false
  const IdfTable* idf = nullptr;
};

// Objective bound to one source sentence. Precomputes token ids and the
// source sentence embedding once so candidate subsequences can be scored
// cheaply by their selected positions.
class SentenceObjective {
 public:
  SentenceObjective(const ObjectiveConfig& config, const Scorers& scorers, TokenSequence source);

  // Scores the subsequence of the source given by ascending positions.
  ObjectiveValue score_positions(const std::vector<int>& positions) const;

  // Scores an arbitrary candidate sequence (need not be a subsequence).
  ObjectiveValue score(const TokenSequence& y) const;

  const TokenSequence& source() const { return source_; }
  int source_length() const { return source_.size(); }
  int target_length() const { return config_.target_length; }
  const ObjectiveConfig& config() const { return config_; }

 private:
  ObjectiveValue combine(double log_f_lm, double f_sim) const;

  ObjectiveConfig config_;
  Scorers scorers_;
  TokenSequence source_;
  std::vector<std::uint32_t> fwd_ids_;  // per source position
  std::vector<std::uint32_t> bwd_ids_;
  std::vector<const std::vector<double>*> vectors_;  // null when token not in table
  std::vector<double> idf_weights_;
  std::vector<double> source_embedding_;
};

// One-shot form of the objective.
ObjectiveValue score(const ObjectiveConfig& config, const Scorers& scorers,
                     const TokenSequence& x, const TokenSequence& y);

}  // namespace hcsumm
