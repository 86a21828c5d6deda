#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hcsumm/corpus.hpp"

namespace hcsumm {

// Directional smoothed n-gram language model.
//
// Training applies interpolated Kneser-Ney smoothing with a fixed discount:
// the top level uses raw n-gram counts, lower levels use continuation counts
// (raw counts for histories starting with the sentence marker, which has no
// left context), and the unigram level interpolates with a uniform
// distribution over the vocabulary so every probability is strictly
// positive. Tokens seen exactly once in the training corpus are mapped to
// <unk> before counting. Backward models reverse each sentence before
// counting and before scoring.
//
// Every conditional distribution sums to 1 over the prediction vocabulary
// (all tokens plus </s> and <unk>; <s> is context-only).
class NGramLanguageModel {
 public:
  enum class Direction { kForward, kBackward };

  static NGramLanguageModel train(const std::vector<TokenSequence>& corpus, int order,
                                  Direction direction, double discount = 0.75);

  // Sum over tokens of ln p(y_i | context). Contexts are padded with <s> at
  // the sequence start; the </s> term is not included. Out-of-vocabulary
  // tokens are scored as <unk>. Backward models score the reversed sequence.
  double sequence_log_prob(const TokenSequence& y) const;

  // p(token | history) as a linear probability; history and token given as
  // strings ("<s>" is a valid history symbol). Diagnostic interface used by
  // tests and analysis.
  double conditional(const std::vector<std::string>& history, const std::string& token) const;

  int order() const { return order_; }
  Direction direction() const { return direction_; }
  double discount() const { return discount_; }

  // Prediction vocabulary: every scorable token including "</s>" and
  // "<unk>", excluding "<s>".
  std::vector<std::string> vocabulary() const;

  // All stored histories (as token strings, possibly containing "<s>").
  std::vector<std::vector<std::string>> stored_contexts() const;

  // Standard ARPA text format, log10 probabilities and backoff weights.
  // Direction and discount are recorded in leading comment lines.
  void save(const std::string& path) const;
  static NGramLanguageModel load(const std::string& path);

  // Counts of stored n-gram entries per level (1-based index order).
  std::vector<std::size_t> level_sizes() const;

  // Fast path for callers that score many subsequences of one sentence:
  // map tokens once, then score id sequences directly. scoring_id maps
  // out-of-vocabulary tokens (and literal reserved symbols) to <unk>.
  std::uint32_t scoring_id(const std::string& token) const;
  double sequence_log_prob_ids(const std::vector<std::uint32_t>& ids) const;

 private:
  using IdVec = std::vector<std::uint32_t>;

  struct IdVecHash {
    std::size_t operator()(const IdVec& v) const {
      std::size_t h = 1469598103934665603ULL;
      for (std::uint32_t x : v) {
        h ^= x;
        h *= 1099511628211ULL;
      }
      return h;
    }
  };

  struct Entry {
    double log_prob = 0.0;     // natural log of the full interpolated probability
    double log_backoff = 0.0;  // natural log of the backoff weight
    bool has_prob = false;
    bool has_backoff = false;
  };

  using Table = std::unordered_map<IdVec, Entry, IdVecHash>;

  static constexpr std::uint32_t kNoId = 0xFFFFFFFFu;

  NGramLanguageModel() = default;

  std::uint32_t intern(const std::string& token);
  std::uint32_t map_context_token(const std::string& token) const;
  double log_conditional(const std::uint32_t* context, int context_len, std::uint32_t token) const;

  int order_ = 1;
  Direction direction_ = Direction::kForward;
  double discount_ = 0.75;
  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, std::uint32_t> token_to_id_;
  std::uint32_t bos_id_ = kNoId;
  std::uint32_t eos_id_ = kNoId;
  std::uint32_t unk_id_ = kNoId;
  std::vector<Table> tables_;  // tables_[k-1] holds the k-gram entries
};

struct FluencyScore {
  double log_prob_forward = 0.0;
  double log_prob_backward = 0.0;
  int token_count = 0;
  double f_lm = 0.0;  // exp((lf + lb) / (2 * token_count)), the inverse bidirectional perplexity
};

// Inverse of the geometric mean of the forward and backward perplexities.
// Requires fwd to be a forward model and bwd a backward model.
FluencyScore fluency(const NGramLanguageModel& fwd, const NGramLanguageModel& bwd,
                     const TokenSequence& y);

}  // namespace hcsumm
