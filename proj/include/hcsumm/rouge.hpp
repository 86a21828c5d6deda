#pragma once

#include <string>
#include <vector>

#include "hcsumm/corpus.hpp"

namespace hcsumm {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

enum class RougeVariant { kF1, kTruncatedRecall75 };
enum class MultiRef { kMax, kAverage };

struct EvalProtocol {
  RougeVariant variant = RougeVariant::kF1;
  MultiRef multi_ref = MultiRef::kMax;
  bool lowercase = true;
};

// Clipped n-gram overlap; precision against the candidate's n-gram count,
// recall against the reference's. Empty sides give zero denominators, scored
// as 0.
RougeScore rouge_n(const TokenSequence& candidate, const TokenSequence& reference, int order);

// Longest common subsequence; precision L/|candidate|, recall L/|reference|.
RougeScore rouge_l(const TokenSequence& candidate, const TokenSequence& reference);

// Joins tokens with single spaces, cuts at `limit` characters, drops a
// trailing partial token, and re-tokenizes. Only ever applied to candidates.
TokenSequence truncate_chars(const TokenSequence& t, int limit);

inline TokenSequence truncate_75(const TokenSequence& t) { return truncate_chars(t, 75); }

struct EvalReport {
  RougeScore r1, r2, rl;
  double avg_len_words = 0.0;
  int n_instances = 0;
  std::string protocol;
};

// Scores each summary against its record's references (multi_ref aggregation
// per protocol), then averages over instances. Under kTruncatedRecall75 the
// candidate is truncated at 75 characters before scoring; references are
// never truncated. avg_len_words is computed from the untruncated summaries.
// Throws LengthMismatch unless |summaries| == |dataset.records|.
EvalReport evaluate(const ParallelDataset& dataset, const std::vector<TokenSequence>& summaries,
                    const EvalProtocol& protocol);

std::string report_to_tsv(const EvalReport& report);
std::string report_to_json(const EvalReport& report);

}  // namespace hcsumm
