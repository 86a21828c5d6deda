#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "hcsumm/corpus.hpp"
#include "hcsumm/rouge.hpp"

namespace hcsumm {

enum class LeadKind { kWords, kPercent, kChars };

struct LeadSpec {
  LeadKind kind = LeadKind::kWords;
  double parameter = 8.0;  // word count, percentage in (0, 100], or character count
};

// Prefix baselines: the first n words (words), the first
// max(1, round(p/100 * |x|)) words (percent, round half up), or a
// character-limit cut with the trailing partial token dropped (chars).
TokenSequence lead(const TokenSequence& x, const LeadSpec& spec);

struct SweepRow {
  double param = 0.0;
  RougeScore r1, r2, rl;
  double avg_len = 0.0;
};

// One evaluate() run per parameter value; rows sorted by parameter.
std::vector<SweepRow> lead_sweep(const ParallelDataset& dataset, LeadKind kind,
                                 std::vector<double> params, const EvalProtocol& protocol);

std::string sweep_to_tsv(const std::vector<SweepRow>& rows);
std::string sweep_to_json(const std::vector<SweepRow>& rows);

// Normalized frequency of summary-word extraction positions over source
// quartiles (0-25%, 25-50%, 50-75%, 75-100%).
struct PositionHistogram {
  std::array<double, 4> bins{0.0, 0.0, 0.0, 0.0};
  long aligned = 0;
  long skipped = 0;  // summary tokens with no unused source occurrence
};

// Each summary token is aligned to the leftmost unused source occurrence of
// that token; a position at 0-based index i of an n-token source falls into
// bin min(3, floor(4 * i / n)). Throws LengthMismatch when the list sizes
// differ.
PositionHistogram positional_bias(const std::vector<TokenSequence>& sources,
                                  const std::vector<TokenSequence>& summaries);

std::string histogram_to_csv(const PositionHistogram& histogram);

struct BracketedRun {
  std::string name;
  EvalReport report;
  double avg_len = 0.0;
};

struct BracketGroup {
  std::pair<double, double> bracket;  // [lo, hi)
  std::vector<BracketedRun> runs;
};

struct BracketReport {
  std::vector<BracketGroup> groups;
  std::vector<BracketedRun> unassigned;
};

// Evaluates each named run and groups it by the bracket containing its
// average output length (half-open [lo, hi) intervals). Throws
// OverlappingBrackets when intervals intersect.
BracketReport bracket_report(
    const std::vector<std::pair<std::string, std::vector<TokenSequence>>>& runs,
    const ParallelDataset& dataset, const EvalProtocol& protocol,
    const std::vector<std::pair<double, double>>& brackets);

std::string bracket_report_to_tsv(const BracketReport& report);
std::string bracket_report_to_json(const BracketReport& report);

}  // namespace hcsumm
