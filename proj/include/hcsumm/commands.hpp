#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hcsumm {

// Exit codes shared by every command: 0 success, 1 partial (per-instance
// failures were recorded), 2 fatal.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitFatal = 2;

struct TrainLmArgs {
  std::string corpus_path;
  std::string out_path;
  int order = 4;
  bool backward = false;
  double discount = 0.75;
  bool lowercase = true;
};
int cmd_train_lm(const TrainLmArgs& args);

struct BuildIdfArgs {
  std::string corpus_path;
  std::string out_path;
  bool lowercase = true;
};
int cmd_build_idf(const BuildIdfArgs& args);

struct SummarizeArgs {
  std::string input_path;
  std::string format = "plain";  // plain | tsv (sources only)
  std::string lm_fwd_path;
  std::string lm_bwd_path;  // optional when lm_forward_only
  std::string embeddings_path;
  std::string idf_path;
  std::string out_path;    // empty or "-" writes to stdout
  std::string trace_path;  // optional JSON-lines trace of accepted steps
  std::optional<int> len_words;
  std::optional<double> len_ratio;  // percent of the input length
  double gamma = 12.0;
  double beta_r = 0.035;
  double beta_t = 0.1;
  std::optional<int> restarts;  // explicit budget overrides
  std::optional<int> steps;
  std::uint64_t seed = 0;
  int workers = 1;
  bool no_sim = false;
  bool lm_forward_only = false;
  bool lowercase = true;
};
int cmd_summarize(const SummarizeArgs& args);

struct EvaluateArgs {
  std::string summaries_path;  // plain text or summarize JSON-lines (auto-detected)
  std::string dataset_path;    // TSV with references
  std::string out_tsv;
  std::string out_json;
  bool truncate75 = false;
  std::string multi_ref = "max";  // max | avg
  bool lowercase = true;
};
int cmd_evaluate(const EvaluateArgs& args);

struct LeadSweepArgs {
  std::string dataset_path;
  std::string kind = "words";  // words | percent
  std::vector<double> params;
  bool truncate75 = false;
  std::string multi_ref = "max";
  std::string out_path;
};
int cmd_analyze_lead_sweep(const LeadSweepArgs& args);

struct PositionalBiasArgs {
  std::string sources_path;    // plain text
  std::string summaries_path;  // plain text or JSON-lines (auto-detected)
  std::string out_path;
};
int cmd_analyze_positional_bias(const PositionalBiasArgs& args);

struct ExhaustiveGapArgs {
  std::string dataset_path;  // TSV with references
  std::string lm_fwd_path;
  std::string lm_bwd_path;
  std::string embeddings_path;
  std::string idf_path;
  std::optional<int> len_words;
  std::optional<double> len_ratio;
  double gamma = 12.0;
  double beta_r = 0.035;
  double beta_t = 0.1;
  std::optional<int> restarts;
  std::optional<int> steps;
  std::uint64_t seed = 0;
  std::uint64_t cap = 2'000'000;
  bool no_sim = false;
  bool lm_forward_only = false;
  std::string out_path;
};
int cmd_analyze_exhaustive_gap(const ExhaustiveGapArgs& args);

}  // namespace hcsumm
