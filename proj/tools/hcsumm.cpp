// Command-line front end: train models, summarize, evaluate, analyze.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hcsumm/commands.hpp"

namespace {

// Accepts "2,4,6" lists and "2:20" inclusive integer ranges.
std::vector<double> parse_params(const std::vector<std::string>& specs) {
  std::vector<double> params;
  for (const auto& spec : specs) {
    std::size_t start = 0;
    while (start <= spec.size()) {
      const auto comma = spec.find(',', start);
      const std::string item =
          spec.substr(start, comma == std::string::npos ? comma : comma - start);
      if (!item.empty()) {
        const auto colon = item.find(':');
        if (colon != std::string::npos) {
          const long lo = std::stol(item.substr(0, colon));
          const long hi = std::stol(item.substr(colon + 1));
          for (long v = lo; v <= hi; ++v) params.push_back(static_cast<double>(v));
        } else {
          params.push_back(std::stod(item));
        }
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return params;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised sentence summarization by hill-climbing word extraction"};
  app.require_subcommand(1);

  // train-lm
  hcsumm::TrainLmArgs train_args;
  std::string direction = "forward";
  auto* train = app.add_subcommand("train-lm", "Train a smoothed n-gram language model");
  train->add_option("--corpus", train_args.corpus_path, "Tokenized corpus, one sentence per line")
      ->required();
  train->add_option("--out", train_args.out_path, "Output ARPA file")->required();
  train->add_option("--order", train_args.order, "n-gram order")->check(CLI::PositiveNumber);
  train->add_option("--direction", direction, "forward or backward")
      ->check(CLI::IsMember({"forward", "backward"}));
  train->add_option("--discount", train_args.discount, "Kneser-Ney discount in (0, 1)");
  train->add_flag("--no-lowercase", [&](std::int64_t) { train_args.lowercase = false; },
                  "Keep corpus case");

  // build-idf
  hcsumm::BuildIdfArgs idf_args;
  auto* build_idf = app.add_subcommand("build-idf", "Compute document frequencies for idf");
  build_idf->add_option("--corpus", idf_args.corpus_path, "Tokenized corpus")->required();
  build_idf->add_option("--out", idf_args.out_path, "Output idf table")->required();
  build_idf->add_flag("--no-lowercase", [&](std::int64_t) { idf_args.lowercase = false; },
                      "Keep corpus case");

  // summarize
  hcsumm::SummarizeArgs sum_args;
  int sum_len = 0;
  double sum_ratio = 0.0;
  auto* summarize = app.add_subcommand("summarize", "Extract summaries by hill climbing");
  summarize->add_option("--input", sum_args.input_path, "Input sentences")->required();
  summarize->add_option("--format", sum_args.format, "plain or tsv")
      ->check(CLI::IsMember({"plain", "tsv"}));
  summarize->add_option("--lm-fwd", sum_args.lm_fwd_path, "Forward ARPA model")->required();
  summarize->add_option("--lm-bwd", sum_args.lm_bwd_path, "Backward ARPA model");
  summarize->add_option("--embeddings", sum_args.embeddings_path, "word2vec text embeddings");
  summarize->add_option("--idf", sum_args.idf_path, "idf table");
  auto* len_opt = summarize->add_option("--len", sum_len, "Target summary length in words");
  auto* ratio_opt =
      summarize->add_option("--len-ratio", sum_ratio, "Target length as percent of input");
  len_opt->excludes(ratio_opt);
  summarize->add_option("--gamma", sum_args.gamma, "Similarity exponent");
  summarize->add_option("--beta-r", sum_args.beta_r, "Restart budget coefficient");
  summarize->add_option("--beta-t", sum_args.beta_t, "Step budget coefficient");
  int sum_restarts = 0, sum_steps = 0;
  auto* restarts_opt =
      summarize->add_option("--restarts", sum_restarts, "Override the derived restart count");
  auto* steps_opt = summarize->add_option("--steps", sum_steps, "Override the derived step count");
  summarize->add_option("--seed", sum_args.seed, "Master random seed");
  summarize->add_option("--workers", sum_args.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  summarize->add_flag("--no-sim", sum_args.no_sim, "Drop the similarity term");
  summarize->add_flag("--lm-forward-only", sum_args.lm_forward_only,
                      "Score fluency with the forward model only");
  summarize->add_option("--trace", sum_args.trace_path, "Write accepted-step trace (JSON lines)");
  summarize->add_option("--out", sum_args.out_path, "Output JSON-lines file (default stdout)");

  // evaluate
  hcsumm::EvaluateArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "Score summaries with ROUGE");
  evaluate->add_option("--summaries", eval_args.summaries_path, "Summaries (text or JSON lines)")
      ->required();
  evaluate->add_option("--dataset", eval_args.dataset_path, "TSV dataset with references")
      ->required();
  evaluate->add_flag("--truncate-75", eval_args.truncate75,
                     "Truncated-recall protocol (75 characters)");
  evaluate->add_option("--multi-ref", eval_args.multi_ref, "max or avg")
      ->check(CLI::IsMember({"max", "avg"}));
  evaluate->add_option("--out-tsv", eval_args.out_tsv, "Also write the report as TSV");
  evaluate->add_option("--out-json", eval_args.out_json, "Also write the report as JSON");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Sweeps, bias histograms, search-gap reports");
  analyze->require_subcommand(1);

  hcsumm::LeadSweepArgs sweep_args;
  std::vector<std::string> sweep_param_specs;
  auto* sweep = analyze->add_subcommand("lead-sweep", "ROUGE of lead baselines over a parameter");
  sweep->add_option("--dataset", sweep_args.dataset_path, "TSV dataset")->required();
  sweep->add_option("--kind", sweep_args.kind, "words or percent")
      ->check(CLI::IsMember({"words", "percent"}));
  sweep->add_option("--params", sweep_param_specs, "Values, e.g. 2:20 or 25,50,75")->required();
  sweep->add_flag("--truncate-75", sweep_args.truncate75, "Truncated-recall protocol");
  sweep->add_option("--multi-ref", sweep_args.multi_ref, "max or avg")
      ->check(CLI::IsMember({"max", "avg"}));
  sweep->add_option("--out", sweep_args.out_path, "Output TSV (default stdout)");

  hcsumm::PositionalBiasArgs bias_args;
  auto* bias = analyze->add_subcommand("positional-bias",
                                       "Quartile histogram of extraction positions");
  bias->add_option("--sources", bias_args.sources_path, "Source sentences")->required();
  bias->add_option("--summaries", bias_args.summaries_path, "Summaries (text or JSON lines)")
      ->required();
  bias->add_option("--out", bias_args.out_path, "Output CSV (default stdout)");

  hcsumm::ExhaustiveGapArgs gap_args;
  int gap_len = 0;
  double gap_ratio = 0.0;
  auto* gap = analyze->add_subcommand("exhaustive-gap",
                                      "Hill climbing vs exhaustive search per instance");
  gap->add_option("--dataset", gap_args.dataset_path, "TSV dataset")->required();
  gap->add_option("--lm-fwd", gap_args.lm_fwd_path, "Forward ARPA model")->required();
  gap->add_option("--lm-bwd", gap_args.lm_bwd_path, "Backward ARPA model");
  gap->add_option("--embeddings", gap_args.embeddings_path, "word2vec text embeddings");
  gap->add_option("--idf", gap_args.idf_path, "idf table");
  auto* gap_len_opt = gap->add_option("--len", gap_len, "Target length in words");
  auto* gap_ratio_opt = gap->add_option("--len-ratio", gap_ratio, "Target length percent");
  gap_len_opt->excludes(gap_ratio_opt);
  gap->add_option("--gamma", gap_args.gamma, "Similarity exponent");
  gap->add_option("--beta-r", gap_args.beta_r, "Restart budget coefficient");
  gap->add_option("--beta-t", gap_args.beta_t, "Step budget coefficient");
  int gap_restarts = 0, gap_steps = 0;
  auto* gap_restarts_opt = gap->add_option("--restarts", gap_restarts, "Override restart count");
  auto* gap_steps_opt = gap->add_option("--steps", gap_steps, "Override step count");
  gap->add_option("--seed", gap_args.seed, "Master random seed");
  gap->add_option("--cap", gap_args.cap, "Skip instances with more candidates than this");
  gap->add_flag("--no-sim", gap_args.no_sim, "Drop the similarity term");
  gap->add_flag("--lm-forward-only", gap_args.lm_forward_only, "Forward fluency only");
  gap->add_option("--out", gap_args.out_path, "Output TSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) {
    train_args.backward = direction == "backward";
    return hcsumm::cmd_train_lm(train_args);
  }
  if (build_idf->parsed()) return hcsumm::cmd_build_idf(idf_args);
  if (summarize->parsed()) {
    if (len_opt->count() > 0) sum_args.len_words = sum_len;
    if (ratio_opt->count() > 0) sum_args.len_ratio = sum_ratio;
    if (restarts_opt->count() > 0) sum_args.restarts = sum_restarts;
    if (steps_opt->count() > 0) sum_args.steps = sum_steps;
    return hcsumm::cmd_summarize(sum_args);
  }
  if (evaluate->parsed()) return hcsumm::cmd_evaluate(eval_args);
  if (analyze->parsed()) {
    if (sweep->parsed()) {
      sweep_args.params = parse_params(sweep_param_specs);
      return hcsumm::cmd_analyze_lead_sweep(sweep_args);
    }
    if (bias->parsed()) return hcsumm::cmd_analyze_positional_bias(bias_args);
    if (gap->parsed()) {
      if (gap_len_opt->count() > 0) gap_args.len_words = gap_len;
      if (gap_ratio_opt->count() > 0) gap_args.len_ratio = gap_ratio;
      if (gap_restarts_opt->count() > 0) gap_args.restarts = gap_restarts;
      if (gap_steps_opt->count() > 0) gap_args.steps = gap_steps;
      return hcsumm::cmd_analyze_exhaustive_gap(gap_args);
    }
  }
  std::fprintf(stderr, "error: no subcommand\n");
  return hcsumm::kExitFatal;
}
