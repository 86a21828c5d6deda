#include "hcsumm/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hcsumm/baselines.hpp"
#include "hcsumm/corpus.hpp"
#include "hcsumm/embedding.hpp"
#include "hcsumm/error.hpp"
#include "hcsumm/ngram_lm.hpp"
#include "hcsumm/objective.hpp"
#include "hcsumm/rouge.hpp"
#include "hcsumm/search.hpp"

namespace hcsumm {

namespace {

using nlohmann::json;

int fatal(const std::string& message) {
  std::fprintf(stderr, "error: %s\n", message.c_str());
  return kExitFatal;
}

// Writes to the named file, or to stdout for "" / "-".
struct OutputSink {
  explicit OutputSink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file.open(path);
      if (!file) throw IoError("cannot open for writing: " + path);
    }
  }
  std::ostream& stream() { return file.is_open() ? file : std::cout; }
  void finish() {
    if (file.is_open()) {
      file.close();
      if (file.fail()) throw IoError("write failed");
    } else {
      std::cout.flush();
    }
  }
  std::ofstream file;
};

int resolve_target_length(const std::optional<int>& words, const std::optional<double>& ratio,
                          int n) {
  if (words.has_value()) return std::min(*words, n);
  const double exact = *ratio / 100.0 * n;
  const int s = std::max(1, static_cast<int>(std::floor(exact + 0.5)));
  return std::min(s, n);
}

std::vector<TokenSequence> read_summaries_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::vector<TokenSequence> summaries;
  std::string line;
  long line_no = 0;
  bool jsonl = false;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (first) {
      // summarize output is JSON-lines; bare text files hold one summary
      // per line (possibly empty).
      jsonl = !line.empty() && line[0] == '{';
      first = false;
    }
    if (!jsonl) {
      summaries.push_back(tokenize(line, /*lowercase=*/false));
      continue;
    }
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(line_no, std::string("invalid JSON record: ") + e.what());
    }
    if (record.contains("error")) {
      throw ParseError(line_no, "record carries an error: " +
                                    record["error"].get<std::string>());
    }
    if (!record.contains("summary")) throw ParseError(line_no, "record has no 'summary' field");
    summaries.push_back(tokenize(record["summary"].get<std::string>(), /*lowercase=*/false));
  }
  return summaries;
}

struct LoadedModels {
  std::unique_ptr<NGramLanguageModel> forward;
  std::unique_ptr<NGramLanguageModel> backward;
  std::unique_ptr<EmbeddingTable> embeddings;
  std::unique_ptr<IdfTable> idf;
  Scorers scorers;
};

LoadedModels load_models(const std::string& fwd_path, const std::string& bwd_path,
                         const std::string& emb_path, const std::string& idf_path,
                         bool need_backward, bool need_similarity) {
  LoadedModels m;
  m.forward = std::make_unique<NGramLanguageModel>(NGramLanguageModel::load(fwd_path));
  if (m.forward->direction() != NGramLanguageModel::Direction::kForward) {
    throw Error(fwd_path + " is not a forward model");
  }
  m.scorers.forward = m.forward.get();
  if (need_backward) {
    if (bwd_path.empty()) throw Error("--lm-bwd is required unless --lm-forward-only is set");
    m.backward = std::make_unique<NGramLanguageModel>(NGramLanguageModel::load(bwd_path));
    if (m.backward->direction() != NGramLanguageModel::Direction::kBackward) {
      throw Error(bwd_path + " is not a backward model (train with --direction backward)");
    }
    m.scorers.backward = m.backward.get();
  }
  if (need_similarity) {
    if (emb_path.empty() || idf_path.empty()) {
      throw Error("--embeddings and --idf are required unless --no-sim is set");
    }
    m.embeddings = std::make_unique<EmbeddingTable>(EmbeddingTable::load(emb_path));
    m.idf = std::make_unique<IdfTable>(IdfTable::load(idf_path));
    m.scorers.embeddings = m.embeddings.get();
    m.scorers.idf = m.idf.get();
  }
  return m;
}

void parallel_instances(int tasks, int workers, const std::function<void(int)>& body) {
  workers = std::max(1, std::min(workers, tasks));
  if (workers == 1) {
    for (int i = 0; i < tasks; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
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

int cmd_train_lm(const TrainLmArgs& args) {
  try {
    const auto corpus = read_corpus(args.corpus_path, args.lowercase);
    const auto model = NGramLanguageModel::train(
        corpus, args.order,
        args.backward ? NGramLanguageModel::Direction::kBackward
                      : NGramLanguageModel::Direction::kForward,
        args.discount);
    model.save(args.out_path);
    const auto sizes = model.level_sizes();
    std::fprintf(stderr, "trained %s order-%d model on %zu sentences, vocab %zu\n",
                 args.backward ? "backward" : "forward", args.order, corpus.size(),
                 model.vocabulary().size());
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      std::fprintf(stderr, "  %zu-grams: %zu\n", k + 1, sizes[k]);
    }
    return kExitOk;
  } catch (const std::exception& e) {
    return fatal(e.what());
  }
}

int cmd_build_idf(const BuildIdfArgs& args) {
  try {
    const auto corpus = read_corpus(args.corpus_path, args.lowercase);
    const IdfTable table = build_idf(corpus);
    table.save(args.out_path);
    std::fprintf(stderr, "idf over %ld sentences, %zu token types\n", table.doc_count(),
                 table.table().size());
    return kExitOk;
  } catch (const std::exception& e) {
    return fatal(e.what());
  }
}

int cmd_summarize(const SummarizeArgs& args) {
  LoadedModels models;
  ParallelDataset dataset;
  try {
    if (args.len_words.has_value() == args.len_ratio.has_value()) {
      throw Error("exactly one of --len and --len-ratio must be given");
    }
    if (args.len_words && *args.len_words < 1) throw Error("--len must be >= 1");
    if (args.len_ratio && !(*args.len_ratio > 0.0 && *args.len_ratio <= 100.0)) {
      throw Error("--len-ratio must be in (0, 100]");
    }
    models = load_models(args.lm_fwd_path, args.lm_bwd_path, args.embeddings_path, args.idf_path,
                         !args.lm_forward_only, !args.no_sim);
    dataset = load_dataset(args.input_path,
                           args.format == "tsv" ? DatasetFormat::kTsv : DatasetFormat::kPlain,
                           args.lowercase);
  } catch (const std::exception& e) {
    return fatal(e.what());
  }

  const int n_instances = dataset.size();
  const int instance_workers = std::max(1, std::min(args.workers, std::max(1, n_instances)));
  const int search_workers = std::max(1, args.workers / instance_workers);

  std::vector<std::string> lines(static_cast<std::size_t>(n_instances));
  std::vector<std::vector<TraceEntry>> traces(static_cast<std::size_t>(n_instances));
  std::atomic<int> failures{0};
  const bool want_trace = !args.trace_path.empty();

  parallel_instances(n_instances, instance_workers, [&](int i) {
    const TokenSequence& source = dataset.records[static_cast<std::size_t>(i)].source;
    json record;
    record["id"] = i + 1;
    record["source"] = join(source);
    record["seed"] = args.seed;
    try {
      const int n = source.size();
      const int s = resolve_target_length(args.len_words, args.len_ratio, n);
      if (args.len_words && *args.len_words > n) {
        std::fprintf(stderr, "warning: instance %d has %d tokens, clamping length %d to %d\n",
                     i + 1, n, *args.len_words, n);
      }
      ObjectiveConfig config;
      config.gamma = args.gamma;
      config.target_length = s;
      config.use_similarity = !args.no_sim;
      config.lm_mode = args.lm_forward_only ? LmMode::kForwardOnly : LmMode::kBidirectional;
      const SentenceObjective objective(config, models.scorers, source);

      SearchBudget budget = derive_budget(n, s, args.beta_r, args.beta_t);
      if (args.restarts) budget.restarts = *args.restarts;
      if (args.steps) budget.steps = *args.steps;

      SearchOptions options;
      options.workers = search_workers;
      options.keep_trace = want_trace;
      const SearchResult result =
          fchc(source, objective, budget, mix_seed(args.seed, static_cast<std::uint64_t>(i)),
               options);

      record["summary"] = join(apply_mask(source, result.best_mask));
      record["s"] = s;
      record["score"] = result.best_value.log_score;
      record["f_lm"] = result.best_value.f_lm;
      record["f_sim"] = result.best_value.f_sim;
      record["evaluations"] = result.evaluations;
      if (want_trace) traces[static_cast<std::size_t>(i)] = result.trace;
    } catch (const std::exception& e) {
      record["error"] = e.what();
      failures.fetch_add(1);
    }
    lines[static_cast<std::size_t>(i)] = record.dump();
  });

  try {
    OutputSink out(args.out_path);
    for (const auto& line : lines) out.stream() << line << "\n";
    out.finish();
    if (want_trace) {
      std::ofstream trace_out(args.trace_path);
      if (!trace_out) throw IoError("cannot open for writing: " + args.trace_path);
      for (int i = 0; i < n_instances; ++i) {
        for (const auto& entry : traces[static_cast<std::size_t>(i)]) {
          // Same record as trace_entry_to_json plus the instance id.
          trace_out << "{\"id\":" << (i + 1) << "," << trace_entry_to_json(entry).substr(1)
                    << "\n";
        }
      }
      if (!trace_out) throw IoError("write failed: " + args.trace_path);
    }
  } catch (const std::exception& e) {
    return fatal(e.what());
  }
  return failures.load() > 0 ? kExitPartial : kExitOk;
}

int cmd_evaluate(const EvaluateArgs& args) {
  try {
    const ParallelDataset dataset = load_dataset(args.dataset_path, DatasetFormat::kTsv,
                                                 args.lowercase);
    const std::vector<TokenSequence> summaries = read_summaries_file(args.summaries_path);

    EvalProtocol protocol;
    protocol.variant = args.truncate75 ? RougeVariant::kTruncatedRecall75 : RougeVariant::kF1;
    protocol.multi_ref = args.multi_ref == "avg" ? MultiRef::kAverage : MultiRef::kMax;
    protocol.lowercase = args.lowercase;

    const EvalReport report = evaluate(dataset, summaries, protocol);
    const std::string tsv = report_to_tsv(report);
    std::fputs(tsv.c_str(), stdout);
    if (!args.out_tsv.empty()) {
      std::ofstream out(args.out_tsv);
      if (!out) throw IoError("cannot open for writing: " + args.out_tsv);
      out << tsv;
    }
    if (!args.out_json.empty()) {
      std::ofstream out(args.out_json);
      if (!out) throw IoError("cannot open for writing: " + args.out_json);
      out << report_to_json(report);
    }
    return kExitOk;
  } catch (const std::exception& e) {
    return fatal(e.what());
  }
}

int cmd_analyze_lead_sweep(const LeadSweepArgs& args) {
  try {
    const ParallelDataset dataset = load_dataset(args.dataset_path, DatasetFormat::kTsv, true);
    EvalProtocol protocol;
    protocol.variant = args.truncate75 ? RougeVariant::kTruncatedRecall75 : RougeVariant::kF1;
    protocol.multi_ref = args.multi_ref == "avg" ? MultiRef::kAverage : MultiRef::kMax;
    const LeadKind kind = args.kind == "percent" ? LeadKind::kPercent : LeadKind::kWords;
    const auto rows = lead_sweep(dataset, kind, args.params, protocol);
    OutputSink out(args.out_path);
    out.stream() << sweep_to_tsv(rows);
    out.finish();
    return kExitOk;
  } catch (const std::exception& e) {
    return fatal(e.what());
  }
}

int cmd_analyze_positional_bias(const PositionalBiasArgs& args) {
  try {
    std::vector<TokenSequence> sources;
    {
      std::ifstream in(args.sources_path);
      if (!in) throw IoError("cannot open: " + args.sources_path);
      std::string line;
      while (std::getline(in, line)) sources.push_back(tokenize(line, /*lowercase=*/false));
    }
    const std::vector<TokenSequence> summaries = read_summaries_file(args.summaries_path);
    const PositionHistogram histogram = positional_bias(sources, summaries);
    OutputSink out(args.out_path);
    out.stream() << histogram_to_csv(histogram);
    out.finish();
    std::fprintf(stderr, "aligned %ld tokens, skipped %ld\n", histogram.aligned,
                 histogram.skipped);
    return kExitOk;
  } catch (const std::exception& e) {
    return fatal(e.what());
  }
}

int cmd_analyze_exhaustive_gap(const ExhaustiveGapArgs& args) {
  try {
    if (args.len_words.has_value() == args.len_ratio.has_value()) {
      throw Error("exactly one of --len and --len-ratio must be given");
    }
    LoadedModels models =
        load_models(args.lm_fwd_path, args.lm_bwd_path, args.embeddings_path, args.idf_path,
                    !args.lm_forward_only, !args.no_sim);
    const ParallelDataset dataset = load_dataset(args.dataset_path, DatasetFormat::kTsv, true);

    OutputSink out(args.out_path);
    out.stream() << "id\tn\ts\tcandidates\tobj_fchc\tobj_exh\tobj_gap\trl_fchc\trl_exh\trl_gap\n";

    long evaluated = 0, skipped = 0, suboptimal = 0, rouge_better = 0;
    for (int i = 0; i < dataset.size(); ++i) {
      const auto& record = dataset.records[static_cast<std::size_t>(i)];
      const int n = record.source.size();
      const int s = resolve_target_length(args.len_words, args.len_ratio, n);
      if (n_choose_s(n, s) > args.cap) {
        ++skipped;
        continue;
      }

      ObjectiveConfig config;
      config.gamma = args.gamma;
      config.target_length = s;
      config.use_similarity = !args.no_sim;
      config.lm_mode = args.lm_forward_only ? LmMode::kForwardOnly : LmMode::kBidirectional;
      const SentenceObjective objective(config, models.scorers, record.source);

      SearchBudget budget = derive_budget(n, s, args.beta_r, args.beta_t);
      if (args.restarts) budget.restarts = *args.restarts;
      if (args.steps) budget.steps = *args.steps;

      const SearchResult hc =
          fchc(record.source, objective, budget, mix_seed(args.seed, static_cast<std::uint64_t>(i)));
      const SearchResult exh = exhaustive_search(record.source, objective, args.cap);

      // Best ROUGE-L F1 over the references, lowercased.
      const auto best_rl = [&record](const TokenSequence& summary) {
        EvalProtocol protocol;
        ParallelDataset single;
        single.records.push_back(record);
        return evaluate(single, {summary}, protocol).rl.f1;
      };
      const double rl_hc = best_rl(apply_mask(record.source, hc.best_mask));
      const double rl_exh = best_rl(apply_mask(record.source, exh.best_mask));
      const double obj_gap = exh.best_value.log_score - hc.best_value.log_score;

      char buf[320];
      std::snprintf(buf, sizeof(buf),
                    "%d\t%d\t%d\t%llu\t%.9f\t%.9f\t%.9g\t%.6f\t%.6f\t%.9g\n", i + 1, n, s,
                    static_cast<unsigned long long>(exh.evaluations), hc.best_value.log_score,
                    exh.best_value.log_score, obj_gap, rl_hc, rl_exh, rl_exh - rl_hc);
      out.stream() << buf;

      ++evaluated;
      if (obj_gap > 1e-9) {
        ++suboptimal;
        if (rl_exh > rl_hc) ++rouge_better;
      }
    }
    out.finish();
    std::fprintf(stderr,
                 "evaluated %ld instances (%ld skipped over cap); "
                 "search missed the optimum on %ld (%.1f%%); "
                 "the optimum had higher rouge-l on %ld of those\n",
                 evaluated, skipped, suboptimal,
                 evaluated > 0 ? 100.0 * static_cast<double>(suboptimal) /
                                     static_cast<double>(evaluated)
                               : 0.0,
                 rouge_better);
    return kExitOk;
  } catch (const std::exception& e) {
    return fatal(e.what());
  }
}

}  // namespace hcsumm
