#include "hcsumm/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "hcsumm/error.hpp"

namespace hcsumm {

TokenSequence lead(const TokenSequence& x, const LeadSpec& spec) {
  if (x.empty()) throw EmptySequence();
  switch (spec.kind) {
    case LeadKind::kWords: {
      if (spec.parameter < 1.0) throw std::invalid_argument("lead word count must be >= 1");
      const int keep = std::min(static_cast<int>(spec.parameter), x.size());
      return TokenSequence(
          std::vector<std::string>(x.tokens.begin(), x.tokens.begin() + keep));
    }
    case LeadKind::kPercent: {
      if (!(spec.parameter > 0.0 && spec.parameter <= 100.0)) {
        throw std::invalid_argument("lead percentage must be in (0, 100]");
      }
      const double exact = spec.parameter / 100.0 * x.size();
      const int keep = std::min(x.size(), std::max(1, static_cast<int>(std::floor(exact + 0.5))));
      return TokenSequence(
          std::vector<std::string>(x.tokens.begin(), x.tokens.begin() + keep));
    }
    case LeadKind::kChars: {
      if (spec.parameter < 1.0) throw std::invalid_argument("lead character count must be >= 1");
      return truncate_chars(x, static_cast<int>(spec.parameter));
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<SweepRow> lead_sweep(const ParallelDataset& dataset, LeadKind kind,
                                 std::vector<double> params, const EvalProtocol& protocol) {
  if (params.empty()) throw std::invalid_argument("lead_sweep needs at least one parameter");
  std::sort(params.begin(), params.end());
  std::vector<SweepRow> rows;
  rows.reserve(params.size());
  for (double param : params) {
    std::vector<TokenSequence> summaries;
    summaries.reserve(static_cast<std::size_t>(dataset.size()));
    for (const auto& record : dataset.records) {
      summaries.push_back(lead(record.source, LeadSpec{kind, param}));
    }
    const EvalReport report = evaluate(dataset, summaries, protocol);
    rows.push_back({param, report.r1, report.r2, report.rl, report.avg_len_words});
  }
  return rows;
}

std::string sweep_to_tsv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "param\tr1_p\tr1_r\tr1_f1\tr2_p\tr2_r\tr2_f1\trl_p\trl_r\trl_f1\tavg_len\n";
  char buf[256];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf),
                  "%g\t%.6f\t%.6f\t%.6f\t%.6f\t%.6f\t%.6f\t%.6f\t%.6f\t%.6f\t%.4f\n", row.param,
                  row.r1.precision, row.r1.recall, row.r1.f1, row.r2.precision, row.r2.recall,
                  row.r2.f1, row.rl.precision, row.rl.recall, row.rl.f1, row.avg_len);
    out << buf;
  }
  return out.str();
}

std::string sweep_to_json(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "[\n";
  char buf[320];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    std::snprintf(buf, sizeof(buf),
                  "  {\"param\": %g, \"r1_f1\": %.6f, \"r2_f1\": %.6f, \"rl_f1\": %.6f, "
                  "\"r1_recall\": %.6f, \"avg_len\": %.4f}%s\n",
                  row.param, row.r1.f1, row.r2.f1, row.rl.f1, row.r1.recall, row.avg_len,
                  i + 1 < rows.size() ? "," : "");
    out << buf;
  }
  out << "]\n";
  return out.str();
}

PositionHistogram positional_bias(const std::vector<TokenSequence>& sources,
                                  const std::vector<TokenSequence>& summaries) {
  if (sources.size() != summaries.size()) {
    throw LengthMismatch("got " + std::to_string(summaries.size()) + " summaries for " +
                         std::to_string(sources.size()) + " sources");
  }
  PositionHistogram histogram;
  std::array<long, 4> counts{0, 0, 0, 0};
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const TokenSequence& source = sources[i];
    const int n = source.size();
    if (n == 0) continue;
    // Leftmost-unused alignment: per token type, occurrences are consumed
    // left to right.
    std::unordered_map<std::string, std::vector<int>> occurrences;
    for (int p = n - 1; p >= 0; --p) {
      occurrences[source[p]].push_back(p);  // reversed, so back() is leftmost
    }
    for (const auto& token : summaries[i].tokens) {
      auto it = occurrences.find(token);
      if (it == occurrences.end() || it->second.empty()) {
        ++histogram.skipped;
        continue;
      }
      const int p = it->second.back();
      it->second.pop_back();
      const int bin = std::min(3, 4 * p / n);
      ++counts[static_cast<std::size_t>(bin)];
      ++histogram.aligned;
    }
  }
  if (histogram.aligned > 0) {
    for (std::size_t b = 0; b < 4; ++b) {
      histogram.bins[b] = static_cast<double>(counts[b]) / static_cast<double>(histogram.aligned);
    }
  }
  return histogram;
}

std::string histogram_to_csv(const PositionHistogram& histogram) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "q1,q2,q3,q4\n%.6f,%.6f,%.6f,%.6f\n", histogram.bins[0],
                histogram.bins[1], histogram.bins[2], histogram.bins[3]);
  return buf;
}

BracketReport bracket_report(
    const std::vector<std::pair<std::string, std::vector<TokenSequence>>>& runs,
    const ParallelDataset& dataset, const EvalProtocol& protocol,
    const std::vector<std::pair<double, double>>& brackets) {
  std::vector<std::pair<double, double>> sorted = brackets;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].first >= sorted[i].second) {
      throw OverlappingBrackets("empty or inverted bracket [" +
                                std::to_string(sorted[i].first) + ", " +
                                std::to_string(sorted[i].second) + ")");
    }
    if (i > 0 && sorted[i].first < sorted[i - 1].second) {
      throw OverlappingBrackets("brackets overlap at " + std::to_string(sorted[i].first));
    }
  }

  BracketReport report;
  for (const auto& [lo, hi] : sorted) report.groups.push_back({{lo, hi}, {}});

  for (const auto& [name, summaries] : runs) {
    BracketedRun run;
    run.name = name;
    run.report = evaluate(dataset, summaries, protocol);
    run.avg_len = run.report.avg_len_words;
    bool assigned = false;
    for (auto& group : report.groups) {
      if (run.avg_len >= group.bracket.first && run.avg_len < group.bracket.second) {
        group.runs.push_back(run);
        assigned = true;
        break;
      }
    }
    if (!assigned) report.unassigned.push_back(std::move(run));
  }
  return report;
}

std::string bracket_report_to_tsv(const BracketReport& report) {
  std::ostringstream out;
  out << "bracket_lo\tbracket_hi\trun\tr1_f1\tr2_f1\trl_f1\tavg_len\n";
  char buf[256];
  const auto row = [&](double lo, double hi, const BracketedRun& run) {
    std::snprintf(buf, sizeof(buf), "%g\t%g\t%s\t%.6f\t%.6f\t%.6f\t%.4f\n", lo, hi,
                  run.name.c_str(), run.report.r1.f1, run.report.r2.f1, run.report.rl.f1,
                  run.avg_len);
    out << buf;
  };
  for (const auto& group : report.groups) {
    for (const auto& run : group.runs) row(group.bracket.first, group.bracket.second, run);
  }
  for (const auto& run : report.unassigned) {
    std::snprintf(buf, sizeof(buf), "-\t-\t%s\t%.6f\t%.6f\t%.6f\t%.4f\n", run.name.c_str(),
                  run.report.r1.f1, run.report.r2.f1, run.report.rl.f1, run.avg_len);
    out << buf;
  }
  return out.str();
}

std::string bracket_report_to_json(const BracketReport& report) {
  std::ostringstream out;
  char buf[320];
  const auto run_json = [&buf](const BracketedRun& run) {
    std::snprintf(buf, sizeof(buf),
                  "{\"run\": \"%s\", \"r1_f1\": %.6f, \"r2_f1\": %.6f, \"rl_f1\": %.6f, "
                  "\"avg_len\": %.4f}",
                  run.name.c_str(), run.report.r1.f1, run.report.r2.f1, run.report.rl.f1,
                  run.avg_len);
    return std::string(buf);
  };
  out << "{\n  \"groups\": [\n";
  for (std::size_t g = 0; g < report.groups.size(); ++g) {
    const auto& group = report.groups[g];
    std::snprintf(buf, sizeof(buf), "    {\"bracket\": [%g, %g], \"runs\": [",
                  group.bracket.first, group.bracket.second);
    out << buf;
    for (std::size_t i = 0; i < group.runs.size(); ++i) {
      out << (i > 0 ? ", " : "") << run_json(group.runs[i]);
    }
    out << "]}" << (g + 1 < report.groups.size() ? "," : "") << "\n";
  }
  out << "  ],\n  \"unassigned\": [";
  for (std::size_t i = 0; i < report.unassigned.size(); ++i) {
    out << (i > 0 ? ", " : "") << run_json(report.unassigned[i]);
  }
  out << "]\n}\n";
  return out.str();
}

}  // namespace hcsumm
