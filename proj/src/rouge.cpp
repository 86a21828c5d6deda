#include "hcsumm/rouge.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "hcsumm/error.hpp"

namespace hcsumm {

namespace {

double f_measure(double p, double r) { return (p + r > 0.0) ? 2.0 * p * r / (p + r) : 0.0; }

// n-grams keyed by tokens joined with an unprintable separator.
std::unordered_map<std::string, int> ngram_counts(const TokenSequence& t, int order) {
  std::unordered_map<std::string, int> counts;
  const int n = t.size();
  for (int i = 0; i + order <= n; ++i) {
    std::string key = t[i];
    for (int j = 1; j < order; ++j) {
      key.push_back('\x1f');
      key += t[i + j];
    }
    ++counts[key];
  }
  return counts;
}

TokenSequence lowercased(const TokenSequence& t) {
  TokenSequence out = t;
  for (auto& token : out.tokens) {
    for (auto& c : token) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

struct InstanceScores {
  RougeScore r1, r2, rl;
};

RougeScore aggregate(const std::vector<RougeScore>& per_ref, MultiRef mode, bool primary_recall) {
  if (mode == MultiRef::kAverage) {
    RougeScore mean;
    for (const auto& s : per_ref) {
      mean.precision += s.precision;
      mean.recall += s.recall;
      mean.f1 += s.f1;
    }
    const double k = static_cast<double>(per_ref.size());
    mean.precision /= k;
    mean.recall /= k;
    mean.f1 /= k;
    return mean;
  }
  // max mode: the reference maximizing the protocol's headline measure wins;
  // ties keep the earliest reference.
  std::size_t best = 0;
  for (std::size_t i = 1; i < per_ref.size(); ++i) {
    const double a = primary_recall ? per_ref[i].recall : per_ref[i].f1;
    const double b = primary_recall ? per_ref[best].recall : per_ref[best].f1;
    if (a > b) best = i;
  }
  return per_ref[best];
}

}  // namespace

RougeScore rouge_n(const TokenSequence& candidate, const TokenSequence& reference, int order) {
  const auto cand = ngram_counts(candidate, order);
  const auto ref = ngram_counts(reference, order);
  long cand_total = 0;
  long match = 0;
  for (const auto& [gram, count] : cand) {
    cand_total += count;
    auto it = ref.find(gram);
    if (it != ref.end()) match += std::min(count, it->second);
  }
  long ref_total = 0;
  for (const auto& [gram, count] : ref) ref_total += count;

  RougeScore score;
  score.precision = cand_total > 0 ? static_cast<double>(match) / cand_total : 0.0;
  score.recall = ref_total > 0 ? static_cast<double>(match) / ref_total : 0.0;
  score.f1 = f_measure(score.precision, score.recall);
  return score;
}

RougeScore rouge_l(const TokenSequence& candidate, const TokenSequence& reference) {
  const int m = candidate.size();
  const int n = reference.size();
  RougeScore score;
  if (m == 0 || n == 0) return score;

  // Rolling-row LCS.
  std::vector<int> prev(n + 1, 0), curr(n + 1, 0);
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (candidate[i - 1] == reference[j - 1]) {
        curr[j] = prev[j - 1] + 1;
      } else {
        curr[j] = std::max(prev[j], curr[j - 1]);
      }
    }
    std::swap(prev, curr);
  }
  const int lcs = prev[n];
  score.precision = static_cast<double>(lcs) / m;
  score.recall = static_cast<double>(lcs) / n;
  score.f1 = f_measure(score.precision, score.recall);
  return score;
}

TokenSequence truncate_chars(const TokenSequence& t, int limit) {
  const std::string joined = join(t);
  if (static_cast<int>(joined.size()) <= limit) return t;
  std::string prefix = joined.substr(0, static_cast<std::size_t>(limit));
  // The cut split a token iff the characters on both sides of the boundary
  // are non-spaces; drop that partial token.
  if (!prefix.empty() && prefix.back() != ' ' && joined[static_cast<std::size_t>(limit)] != ' ') {
    const auto last_space = prefix.find_last_of(' ');
    prefix = last_space == std::string::npos ? std::string() : prefix.substr(0, last_space);
  }
  return tokenize(prefix, /*lowercase=*/false);
}

EvalReport evaluate(const ParallelDataset& dataset, const std::vector<TokenSequence>& summaries,
                    const EvalProtocol& protocol) {
  if (static_cast<int>(summaries.size()) != dataset.size()) {
    throw LengthMismatch("got " + std::to_string(summaries.size()) + " summaries for " +
                         std::to_string(dataset.size()) + " dataset records");
  }
  const bool truncated = protocol.variant == RougeVariant::kTruncatedRecall75;

  EvalReport report;
  report.n_instances = dataset.size();
  double total_len = 0.0;
  for (int i = 0; i < dataset.size(); ++i) {
    const auto& record = dataset.records[static_cast<std::size_t>(i)];
    if (record.references.empty()) throw EmptyReference(i + 1);

    TokenSequence cand =
        protocol.lowercase ? lowercased(summaries[static_cast<std::size_t>(i)]) : summaries[static_cast<std::size_t>(i)];
    total_len += cand.size();
    if (truncated) cand = truncate_75(cand);

    std::vector<RougeScore> s1, s2, sl;
    for (const auto& raw_ref : record.references) {
      const TokenSequence ref = protocol.lowercase ? lowercased(raw_ref) : raw_ref;
      s1.push_back(rouge_n(cand, ref, 1));
      s2.push_back(rouge_n(cand, ref, 2));
      sl.push_back(rouge_l(cand, ref));
    }
    const InstanceScores inst{aggregate(s1, protocol.multi_ref, truncated),
                              aggregate(s2, protocol.multi_ref, truncated),
                              aggregate(sl, protocol.multi_ref, truncated)};
    report.r1.precision += inst.r1.precision;
    report.r1.recall += inst.r1.recall;
    report.r1.f1 += inst.r1.f1;
    report.r2.precision += inst.r2.precision;
    report.r2.recall += inst.r2.recall;
    report.r2.f1 += inst.r2.f1;
    report.rl.precision += inst.rl.precision;
    report.rl.recall += inst.rl.recall;
    report.rl.f1 += inst.rl.f1;
  }
  const double k = std::max(1, report.n_instances);
  for (RougeScore* s : {&report.r1, &report.r2, &report.rl}) {
    s->precision /= k;
    s->recall /= k;
    s->f1 /= k;
  }
  report.avg_len_words = total_len / k;

  std::string proto = truncated ? "truncated_recall_75" : "f1";
  proto += protocol.multi_ref == MultiRef::kMax ? "/max" : "/avg";
  if (protocol.lowercase) proto += "/lowercase";
  report.protocol = proto;
  return report;
}

std::string report_to_tsv(const EvalReport& report) {
  std::ostringstream out;
  out << "metric\tprecision\trecall\tf1\tavg_len_words\tn_instances\tprotocol\n";
  char buf[256];
  const auto row = [&](const char* metric, const RougeScore& s) {
    std::snprintf(buf, sizeof(buf), "%s\t%.6f\t%.6f\t%.6f\t%.4f\t%d\t%s\n", metric, s.precision,
                  s.recall, s.f1, report.avg_len_words, report.n_instances,
                  report.protocol.c_str());
    out << buf;
  };
  row("rouge-1", report.r1);
  row("rouge-2", report.r2);
  row("rouge-l", report.rl);
  return out.str();
}

std::string report_to_json(const EvalReport& report) {
  std::ostringstream out;
  char buf[256];
  const auto metric = [&](const char* name, const RougeScore& s, bool last) {
    std::snprintf(buf, sizeof(buf),
                  "    {\"metric\": \"%s\", \"precision\": %.6f, \"recall\": %.6f, "
                  "\"f1\": %.6f}%s\n",
                  name, s.precision, s.recall, s.f1, last ? "" : ",");
    out << buf;
  };
  out << "{\n";
  std::snprintf(buf, sizeof(buf),
                "  \"protocol\": \"%s\",\n  \"n_instances\": %d,\n  \"avg_len_words\": %.4f,\n",
                report.protocol.c_str(), report.n_instances, report.avg_len_words);
  out << buf;
  out << "  \"scores\": [\n";
  metric("rouge-1", report.r1, false);
  metric("rouge-2", report.r2, false);
  metric("rouge-l", report.rl, true);
  out << "  ]\n}\n";
  return out.str();
}

}  // namespace hcsumm
