#include "hcsumm/ngram_lm.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hcsumm/error.hpp"

namespace hcsumm {

namespace {

constexpr const char* kBos = "<s>";
constexpr const char* kEos = "</s>";
constexpr const char* kUnk = "<unk>";
constexpr double kLn10 = 2.302585092994045684;

// SRILM convention: a probability field of -99 marks entries that exist only
// to carry a backoff weight (histories never predicted, e.g. <s>).
constexpr const char* kPlaceholderField = "-99";

std::string format_log10(double natural_log) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", natural_log / kLn10);
  return buf;
}

}  // namespace

std::uint32_t NGramLanguageModel::intern(const std::string& token) {
  auto it = token_to_id_.find(token);
  if (it != token_to_id_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(id_to_token_.size());
  id_to_token_.push_back(token);
  token_to_id_.emplace(token, id);
  return id;
}

std::uint32_t NGramLanguageModel::scoring_id(const std::string& token) const {
  if (token != kBos && token != kEos) {
    auto it = token_to_id_.find(token);
    if (it != token_to_id_.end()) return it->second;
  }
  if (unk_id_ == kNoId) throw Error("out-of-vocabulary token '" + token + "' and model has no <unk>");
  return unk_id_;
}

std::uint32_t NGramLanguageModel::map_context_token(const std::string& token) const {
  auto it = token_to_id_.find(token);
  if (it != token_to_id_.end()) return it->second;
  if (unk_id_ == kNoId) throw Error("unknown context token '" + token + "' and model has no <unk>");
  return unk_id_;
}

NGramLanguageModel NGramLanguageModel::train(const std::vector<TokenSequence>& corpus, int order,
                                             Direction direction, double discount) {
  if (order < 1) throw std::invalid_argument("n-gram order must be >= 1");
  if (!(discount > 0.0 && discount < 1.0)) throw std::invalid_argument("discount must be in (0, 1)");

  NGramLanguageModel model;
  model.order_ = order;
  model.direction_ = direction;
  model.discount_ = discount;
  model.bos_id_ = model.intern(kBos);
  model.eos_id_ = model.intern(kEos);
  model.unk_id_ = model.intern(kUnk);

  std::unordered_map<std::string, long> freq;
  for (const auto& sentence : corpus) {
    for (const auto& token : sentence.tokens) ++freq[token];
  }

  std::vector<std::vector<std::uint32_t>> sentences;
  for (const auto& sentence : corpus) {
    if (sentence.empty()) continue;
    std::vector<std::uint32_t> ids;
    ids.reserve(sentence.tokens.size());
    for (const auto& token : sentence.tokens) {
      if (token == kBos || token == kEos || token == kUnk || freq[token] <= 1) {
        ids.push_back(model.unk_id_);
      } else {
        ids.push_back(model.intern(token));
      }
    }
    if (direction == Direction::kBackward) std::reverse(ids.begin(), ids.end());
    sentences.push_back(std::move(ids));
  }
  if (sentences.empty()) throw EmptyCorpus();

  const std::uint32_t bos = model.bos_id_;
  using CountTable = std::unordered_map<IdVec, long, IdVecHash>;

  // Raw window counts per level; level k counts windows of the sentence
  // padded with (k-1) <s> and one </s>.
  std::vector<CountTable> raw(static_cast<std::size_t>(order));
  for (const auto& ids : sentences) {
    for (int k = 1; k <= order; ++k) {
      IdVec padded;
      padded.reserve(ids.size() + static_cast<std::size_t>(k));
      padded.assign(static_cast<std::size_t>(k - 1), bos);
      padded.insert(padded.end(), ids.begin(), ids.end());
      padded.push_back(model.eos_id_);
      for (std::size_t i = 0; i + static_cast<std::size_t>(k) <= padded.size(); ++i) {
        ++raw[static_cast<std::size_t>(k - 1)][IdVec(padded.begin() + static_cast<long>(i),
                                                     padded.begin() + static_cast<long>(i) + k)];
      }
    }
  }

  // Numerator counts: raw counts at the top level, continuation counts
  // (distinct-predecessor counts) below, except that histories starting with
  // <s> keep raw counts since nothing can precede <s>.
  std::vector<CountTable> stored(static_cast<std::size_t>(order));
  stored[static_cast<std::size_t>(order - 1)] = raw[static_cast<std::size_t>(order - 1)];
  for (int k = order - 1; k >= 1; --k) {
    CountTable& level = stored[static_cast<std::size_t>(k - 1)];
    for (const auto& [key, cnt] : raw[static_cast<std::size_t>(k)]) {
      (void)cnt;
      IdVec suffix(key.begin() + 1, key.end());
      if (suffix.front() == bos) continue;
      ++level[suffix];
    }
    for (const auto& [key, cnt] : raw[static_cast<std::size_t>(k - 1)]) {
      if (key.front() == bos) level[key] = cnt;
    }
  }

  std::vector<std::uint32_t> vocab;
  for (std::uint32_t id = 0; id < model.id_to_token_.size(); ++id) {
    if (id != bos) vocab.push_back(id);
  }

  // Interpolated probabilities, bottom-up. The unigram level interpolates
  // with the uniform distribution over the prediction vocabulary.
  const double d = discount;
  std::vector<std::unordered_map<IdVec, double, IdVecHash>> probs(static_cast<std::size_t>(order));
  {
    double total = 0.0;
    long types = 0;
    for (const auto& [key, cnt] : stored[0]) {
      (void)key;
      total += static_cast<double>(cnt);
      ++types;
    }
    assert(total > 0.0);
    const double uniform = 1.0 / static_cast<double>(vocab.size());
    const double lambda = d * static_cast<double>(types) / total;
    for (std::uint32_t id : vocab) {
      auto it = stored[0].find(IdVec{id});
      const double cnt = it == stored[0].end() ? 0.0 : static_cast<double>(it->second);
      probs[0][IdVec{id}] = std::max(cnt - d, 0.0) / total + lambda * uniform;
    }
  }

  std::vector<std::unordered_map<IdVec, double, IdVecHash>> backoffs(
      static_cast<std::size_t>(order));  // backoffs[k-1]: level-k context -> lambda
  for (int k = 2; k <= order; ++k) {
    struct Agg {
      double denom = 0.0;
      long types = 0;
    };
    std::unordered_map<IdVec, Agg, IdVecHash> contexts;
    const CountTable& level = stored[static_cast<std::size_t>(k - 1)];
    for (const auto& [key, cnt] : level) {
      IdVec g(key.begin(), key.end() - 1);
      Agg& agg = contexts[g];
      agg.denom += static_cast<double>(cnt);
      agg.types += 1;
    }
    for (const auto& [key, cnt] : level) {
      IdVec g(key.begin(), key.end() - 1);
      const Agg& agg = contexts.at(g);
      const double lambda = d * static_cast<double>(agg.types) / agg.denom;
      IdVec suffix(key.begin() + 1, key.end());
      const double lower = probs[static_cast<std::size_t>(k - 2)].at(suffix);
      probs[static_cast<std::size_t>(k - 1)][key] =
          std::max(static_cast<double>(cnt) - d, 0.0) / agg.denom + lambda * lower;
    }
    for (const auto& [g, agg] : contexts) {
      backoffs[static_cast<std::size_t>(k - 1)][g] =
          d * static_cast<double>(agg.types) / agg.denom;
    }
  }

  model.tables_.resize(static_cast<std::size_t>(order));
  for (int k = 1; k <= order; ++k) {
    for (const auto& [key, p] : probs[static_cast<std::size_t>(k - 1)]) {
      Entry entry;
      entry.log_prob = std::log(p);
      entry.has_prob = true;
      model.tables_[static_cast<std::size_t>(k - 1)].emplace(key, entry);
    }
  }
  for (int k = 2; k <= order; ++k) {
    for (const auto& [g, lambda] : backoffs[static_cast<std::size_t>(k - 1)]) {
      Table& table = model.tables_[g.size() - 1];
      auto it = table.find(g);
      if (it == table.end()) {
        Entry entry;  // history-only placeholder (pure <s> run)
        entry.log_backoff = std::log(lambda);
        entry.has_backoff = true;
        table.emplace(g, entry);
      } else {
        it->second.log_backoff = std::log(lambda);
        it->second.has_backoff = true;
      }
    }
  }
  return model;
}

double NGramLanguageModel::log_conditional(const std::uint32_t* context, int context_len,
                                           std::uint32_t token) const {
  double acc = 0.0;
  for (;;) {
    IdVec key;
    key.reserve(static_cast<std::size_t>(context_len) + 1);
    key.assign(context, context + context_len);
    key.push_back(token);
    const Table& table = tables_[static_cast<std::size_t>(context_len)];
    auto it = table.find(key);
    if (it != table.end() && it->second.has_prob) return acc + it->second.log_prob;
    if (context_len == 0) {
      throw Error("no probability available for token '" +
                  (token < id_to_token_.size() ? id_to_token_[token] : std::string("?")) + "'");
    }
    IdVec ctx_key(context, context + context_len);
    const Table& ctx_table = tables_[static_cast<std::size_t>(context_len - 1)];
    auto ctx_it = ctx_table.find(ctx_key);
    if (ctx_it != ctx_table.end() && ctx_it->second.has_backoff) {
      acc += ctx_it->second.log_backoff;
    }
    ++context;
    --context_len;
  }
}

double NGramLanguageModel::sequence_log_prob_ids(const std::vector<std::uint32_t>& ids) const {
  if (ids.empty()) throw EmptySequence();
  const int ctx_len = order_ - 1;
  IdVec context(static_cast<std::size_t>(ctx_len));
  double total = 0.0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (int j = 0; j < ctx_len; ++j) {
      const long pos = static_cast<long>(i) - ctx_len + j;
      context[static_cast<std::size_t>(j)] = pos < 0 ? bos_id_ : ids[static_cast<std::size_t>(pos)];
    }
    total += log_conditional(context.data(), ctx_len, ids[i]);
  }
  return total;
}

double NGramLanguageModel::sequence_log_prob(const TokenSequence& y) const {
  if (y.empty()) throw EmptySequence();
  std::vector<std::uint32_t> ids;
  ids.reserve(y.tokens.size());
  for (const auto& token : y.tokens) ids.push_back(scoring_id(token));
  if (direction_ == Direction::kBackward) std::reverse(ids.begin(), ids.end());
  return sequence_log_prob_ids(ids);
}

double NGramLanguageModel::conditional(const std::vector<std::string>& history,
                                       const std::string& token) const {
  const std::size_t keep = std::min(history.size(), static_cast<std::size_t>(order_ - 1));
  IdVec context;
  context.reserve(keep);
  for (std::size_t i = history.size() - keep; i < history.size(); ++i) {
    context.push_back(map_context_token(history[i]));
  }
  // Unlike sentence scoring, the diagnostic interface may legitimately ask
  // for the end-of-sentence probability.
  const std::uint32_t token_id =
      (token == kEos && eos_id_ != kNoId) ? eos_id_ : scoring_id(token);
  return std::exp(log_conditional(context.data(), static_cast<int>(context.size()), token_id));
}

std::vector<std::string> NGramLanguageModel::vocabulary() const {
  std::vector<std::string> vocab;
  for (std::uint32_t id = 0; id < id_to_token_.size(); ++id) {
    if (id == bos_id_) continue;
    if (!tables_.empty()) {
      auto it = tables_[0].find(IdVec{id});
      if (it == tables_[0].end() || !it->second.has_prob) continue;
    }
    vocab.push_back(id_to_token_[id]);
  }
  return vocab;
}

std::vector<std::vector<std::string>> NGramLanguageModel::stored_contexts() const {
  std::vector<std::vector<std::string>> contexts;
  for (const auto& table : tables_) {
    for (const auto& [key, entry] : table) {
      if (!entry.has_backoff) continue;
      std::vector<std::string> tokens;
      tokens.reserve(key.size());
      for (std::uint32_t id : key) tokens.push_back(id_to_token_[id]);
      contexts.push_back(std::move(tokens));
    }
  }
  return contexts;
}

std::vector<std::size_t> NGramLanguageModel::level_sizes() const {
  std::vector<std::size_t> sizes;
  for (const auto& table : tables_) sizes.push_back(table.size());
  return sizes;
}

void NGramLanguageModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "; direction=" << (direction_ == Direction::kBackward ? "backward" : "forward") << "\n";
  out << "; discount=" << discount_ << "\n";
  out << "\n\\data\\\n";
  for (int k = 1; k <= order_; ++k) {
    out << "ngram " << k << "=" << tables_[static_cast<std::size_t>(k - 1)].size() << "\n";
  }
  for (int k = 1; k <= order_; ++k) {
    out << "\n\\" << k << "-grams:\n";
    std::vector<std::pair<std::string, const Entry*>> rows;
    rows.reserve(tables_[static_cast<std::size_t>(k - 1)].size());
    for (const auto& [key, entry] : tables_[static_cast<std::size_t>(k - 1)]) {
      std::string joined;
      for (std::size_t i = 0; i < key.size(); ++i) {
        if (i > 0) joined.push_back(' ');
        joined += id_to_token_[key[i]];
      }
      rows.emplace_back(std::move(joined), &entry);
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [joined, entry] : rows) {
      out << (entry->has_prob ? format_log10(entry->log_prob) : kPlaceholderField) << "\t"
          << joined;
      if (entry->has_backoff) out << "\t" << format_log10(entry->log_backoff);
      out << "\n";
    }
  }
  out << "\n\\end\\\n";
  if (!out) throw IoError("write failed: " + path);
}

namespace {

// Line reader that tracks the byte offset of each line start.
struct LineReader {
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line, long& offset) {
    offset = next_offset_;
    if (!std::getline(in_, line)) return false;
    next_offset_ += static_cast<long>(line.size()) + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::istream& in_;
  long next_offset_ = 0;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string::npos ? pos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& field, long offset) {
  char* end = nullptr;
  const double value = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0') {
    throw FormatError(offset, "invalid numeric field '" + field + "'");
  }
  return value;
}

}  // namespace

NGramLanguageModel NGramLanguageModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  LineReader reader(in);

  NGramLanguageModel model;
  model.direction_ = Direction::kForward;

  std::string line;
  long offset = 0;

  // Preamble: comments and blank lines until \data\.
  bool saw_data = false;
  while (reader.next(line, offset)) {
    if (line == "\\data\\") {
      saw_data = true;
      break;
    }
    if (line.empty()) continue;
    if (line[0] == ';') {
      if (line.find("direction=backward") != std::string::npos) {
        model.direction_ = Direction::kBackward;
      } else if (line.find("discount=") != std::string::npos) {
        const auto pos = line.find("discount=");
        model.discount_ = std::strtod(line.c_str() + pos + 9, nullptr);
      }
      continue;
    }
    throw FormatError(offset, "expected comment or \\data\\ header, got '" + line + "'");
  }
  if (!saw_data) throw FormatError(offset, "missing \\data\\ section");

  std::vector<std::size_t> declared;
  while (reader.next(line, offset)) {
    if (line.empty()) break;
    if (line.rfind("ngram ", 0) != 0) throw FormatError(offset, "expected 'ngram k=N' line");
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError(offset, "expected 'ngram k=N' line");
    const int k = std::atoi(line.c_str() + 6);
    const long count = std::atol(line.c_str() + eq + 1);
    if (k != static_cast<int>(declared.size()) + 1 || count < 0) {
      throw FormatError(offset, "non-contiguous or invalid ngram declaration");
    }
    declared.push_back(static_cast<std::size_t>(count));
  }
  if (declared.empty()) throw FormatError(offset, "no ngram levels declared");

  model.order_ = static_cast<int>(declared.size());
  model.tables_.resize(declared.size());

  bool saw_end = false;
  int current_level = 0;
  while (reader.next(line, offset)) {
    if (line.empty()) continue;
    if (line == "\\end\\") {
      saw_end = true;
      break;
    }
    if (line[0] == '\\') {
      const int k = std::atoi(line.c_str() + 1);
      if (k < 1 || k > model.order_ || line != "\\" + std::to_string(k) + "-grams:") {
        throw FormatError(offset, "unexpected section header '" + line + "'");
      }
      current_level = k;
      continue;
    }
    if (current_level == 0) throw FormatError(offset, "entry before any k-grams section");

    const auto fields = split(line, '\t');
    if (fields.size() < 2 || fields.size() > 3) {
      throw FormatError(offset, "expected 2 or 3 tab-separated fields");
    }
    Entry entry;
    if (fields[0] == kPlaceholderField) {
      entry.has_prob = false;
    } else {
      entry.log_prob = parse_double(fields[0], offset) * kLn10;
      entry.has_prob = true;
    }
    const auto tokens = split(fields[1], ' ');
    if (static_cast<int>(tokens.size()) != current_level) {
      throw FormatError(offset, "entry arity does not match section level");
    }
    IdVec key;
    key.reserve(tokens.size());
    for (const auto& token : tokens) {
      if (token.empty()) throw FormatError(offset, "empty token in entry");
      key.push_back(model.intern(token));
    }
    if (fields.size() == 3) {
      entry.log_backoff = parse_double(fields[2], offset) * kLn10;
      entry.has_backoff = true;
    }
    if (!model.tables_[static_cast<std::size_t>(current_level - 1)].emplace(key, entry).second) {
      throw FormatError(offset, "duplicate entry '" + fields[1] + "'");
    }
  }
  if (!saw_end) throw FormatError(offset, "missing \\end\\ marker (truncated file?)");
  for (int k = 1; k <= model.order_; ++k) {
    const auto actual = model.tables_[static_cast<std::size_t>(k - 1)].size();
    if (actual != declared[static_cast<std::size_t>(k - 1)]) {
      throw FormatError(offset, "level " + std::to_string(k) + " declares " +
                                    std::to_string(declared[static_cast<std::size_t>(k - 1)]) +
                                    " entries but has " + std::to_string(actual));
    }
  }

  auto lookup_id = [&model](const char* token) {
    auto it = model.token_to_id_.find(token);
    return it == model.token_to_id_.end() ? kNoId : it->second;
  };
  model.bos_id_ = lookup_id(kBos);
  model.eos_id_ = lookup_id(kEos);
  model.unk_id_ = lookup_id(kUnk);
  if (model.bos_id_ == kNoId) model.bos_id_ = model.intern(kBos);
  if (model.eos_id_ == kNoId) model.eos_id_ = model.intern(kEos);
  return model;
}

FluencyScore fluency(const NGramLanguageModel& fwd, const NGramLanguageModel& bwd,
                     const TokenSequence& y) {
  if (fwd.direction() != NGramLanguageModel::Direction::kForward ||
      bwd.direction() != NGramLanguageModel::Direction::kBackward) {
    throw std::invalid_argument("fluency requires a forward and a backward model");
  }
  FluencyScore score;
  score.log_prob_forward = fwd.sequence_log_prob(y);
  score.log_prob_backward = bwd.sequence_log_prob(y);
  score.token_count = y.size();
  score.f_lm =
      std::exp((score.log_prob_forward + score.log_prob_backward) / (2.0 * score.token_count));
  return score;
}

}  // namespace hcsumm
