#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hcsumm {

// A tokenized sentence. Tokens are nonempty and contain no whitespace, so
// join() followed by tokenize() reproduces the identical token list.
struct TokenSequence {
  std::vector<std::string> tokens;

  TokenSequence() = default;
  TokenSequence(std::initializer_list<std::string> init) : tokens(init) {}
  explicit TokenSequence(std::vector<std::string> t) : tokens(std::move(t)) {}

  int size() const { return static_cast<int>(tokens.size()); }
  bool empty() const { return tokens.empty(); }
  const std::string& operator[](int i) const { return tokens[static_cast<std::size_t>(i)]; }
  bool operator==(const TokenSequence&) const = default;

  auto begin() const { return tokens.begin(); }
  auto end() const { return tokens.end(); }
};

// Splits on runs of whitespace; empty input yields an empty sequence.
// Lowercasing is ASCII-only; non-ASCII bytes pass through untouched.
TokenSequence tokenize(std::string_view text, bool lowercase = true);

// Joins tokens with single spaces.
std::string join(const TokenSequence& t);

// Sentence-level document frequencies with smoothed idf:
//   idf(w) = ln((N + 1) / (df(w) + 1)) + 1
// Unseen words fall out of the same formula with df = 0, so every weight is
// strictly positive.
class IdfTable {
 public:
  IdfTable() = default;
  IdfTable(long doc_count, std::unordered_map<std::string, long> df);

  long doc_count() const { return doc_count_; }
  long df(const std::string& token) const;
  double idf(const std::string& token) const;
  const std::unordered_map<std::string, long>& table() const { return df_; }

  // Text format: first line is the document count, then one "token<TAB>df"
  // line per token.
  void save(const std::string& path) const;
  static IdfTable load(const std::string& path);

 private:
  long doc_count_ = 0;
  std::unordered_map<std::string, long> df_;
};

// df(w) = number of sentences containing w at least once.
// Throws EmptyCorpus if `corpus` has no sentences.
IdfTable build_idf(const std::vector<TokenSequence>& corpus);

struct DatasetRecord {
  TokenSequence source;
  std::vector<TokenSequence> references;
};

enum class DatasetFormat { kPlain, kTsv };

// Evaluation-harness input. TSV records always carry at least one reference;
// plain files carry sources only and are valid for summarization, not for
// evaluation.
struct ParallelDataset {
  std::vector<DatasetRecord> records;
  int size() const { return static_cast<int>(records.size()); }
};

// plain: one source sentence per line. tsv: source TAB ref1 [TAB ref2 ...].
// Throws ParseError on empty/malformed rows and EmptyReference when a TSV row
// has no reference field.
ParallelDataset load_dataset(const std::string& path, DatasetFormat format,
                             bool lowercase = true);

// One pre-tokenized sentence per line; empty lines are skipped.
std::vector<TokenSequence> read_corpus(const std::string& path, bool lowercase = true);

}  // namespace hcsumm
