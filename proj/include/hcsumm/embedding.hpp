#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "hcsumm/corpus.hpp"

namespace hcsumm {

// Unigram word embeddings loaded from word2vec text format.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(int dim, std::unordered_map<std::string, std::vector<double>> vectors);

  int dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  // nullptr when the token has no vector.
  const std::vector<double>* find(const std::string& token) const;

  // Expects a header line "vocab_size dim" followed by one
  // "token v1 ... v_dim" row per word. Duplicate tokens keep the first
  // occurrence (a warning is printed to stderr).
  static EmbeddingTable load(const std::string& path);

 private:
  int dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

struct SentenceVector {
  std::vector<double> components;
  double coverage = 0.0;  // fraction of token occurrences found in the table
};

// idf-weighted average of the unigram embeddings over token occurrences.
// Tokens without a vector are skipped; if nothing is found the zero vector
// with coverage 0 is returned.
SentenceVector embed(const EmbeddingTable& table, const IdfTable& idf, const TokenSequence& x);

inline constexpr double kSimilarityFloor = 1e-6;

// Raw cosine; 0 when either vector is zero.
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

// Cosine of the two sentence embeddings, clamped into
// [kSimilarityFloor, 1]. A zero vector on either side yields the floor.
double similarity(const EmbeddingTable& table, const IdfTable& idf, const TokenSequence& x,
                  const TokenSequence& y);

}  // namespace hcsumm
