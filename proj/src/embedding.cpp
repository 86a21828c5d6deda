#include "hcsumm/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hcsumm/error.hpp"

namespace hcsumm {

EmbeddingTable::EmbeddingTable(int dim, std::unordered_map<std::string, std::vector<double>> vectors)
    : dim_(dim), vectors_(std::move(vectors)) {}

const std::vector<double>* EmbeddingTable::find(const std::string& token) const {
  auto it = vectors_.find(token);
  return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingTable EmbeddingTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);

  std::string line;
  if (!std::getline(in, line)) throw FormatError(1, "missing word2vec header");
  long declared = 0;
  int dim = 0;
  {
    std::istringstream header(line);
    if (!(header >> declared >> dim) || declared < 0 || dim < 1) {
      throw FormatError(1, "invalid word2vec header: '" + line + "'");
    }
  }

  std::unordered_map<std::string, std::vector<double>> vectors;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string token;
    if (!(row >> token)) throw FormatError(line_no, "missing token");
    std::vector<double> vec;
    vec.reserve(static_cast<std::size_t>(dim));
    double v = 0.0;
    while (row >> v) vec.push_back(v);
    if (!row.eof()) throw FormatError(line_no, "non-numeric vector component");
    if (static_cast<int>(vec.size()) != dim) {
      throw DimensionMismatch(line_no, "row has " + std::to_string(vec.size()) +
                                           " components, header declares " + std::to_string(dim));
    }
    if (!vectors.emplace(token, std::move(vec)).second) {
      std::fprintf(stderr, "warning: duplicate embedding for '%s' at line %ld, keeping first\n",
                   token.c_str(), line_no);
    }
  }
  if (static_cast<long>(vectors.size()) != declared) {
    std::fprintf(stderr, "warning: header declares %ld vectors, file has %zu\n", declared,
                 vectors.size());
  }
  return EmbeddingTable(dim, std::move(vectors));
}

SentenceVector embed(const EmbeddingTable& table, const IdfTable& idf, const TokenSequence& x) {
  SentenceVector out;
  out.components.assign(static_cast<std::size_t>(std::max(1, table.dim())), 0.0);
  if (x.empty()) return out;

  double weight_sum = 0.0;
  int found = 0;
  for (const auto& token : x.tokens) {
    const std::vector<double>* vec = table.find(token);
    if (vec == nullptr) continue;
    const double w = idf.idf(token);
    for (std::size_t d = 0; d < vec->size(); ++d) out.components[d] += w * (*vec)[d];
    weight_sum += w;
    ++found;
  }
  if (found == 0) {
    out.coverage = 0.0;
    return out;
  }
  for (auto& c : out.components) c /= weight_sum;
  out.coverage = static_cast<double>(found) / x.size();
  return out;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double similarity(const EmbeddingTable& table, const IdfTable& idf, const TokenSequence& x,
                  const TokenSequence& y) {
  const SentenceVector ex = embed(table, idf, x);
  const SentenceVector ey = embed(table, idf, y);
  const double cos = cosine_similarity(ex.components, ey.components);
  return std::clamp(cos, kSimilarityFloor, 1.0);
}

}  // namespace hcsumm
