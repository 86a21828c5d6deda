#include "hcsumm/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hcsumm/error.hpp"

namespace hcsumm {

TokenSequence tokenize(std::string_view text, bool lowercase) {
  TokenSequence out;
  std::string current;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) {
        out.tokens.push_back(std::move(current));
        current.clear();
      }
    } else {
      current.push_back(lowercase ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
                                  : c);
    }
  }
  if (!current.empty()) out.tokens.push_back(std::move(current));
  return out;
}

std::string join(const TokenSequence& t) {
  std::string out;
  for (std::size_t i = 0; i < t.tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += t.tokens[i];
  }
  return out;
}

IdfTable::IdfTable(long doc_count, std::unordered_map<std::string, long> df)
    : doc_count_(doc_count), df_(std::move(df)) {}

long IdfTable::df(const std::string& token) const {
  auto it = df_.find(token);
  return it == df_.end() ? 0 : it->second;
}

double IdfTable::idf(const std::string& token) const {
  return std::log(static_cast<double>(doc_count_ + 1) / static_cast<double>(df(token) + 1)) + 1.0;
}

void IdfTable::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << doc_count_ << "\n";
  // Sorted for stable output files.
  std::vector<std::pair<std::string, long>> rows(df_.begin(), df_.end());
  std::sort(rows.begin(), rows.end());
  for (const auto& [token, df] : rows) out << token << "\t" << df << "\n";
  if (!out) throw IoError("write failed: " + path);
}

IdfTable IdfTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::string line;
  long line_no = 1;
  if (!std::getline(in, line)) throw ParseError(1, "missing document count");
  long doc_count = 0;
  try {
    doc_count = std::stol(line);
  } catch (const std::exception&) {
    throw ParseError(1, "invalid document count: '" + line + "'");
  }
  if (doc_count < 0) throw ParseError(1, "negative document count");
  std::unordered_map<std::string, long> df;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) throw ParseError(line_no, "expected token<TAB>df");
    const std::string token = line.substr(0, tab);
    long count = 0;
    try {
      count = std::stol(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw ParseError(line_no, "invalid df value");
    }
    if (count < 0 || count > doc_count) throw ParseError(line_no, "df out of range");
    df[token] = count;
  }
  return IdfTable(doc_count, std::move(df));
}

IdfTable build_idf(const std::vector<TokenSequence>& corpus) {
  if (corpus.empty()) throw EmptyCorpus();
  std::unordered_map<std::string, long> df;
  std::unordered_map<std::string, long> seen_at;  // token -> last sentence index + 1
  long doc = 0;
  for (const auto& sentence : corpus) {
    ++doc;
    for (const auto& token : sentence.tokens) {
      long& mark = seen_at[token];
      if (mark != doc) {
        mark = doc;
        ++df[token];
      }
    }
  }
  return IdfTable(doc, std::move(df));
}

ParallelDataset load_dataset(const std::string& path, DatasetFormat format, bool lowercase) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  ParallelDataset dataset;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    DatasetRecord record;
    if (format == DatasetFormat::kPlain) {
      record.source = tokenize(line, lowercase);
      if (record.source.empty()) throw ParseError(line_no, "empty source sentence");
    } else {
      std::vector<std::string> fields;
      std::size_t start = 0;
      for (;;) {
        const auto tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
      }
      record.source = tokenize(fields[0], lowercase);
      if (record.source.empty()) throw ParseError(line_no, "empty source sentence");
      if (fields.size() < 2) throw EmptyReference(line_no);
      for (std::size_t i = 1; i < fields.size(); ++i) {
        TokenSequence ref = tokenize(fields[i], lowercase);
        if (ref.empty()) throw ParseError(line_no, "empty reference field");
        record.references.push_back(std::move(ref));
      }
    }
    dataset.records.push_back(std::move(record));
  }
  return dataset;
}

std::vector<TokenSequence> read_corpus(const std::string& path, bool lowercase) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::vector<TokenSequence> corpus;
  std::string line;
  while (std::getline(in, line)) {
    TokenSequence sentence = tokenize(line, lowercase);
    if (!sentence.empty()) corpus.push_back(std::move(sentence));
  }
  return corpus;
}

}  // namespace hcsumm
