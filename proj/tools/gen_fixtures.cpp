// Regenerates the bundled fixture data: a small synthetic news-style corpus,
// a TSV dataset whose references are 40-60% prefixes of the sources, and a
// word2vec-format embedding table covering the core vocabulary. Everything is
// derived from fixed seeds so the committed files are reproducible.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hcsumm/rng.hpp"

namespace {

using hcsumm::Rng;

const std::vector<std::string> kDeterminers = {"the", "a", "its", "their", "two",
                                               "three", "several", "local"};
const std::vector<std::string> kAdjectives = {
    "regional", "national", "foreign", "senior",   "new",      "former",
    "northern", "southern", "key",     "major",    "economic", "political",
    "military", "central",  "western", "eastern"};
const std::vector<std::string> kNouns = {
    "government", "council",    "police",     "ministry",  "company",   "bank",
    "court",      "committee",  "union",      "party",     "agency",    "army",
    "parliament", "president",  "minister",   "leader",    "spokesman", "officials",
    "workers",    "farmers",    "residents",  "students",  "rebels",    "authorities",
    "delegation", "report",     "plan",       "budget",    "deal",      "talks",
    "strike",     "protest",    "election",   "summit",    "crisis",    "attack",
    "storm",      "flood",      "earthquake", "shipment",  "factory",   "airport",
    "hospital",   "border",     "pipeline",   "currency",  "market",    "investors"};
const std::vector<std::string> kVerbs = {
    "approved",  "rejected",  "announced", "confirmed", "denied",    "launched",
    "suspended", "signed",    "reached",   "opened",    "closed",    "warned",
    "reported",  "criticized", "welcomed",  "postponed", "ordered",   "urged",
    "began",     "ended",     "visited",   "condemned", "discussed", "backed"};
const std::vector<std::string> kPreps = {"in", "on", "over", "after", "before",
                                         "during", "against", "with", "near", "amid"};
const std::vector<std::string> kPlaces = {"capital", "north", "region", "city",
                                          "province", "south", "coast", "district"};
const std::vector<std::string> kTimes = {"monday", "tuesday", "wednesday", "thursday",
                                         "friday", "saturday", "sunday"};
const std::vector<std::string> kTrailers = {"officials", "police", "witnesses", "sources",
                                            "analysts"};

const std::string& pick(const std::vector<std::string>& pool, Rng& rng) {
  return pool[rng.below(pool.size())];
}

// Unique-looking rare token; each call with a fresh counter yields a token
// that appears exactly once in the corpus, giving the <unk> mapping real work.
std::string rare_token(long counter) {
  static const char* syllables[] = {"zor", "kem", "val", "bra", "tun", "mir",
                                    "sol", "dra", "pel", "gos", "nav", "rek"};
  std::string token;
  long c = counter;
  for (int i = 0; i < 3; ++i) {
    token += syllables[c % 12];
    c /= 12;
  }
  return token;
}

std::vector<std::string> make_sentence(Rng& rng, int target_len, long* rare_counter) {
  std::vector<std::string> words;

  const auto noun_phrase = [&](bool allow_adj) {
    words.push_back(pick(kDeterminers, rng));
    if (allow_adj && rng.below(10) < 4) words.push_back(pick(kAdjectives, rng));
    if (rare_counter != nullptr && rng.below(100) < 6) {
      words.push_back(rare_token((*rare_counter)++));
    }
    words.push_back(pick(kNouns, rng));
  };
  const auto prep_phrase = [&] {
    words.push_back(pick(kPreps, rng));
    words.push_back("the");
    if (rng.below(10) < 3) words.push_back(pick(kAdjectives, rng));
    words.push_back(pick(kPlaces, rng));
  };

  noun_phrase(true);
  words.push_back(pick(kVerbs, rng));
  noun_phrase(true);

  while (static_cast<int>(words.size()) < target_len - 2) {
    switch (rng.below(5)) {
      case 0:
        prep_phrase();
        break;
      case 1:
        words.push_back(pick(kTimes, rng));
        break;
      case 2:
        words.push_back("and");
        words.push_back(pick(kVerbs, rng));
        noun_phrase(false);
        break;
      case 3: {
        words.push_back(",");
        words.push_back(pick(kTrailers, rng));
        words.push_back("said");
        break;
      }
      default:
        prep_phrase();
        break;
    }
  }
  words.push_back(".");
  return words;
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += words[i];
  }
  return out;
}

void write_embeddings(const std::string& path, std::uint64_t seed) {
  std::vector<std::pair<std::string, int>> vocab;  // token, part-of-speech topic
  const auto add = [&vocab](const std::vector<std::string>& pool, int topic) {
    for (const auto& token : pool) {
      bool seen = false;
      for (const auto& [existing, t] : vocab) {
        (void)t;
        if (existing == token) {
          seen = true;
          break;
        }
      }
      if (!seen) vocab.emplace_back(token, topic);
    }
  };
  add(kDeterminers, 0);
  add(kAdjectives, 1);
  add(kNouns, 2);
  add(kVerbs, 3);
  add(kPreps, 4);
  add(kPlaces, 2);
  add(kTimes, 5);
  add(kTrailers, 2);
  vocab.emplace_back("said", 3);
  vocab.emplace_back("and", 4);
  vocab.emplace_back(",", 6);
  vocab.emplace_back(".", 6);

  constexpr int kDim = 16;
  std::ofstream out(path);
  out << vocab.size() << " " << kDim << "\n";
  for (const auto& [token, topic] : vocab) {
    // Topic base plus token-specific noise; deterministic in (token, seed).
    std::uint64_t h = seed;
    for (char c : token) h = hcsumm::mix_seed(h, static_cast<std::uint64_t>(c));
    Rng noise(h);
    Rng base(hcsumm::mix_seed(seed, static_cast<std::uint64_t>(topic) + 101));
    out << token;
    char buf[32];
    for (int d = 0; d < kDim; ++d) {
      const double b = static_cast<double>(base.next() >> 11) / 9007199254740992.0 * 2.0 - 1.0;
      const double n = static_cast<double>(noise.next() >> 11) / 9007199254740992.0 * 2.0 - 1.0;
      std::snprintf(buf, sizeof(buf), " %.6f", 0.7 * b + 0.6 * n);
      out << buf;
    }
    out << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regenerate the bundled fixture corpus, dataset and embeddings"};
  std::string out_dir = "data/fixtures";
  int corpus_size = 1000;
  int dataset_size = 200;
  std::uint64_t seed = 20240117;
  app.add_option("--out-dir", out_dir, "Output directory (must exist)");
  app.add_option("--corpus-size", corpus_size, "Sentences in the training corpus");
  app.add_option("--dataset-size", dataset_size, "Records in the TSV dataset");
  app.add_option("--seed", seed, "Generator seed");
  CLI11_PARSE(app, argc, argv);

  {
    Rng rng(hcsumm::mix_seed(seed, 1));
    long rare_counter = 0;
    std::ofstream out(out_dir + "/corpus_1k.txt");
    if (!out) {
      std::fprintf(stderr, "cannot write to %s\n", out_dir.c_str());
      return 2;
    }
    for (int i = 0; i < corpus_size; ++i) {
      const int target = 10 + static_cast<int>(rng.below(16));  // 10..25
      out << join(make_sentence(rng, target, &rare_counter)) << "\n";
    }
  }

  {
    Rng rng(hcsumm::mix_seed(seed, 2));
    std::ofstream out(out_dir + "/dataset_200.tsv");
    for (int i = 0; i < dataset_size; ++i) {
      const int target = 12 + static_cast<int>(rng.below(12));  // 12..23
      const auto sentence = make_sentence(rng, target, nullptr);
      // Reference = 40-60% prefix of the source.
      const double q = 0.40 + static_cast<double>(rng.below(21)) / 100.0;
      const int ref_len =
          std::max(1, static_cast<int>(q * static_cast<double>(sentence.size()) + 0.5));
      const std::vector<std::string> reference(sentence.begin(), sentence.begin() + ref_len);
      out << join(sentence) << "\t" << join(reference) << "\n";
    }
  }

  write_embeddings(out_dir + "/embeddings_16d.txt", hcsumm::mix_seed(seed, 3));
  std::fprintf(stderr, "fixtures written to %s\n", out_dir.c_str());
  return 0;
}
