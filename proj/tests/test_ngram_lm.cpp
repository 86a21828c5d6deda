#include <doctest.h>

#include <cmath>
#include <fstream>

#include "hcsumm/error.hpp"
#include "hcsumm/ngram_lm.hpp"
#include "hcsumm/rng.hpp"
#include "support/kn_oracle.hpp"
#include "support/temp_dir.hpp"

using namespace hcsumm;
using Direction = NGramLanguageModel::Direction;

namespace {

std::vector<TokenSequence> small_corpus() {
  return {
      {"the", "council", "approved", "the", "budget"},
      {"the", "council", "rejected", "the", "plan"},
      {"police", "said", "the", "plan", "failed"},
      {"the", "budget", "passed", "on", "monday"},
      {"police", "approved", "the", "deal", "on", "monday"},
      {"the", "deal", "failed", ",", "police", "said"},
  };
}

std::vector<std::vector<std::string>> as_strings(const std::vector<TokenSequence>& corpus) {
  std::vector<std::vector<std::string>> out;
  for (const auto& sentence : corpus) out.push_back(sentence.tokens);
  return out;
}

TokenSequence random_sequence(const std::vector<std::string>& vocab, Rng& rng, int max_len) {
  TokenSequence y;
  const int len = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_len)));
  for (int i = 0; i < len; ++i) y.tokens.push_back(vocab[rng.below(vocab.size())]);
  return y;
}

}  // namespace

TEST_CASE("trained model matches the reference oracle everywhere") {
  for (const int order : {1, 2, 3, 4}) {
    const auto corpus = small_corpus();
    const auto model = NGramLanguageModel::train(corpus, order, Direction::kForward);
    const testsupport::KnOracle oracle(as_strings(corpus), order, /*backward=*/false);

    // Every stored history plus assorted unseen ones, against the whole
    // prediction vocabulary.
    std::vector<std::vector<std::string>> histories = model.stored_contexts();
    histories.push_back({});
    histories.push_back({"plan"});
    histories.push_back({"monday", "police"});
    histories.push_back({"never-seen-token"});
    for (const auto& history : histories) {
      for (const auto& token : model.vocabulary()) {
        const double got = model.conditional(history, token);
        const double expected = oracle.prob(history, token);
        CHECK(got == doctest::Approx(expected).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("conditional distributions are normalized and positive") {
  const auto model = NGramLanguageModel::train(small_corpus(), 3, Direction::kForward);
  const auto vocab = model.vocabulary();
  auto histories = model.stored_contexts();
  histories.push_back({});
  histories.push_back({"budget", "budget"});  // unseen history
  for (const auto& history : histories) {
    double sum = 0.0;
    for (const auto& token : vocab) {
      const double p = model.conditional(history, token);
      CHECK(p > 0.0);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("hand-computed bigram fixture") {
  // corpus [[a,b]] x2, order 2, discount 0.75. Continuation counts give
  // p1(w) = (1-0.75)/3 + (0.75*3/3)/4 = 13/48 for each of a, b, </s>;
  // p(b|a) = (2-0.75)/2 + (0.75*1/2)*(13/48) = 93/128, same for p(a|<s>).
  const std::vector<TokenSequence> corpus = {{"a", "b"}, {"a", "b"}};
  const auto model = NGramLanguageModel::train(corpus, 2, Direction::kForward);

  CHECK(model.conditional({}, "b") == doctest::Approx(13.0 / 48.0).epsilon(1e-12));
  CHECK(model.conditional({"a"}, "b") == doctest::Approx(93.0 / 128.0).epsilon(1e-12));
  CHECK(model.conditional({"<s>"}, "a") == doctest::Approx(93.0 / 128.0).epsilon(1e-12));
  CHECK(model.sequence_log_prob({"a", "b"}) ==
        doctest::Approx(2.0 * std::log(93.0 / 128.0)).epsilon(1e-12));

  // b always follows a, so p(b|a) must dominate p(a|a).
  CHECK(model.conditional({"a"}, "b") > model.conditional({"a"}, "a"));
}

TEST_CASE("order-1 unigram model sums to one over a, </s>, <unk>") {
  const std::vector<TokenSequence> corpus(10, TokenSequence{"a"});
  const auto model = NGramLanguageModel::train(corpus, 1, Direction::kForward);
  // raw counts a:10, </s>:10; C=20, T=2, V=3.
  CHECK(model.conditional({}, "a") == doctest::Approx(0.4875).epsilon(1e-12));
  CHECK(model.conditional({}, "</s>") == doctest::Approx(0.4875).epsilon(1e-12));
  CHECK(model.conditional({}, "<unk>") == doctest::Approx(0.025).epsilon(1e-12));
  const double sum = model.conditional({}, "a") + model.conditional({}, "</s>") +
                     model.conditional({}, "<unk>");
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("singletons are folded into <unk>") {
  const auto model =
      NGramLanguageModel::train({{"a", "b"}, {"a", "c"}}, 2, Direction::kForward);
  // b and c each occur once; both score as <unk>.
  CHECK(model.conditional({}, "b") == doctest::Approx(model.conditional({}, "<unk>")));
  const auto vocab = model.vocabulary();
  CHECK(std::find(vocab.begin(), vocab.end(), "b") == vocab.end());
  CHECK(std::find(vocab.begin(), vocab.end(), "a") != vocab.end());
}

TEST_CASE("train error contracts") {
  CHECK_THROWS_AS(NGramLanguageModel::train({}, 2, Direction::kForward), EmptyCorpus);
  CHECK_THROWS_AS(NGramLanguageModel::train({{}, {}}, 2, Direction::kForward), EmptyCorpus);
  CHECK_THROWS_AS(NGramLanguageModel::train({{"a", "b"}}, 0, Direction::kForward),
                  std::invalid_argument);
  CHECK_THROWS_AS(NGramLanguageModel::train({{"a"}}, 2, Direction::kForward, 1.5),
                  std::invalid_argument);
}

TEST_CASE("sequence_log_prob contracts") {
  const auto model = NGramLanguageModel::train(small_corpus(), 2, Direction::kForward);
  CHECK_THROWS_AS(model.sequence_log_prob({}), EmptySequence);
  // Single token: ln p(w | <s>).
  CHECK(model.sequence_log_prob({"police"}) ==
        doctest::Approx(std::log(model.conditional({"<s>"}, "police"))).epsilon(1e-12));
  // OOV scores as <unk>.
  CHECK(model.sequence_log_prob({"zzz-unknown"}) ==
        doctest::Approx(std::log(model.conditional({"<s>"}, "<unk>"))).epsilon(1e-12));
}

TEST_CASE("backward training equals forward training on the reversed corpus") {
  const auto corpus = small_corpus();
  std::vector<TokenSequence> reversed = corpus;
  for (auto& sentence : reversed) {
    std::reverse(sentence.tokens.begin(), sentence.tokens.end());
  }
  const auto backward = NGramLanguageModel::train(corpus, 3, Direction::kBackward);
  const auto forward_on_reversed = NGramLanguageModel::train(reversed, 3, Direction::kForward);

  Rng rng(11);
  const auto vocab = backward.vocabulary();
  for (int trial = 0; trial < 30; ++trial) {
    TokenSequence y = random_sequence(vocab, rng, 8);
    TokenSequence y_reversed = y;
    std::reverse(y_reversed.tokens.begin(), y_reversed.tokens.end());
    CHECK(backward.sequence_log_prob(y) ==
          doctest::Approx(forward_on_reversed.sequence_log_prob(y_reversed)).epsilon(1e-12));
  }
}

TEST_CASE("fluency is the inverse bidirectional perplexity") {
  const std::vector<TokenSequence> corpus = {{"a", "b"}, {"a", "b"}};
  const auto fwd = NGramLanguageModel::train(corpus, 2, Direction::kForward);
  const auto bwd = NGramLanguageModel::train(corpus, 2, Direction::kBackward);

  // All four conditionals equal 93/128 by the hand computation above, so
  // f_lm is their geometric mean.
  const FluencyScore score = fluency(fwd, bwd, {"a", "b"});
  CHECK(score.f_lm == doctest::Approx(93.0 / 128.0).epsilon(1e-12));
  CHECK(score.token_count == 2);
  CHECK(score.log_prob_forward == doctest::Approx(2.0 * std::log(93.0 / 128.0)).epsilon(1e-12));

  CHECK_THROWS_AS(fluency(bwd, fwd, {"a"}), std::invalid_argument);
  CHECK_THROWS_AS(fluency(fwd, bwd, {}), EmptySequence);
}

TEST_CASE("uniform-conditional fixture gives f_lm = p exactly") {
  // Hand-written ARPA unigram model where every token has probability 0.25.
  testsupport::TempDir tmp;
  const std::string log10_quarter = "-0.602059991327962";
  std::string arpa = "; direction=forward\n\n\\data\\\nngram 1=6\n\n\\1-grams:\n";
  for (const char* token : {"a", "b", "c", "d"}) {
    arpa += log10_quarter + "\t" + token + "\n";
  }
  arpa += "-99\t</s>\n-99\t<unk>\n\n\\end\\\n";
  const auto fwd = NGramLanguageModel::load(tmp.write("uniform_fwd.arpa", arpa));

  std::string arpa_bwd = arpa;
  arpa_bwd.replace(arpa_bwd.find("forward"), 7, "backward");
  const auto bwd = NGramLanguageModel::load(tmp.write("uniform_bwd.arpa", arpa_bwd));

  Rng rng(3);
  const std::vector<std::string> vocab = {"a", "b", "c", "d"};
  for (int len = 1; len <= 20; ++len) {
    TokenSequence y;
    for (int i = 0; i < len; ++i) y.tokens.push_back(vocab[rng.below(4)]);
    const FluencyScore score = fluency(fwd, bwd, y);
    CHECK(score.f_lm == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("perfectly predictable fixture gives f_lm = 1") {
  testsupport::TempDir tmp;
  const std::string arpa = "\\data\\\nngram 1=1\n\n\\1-grams:\n0\ta\n\n\\end\\\n";
  const auto fwd = NGramLanguageModel::load(tmp.write("one_fwd.arpa", arpa));
  const auto bwd = NGramLanguageModel::load(
      tmp.write("one_bwd.arpa", "; direction=backward\n" + arpa));
  const FluencyScore score = fluency(fwd, bwd, {"a", "a", "a"});
  CHECK(score.f_lm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("appending a weak token lowers unigram-model fluency") {
  // With order-1 models both directions contribute exactly one conditional
  // per token, so the geometric-mean argument is exact.
  const auto corpus = small_corpus();
  const auto fwd = NGramLanguageModel::train(corpus, 1, Direction::kForward);
  const auto bwd = NGramLanguageModel::train(corpus, 1, Direction::kBackward);

  Rng rng(23);
  const auto vocab = fwd.vocabulary();
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    TokenSequence y = random_sequence(vocab, rng, 6);
    const std::string& extra = vocab[rng.below(vocab.size())];
    const double pair_log = std::log(fwd.conditional({}, extra)) +
                            std::log(bwd.conditional({}, extra));
    const FluencyScore base = fluency(fwd, bwd, y);
    if (pair_log / 2.0 >= std::log(base.f_lm)) continue;  // not below the mean
    TokenSequence longer = y;
    longer.tokens.push_back(extra);
    const FluencyScore grown = fluency(fwd, bwd, longer);
    CHECK(grown.f_lm < base.f_lm);
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("f_lm stays within (0, 1]") {
  const auto fwd = NGramLanguageModel::train(small_corpus(), 3, Direction::kForward);
  const auto bwd = NGramLanguageModel::train(small_corpus(), 3, Direction::kBackward);
  Rng rng(5);
  const auto vocab = fwd.vocabulary();
  for (int trial = 0; trial < 100; ++trial) {
    const TokenSequence y = random_sequence(vocab, rng, 10);
    const FluencyScore score = fluency(fwd, bwd, y);
    CHECK(score.f_lm > 0.0);
    CHECK(score.f_lm <= 1.0);
  }
}

TEST_CASE("ARPA round-trip preserves scores") {
  testsupport::TempDir tmp;
  for (const int order : {1, 2, 3, 4}) {
    for (const auto direction : {Direction::kForward, Direction::kBackward}) {
      const auto model = NGramLanguageModel::train(small_corpus(), order, direction);
      const auto path = tmp.file("roundtrip.arpa");
      model.save(path);
      const auto loaded = NGramLanguageModel::load(path);
      CHECK(loaded.direction() == direction);
      CHECK(loaded.order() == order);
      CHECK(loaded.level_sizes() == model.level_sizes());

      Rng rng(17);
      const auto vocab = model.vocabulary();
      for (int trial = 0; trial < 100; ++trial) {
        const TokenSequence y = random_sequence(vocab, rng, 9);
        const double a = model.sequence_log_prob(y);
        const double b = loaded.sequence_log_prob(y);
        CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)));
      }
    }
  }
}

TEST_CASE("loaded models stay normalized") {
  testsupport::TempDir tmp;
  const auto model = NGramLanguageModel::train(small_corpus(), 3, Direction::kForward);
  model.save(tmp.file("norm.arpa"));
  const auto loaded = NGramLanguageModel::load(tmp.file("norm.arpa"));
  const auto vocab = loaded.vocabulary();
  auto histories = loaded.stored_contexts();
  histories.resize(std::min<std::size_t>(histories.size(), 25));
  histories.push_back({});
  for (const auto& history : histories) {
    double sum = 0.0;
    for (const auto& token : vocab) sum += loaded.conditional(history, token);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("hand-written unigram ARPA matches its file values") {
  testsupport::TempDir tmp;
  const auto path = tmp.write("tiny.arpa",
                              "\\data\\\n"
                              "ngram 1=3\n"
                              "\n"
                              "\\1-grams:\n"
                              "-0.3\tfoo\n"
                              "-0.7\tbar\n"
                              "-1\t<unk>\n"
                              "\n"
                              "\\end\\\n");
  const auto model = NGramLanguageModel::load(path);
  CHECK(model.conditional({}, "foo") == doctest::Approx(std::pow(10.0, -0.3)).epsilon(1e-12));
  CHECK(model.conditional({}, "bar") == doctest::Approx(std::pow(10.0, -0.7)).epsilon(1e-12));
  CHECK(model.conditional({}, "never-seen") ==
        doctest::Approx(std::pow(10.0, -1.0)).epsilon(1e-12));
}

TEST_CASE("ARPA load error contracts") {
  testsupport::TempDir tmp;
  CHECK_THROWS_AS(NGramLanguageModel::load(tmp.file("missing.arpa")), IoError);
  // Truncated: no \end\.
  CHECK_THROWS_AS(
      NGramLanguageModel::load(tmp.write("trunc.arpa",
                                         "\\data\\\nngram 1=2\n\n\\1-grams:\n-0.3\tfoo\n")),
      FormatError);
  // Count mismatch.
  CHECK_THROWS_AS(NGramLanguageModel::load(
                      tmp.write("count.arpa",
                                "\\data\\\nngram 1=2\n\n\\1-grams:\n-0.3\tfoo\n\n\\end\\\n")),
                  FormatError);
  // Garbage numeric field.
  CHECK_THROWS_AS(NGramLanguageModel::load(
                      tmp.write("garbage.arpa",
                                "\\data\\\nngram 1=1\n\n\\1-grams:\nxyz\tfoo\n\n\\end\\\n")),
                  FormatError);
  // No data section at all.
  CHECK_THROWS_AS(NGramLanguageModel::load(tmp.write("nodata.arpa", "hello\n")), FormatError);
}

TEST_CASE("save records the backward direction header") {
  testsupport::TempDir tmp;
  const auto model = NGramLanguageModel::train({{"a", "b"}, {"b", "a"}}, 2, Direction::kBackward);
  model.save(tmp.file("bwd.arpa"));
  std::ifstream in(tmp.file("bwd.arpa"));
  std::string first_line;
  std::getline(in, first_line);
  CHECK(first_line == "; direction=backward");
}
