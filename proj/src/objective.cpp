#include "hcsumm/objective.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace hcsumm {

std::strong_ordering compare(const ObjectiveValue& a, const ObjectiveValue& b) {
  if (a.log_score < b.log_score) return std::strong_ordering::less;
  if (a.log_score > b.log_score) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

namespace {

ObjectiveValue infeasible_value() {
  ObjectiveValue v;
  v.log_score = kNegInfinity;
  v.feasible = false;
  return v;
}

}  // namespace

SentenceObjective::SentenceObjective(const ObjectiveConfig& config, const Scorers& scorers,
                                     TokenSequence source)
    : config_(config), scorers_(scorers), source_(std::move(source)) {
  if (source_.empty()) throw std::invalid_argument("source sentence must be nonempty");
  if (config_.gamma < 0.0) throw std::invalid_argument("gamma must be nonnegative");
  if (config_.target_length < 1) throw std::invalid_argument("target length must be >= 1");
  if (scorers_.forward == nullptr) throw std::invalid_argument("forward language model required");
  if (config_.lm_mode == LmMode::kBidirectional && scorers_.backward == nullptr) {
    throw std::invalid_argument("backward language model required for bidirectional scoring");
  }

  const int n = source_.size();
  fwd_ids_.reserve(static_cast<std::size_t>(n));
  for (const auto& token : source_.tokens) fwd_ids_.push_back(scorers_.forward->scoring_id(token));
  if (config_.lm_mode == LmMode::kBidirectional) {
    bwd_ids_.reserve(static_cast<std::size_t>(n));
    for (const auto& token : source_.tokens) {
      bwd_ids_.push_back(scorers_.backward->scoring_id(token));
    }
  }

  if (config_.use_similarity) {
    if (scorers_.embeddings == nullptr || scorers_.idf == nullptr) {
      throw std::invalid_argument("embeddings and idf required for similarity scoring");
    }
    vectors_.reserve(static_cast<std::size_t>(n));
    idf_weights_.reserve(static_cast<std::size_t>(n));
    for (const auto& token : source_.tokens) {
      vectors_.push_back(scorers_.embeddings->find(token));
      idf_weights_.push_back(scorers_.idf->idf(token));
    }
    const SentenceVector ex = embed(*scorers_.embeddings, *scorers_.idf, source_);
    source_embedding_ = ex.components;
  }
}

ObjectiveValue SentenceObjective::combine(double log_f_lm, double f_sim) const {
  ObjectiveValue v;
  v.feasible = true;
  v.f_lm = std::exp(log_f_lm);
  v.f_sim = f_sim;
  v.log_score = log_f_lm;
  if (config_.use_similarity) v.log_score += config_.gamma * std::log(f_sim);
  return v;
}

ObjectiveValue SentenceObjective::score_positions(const std::vector<int>& positions) const {
  const int m = static_cast<int>(positions.size());
  if (m != config_.target_length) return infeasible_value();

  std::vector<std::uint32_t> ids;
  ids.reserve(positions.size());
  for (int p : positions) ids.push_back(fwd_ids_[static_cast<std::size_t>(p)]);
  const double lf = scorers_.forward->sequence_log_prob_ids(ids);

  double log_f_lm = 0.0;
  if (config_.lm_mode == LmMode::kBidirectional) {
    ids.clear();
    for (int p : positions) ids.push_back(bwd_ids_[static_cast<std::size_t>(p)]);
    std::reverse(ids.begin(), ids.end());
    const double lb = scorers_.backward->sequence_log_prob_ids(ids);
    log_f_lm = (lf + lb) / (2.0 * m);
  } else {
    log_f_lm = lf / m;
  }

  double f_sim = 1.0;
  if (config_.use_similarity) {
    std::vector<double> sum(source_embedding_.size(), 0.0);
    double weight_sum = 0.0;
    bool any = false;
    for (int p : positions) {
      const std::vector<double>* vec = vectors_[static_cast<std::size_t>(p)];
      if (vec == nullptr) continue;
      const double w = idf_weights_[static_cast<std::size_t>(p)];
      for (std::size_t d = 0; d < vec->size(); ++d) sum[d] += w * (*vec)[d];
      weight_sum += w;
      any = true;
    }
    if (any) {
      for (auto& c : sum) c /= weight_sum;
    }
    f_sim = std::clamp(cosine_similarity(source_embedding_, sum), kSimilarityFloor, 1.0);
  }
  return combine(log_f_lm, f_sim);
}

ObjectiveValue SentenceObjective::score(const TokenSequence& y) const {
  if (y.size() != config_.target_length) return infeasible_value();

  std::vector<std::uint32_t> ids;
  ids.reserve(y.tokens.size());
  for (const auto& token : y.tokens) ids.push_back(scorers_.forward->scoring_id(token));
  const double lf = scorers_.forward->sequence_log_prob_ids(ids);

  double log_f_lm = 0.0;
  if (config_.lm_mode == LmMode::kBidirectional) {
    ids.clear();
    for (const auto& token : y.tokens) ids.push_back(scorers_.backward->scoring_id(token));
    std::reverse(ids.begin(), ids.end());
    const double lb = scorers_.backward->sequence_log_prob_ids(ids);
    log_f_lm = (lf + lb) / (2.0 * y.size());
  } else {
    log_f_lm = lf / y.size();
  }

  double f_sim = 1.0;
  if (config_.use_similarity) {
    f_sim = similarity(*scorers_.embeddings, *scorers_.idf, source_, y);
  }
  return combine(log_f_lm, f_sim);
}

ObjectiveValue score(const ObjectiveConfig& config, const Scorers& scorers, const TokenSequence& x,
                     const TokenSequence& y) {
  if (y.size() != config.target_length) return infeasible_value();
  const SentenceObjective objective(config, scorers, x);
  return objective.score(y);
}

}  // namespace hcsumm
