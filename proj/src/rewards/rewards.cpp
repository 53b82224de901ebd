// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include "rewards/rewards.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"

namespace cc::rewards {

namespace {

void require_text(std::string_view s, const char* what) {
  if (s.empty()) throw ArgumentError(std::string(what) + " must not be empty");
}

bool unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

void RewardWeights::validate() const {
  for (double w : {alpha, beta, gamma, theta, lambda}) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ArgumentError("reward weights must be finite and nonnegative");
  }
}

RewardWeights RewardWeights::from_config(const KeyValueConfig& config) {
  RewardWeights w;
  w.alpha = config.get_double("alpha", w.alpha);
  w.beta = config.get_double("beta", w.beta);
  w.gamma = config.get_double("gamma", w.gamma);
  w.theta = config.get_double("theta", w.theta);
  w.lambda = config.get_double("lambda", w.lambda);
  w.validate();
  return w;
}

bool RewardVector::in_bounds() const {
  return unit(politeness) && unit(refutation) && unit(evidence) && fluency > 0.0 && fluency <= 1.0 && unit(coherence);
}

double composite_reward(const RewardWeights& w, const RewardVector& v) {
  return w.alpha * v.politeness + w.beta * v.refutation + w.gamma * v.evidence + w.theta * v.fluency +
         w.lambda * v.coherence;
}

nlohmann::json to_json(const RewardWeights& w) {
  return {{"alpha", w.alpha}, {"beta", w.beta}, {"gamma", w.gamma}, {"theta", w.theta}, {"lambda", w.lambda}};
}

nlohmann::json to_json(const RewardVector& v) {
  return {{"politeness", v.politeness},
          {"refutation", v.refutation},
          {"evidence", v.evidence},
          {"fluency", v.fluency},
          {"coherence", v.coherence}};
}

ClassifierScorer::ClassifierScorer(std::shared_ptr<const classifiers::ClassifierModel> model)
    : model_(std::move(model)) {
  if (!model_) throw ArgumentError("classifier scorer needs a model");
}

double ClassifierScorer::score(std::string_view post, std::string_view response) const {
  if (model_->arity() == classifiers::Arity::text_pair) return classifiers::score(*model_, post, response);
  return classifiers::score(*model_, std::nullopt, response);
}

ReferenceFluency::ReferenceFluency(std::shared_ptr<const policy::PolicyModel> model) : model_(std::move(model)) {
  if (!model_) throw ArgumentError("fluency scorer needs a reference model");
}

std::vector<double> ReferenceFluency::unit_logprobs(std::string_view response) const {
  require_text(response, "response");
  auto ids = model_->tokenizer().encode(response);
  ids.push_back(text::kEos);
  const auto prompt = model_->prompt_ids("");
  if (prompt.size() + ids.size() > static_cast<std::size_t>(model_->context_window()) + 1) {
    throw ArgumentError("response does not fit the reference model context window");
  }
  return policy::token_logprobs(*model_, prompt, ids);
}

MeanPoolEmbedder::MeanPoolEmbedder(std::shared_ptr<const policy::PolicyModel> model) : model_(std::move(model)) {
  if (!model_) throw ArgumentError("embedder needs a reference model");
}

Eigen::VectorXd MeanPoolEmbedder::embed(std::string_view text) const {
  require_text(text, "text");
  const auto ids = model_->tokenizer().encode(text);
  const auto& params = model_->network().parameters();
  const auto& table = params.value(params.index_of("wte"));
  Eigen::VectorXd v = Eigen::VectorXd::Zero(table.cols());
  for (int id : ids) v += table.row(id).transpose();
  return v / static_cast<double>(ids.size());
}

void RewardContext::validate() const {
  if (!politeness || !refutation || !evidence || !fluency || !embedder) {
    throw StateError("reward context is missing a scorer");
  }
}

RewardContext make_context(std::shared_ptr<const classifiers::ClassifierModel> politeness,
                           std::shared_ptr<const classifiers::ClassifierModel> refutation,
                           std::shared_ptr<const classifiers::ClassifierModel> evidence,
                           std::shared_ptr<const policy::PolicyModel> reference) {
  using classifiers::Task;
  if (!politeness || politeness->task() != Task::politeness) throw ArgumentError("expected a politeness classifier");
  if (!refutation || refutation->task() != Task::refutation) throw ArgumentError("expected a refutation classifier");
  if (!evidence || evidence->task() != Task::evidence) throw ArgumentError("expected an evidence classifier");
  RewardContext ctx;
  ctx.politeness = std::make_shared<ClassifierScorer>(std::move(politeness));
  ctx.refutation = std::make_shared<ClassifierScorer>(std::move(refutation));
  ctx.evidence = std::make_shared<ClassifierScorer>(std::move(evidence));
  ctx.fluency = std::make_shared<ReferenceFluency>(reference);
  ctx.embedder = std::make_shared<MeanPoolEmbedder>(std::move(reference));
  return ctx;
}

RewardContext load_context(const std::filesystem::path& dir) {
  auto clf = [&](const char* name) {
    return std::make_shared<const classifiers::ClassifierModel>(classifiers::ClassifierModel::load(dir / name));
  };
  auto reference = std::make_shared<const policy::PolicyModel>(policy::PolicyModel::load(dir / "reference.lm"));
  return make_context(clf("politeness.clf"), clf("refutation.clf"), clf("evidence.clf"), std::move(reference));
}

double politeness_reward(const RewardContext& ctx, std::string_view response) {
  require_text(response, "response");
  return ctx.politeness->score("", response);
}

double refutation_reward(const RewardContext& ctx, std::string_view post, std::string_view response) {
  require_text(post, "post");
  require_text(response, "response");
  return ctx.refutation->score(post, response);
}

double evidence_reward(const RewardContext& ctx, std::string_view post, std::string_view response) {
  require_text(post, "post");
  require_text(response, "response");
  return ctx.evidence->score(post, response);
}

double fluency_from_logprobs(std::span<const double> logprobs) {
  if (logprobs.empty()) throw ArgumentError("fluency is undefined for an empty sequence");
  double sum = 0.0;
  for (double lp : logprobs) sum += lp;
  return std::exp(sum / static_cast<double>(logprobs.size()));
}

double fluency_reward(const RewardContext& ctx, std::string_view response) {
  const auto lps = ctx.fluency->unit_logprobs(response);
  return fluency_from_logprobs(lps);
}

double perplexity(const RewardContext& ctx, std::string_view response) {
  const auto lps = ctx.fluency->unit_logprobs(response);
  if (lps.empty()) throw ArgumentError("perplexity is undefined for an empty sequence");
  double sum = 0.0;
  for (double lp : lps) sum += lp;
  return std::exp(-sum / static_cast<double>(lps.size()));
}

double clamped_cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw ArgumentError("embedding sizes differ");
  const double aa = a.dot(a);
  const double bb = b.dot(b);
  if (!(aa > 0.0) || !(bb > 0.0)) throw ArgumentError("cosine similarity of a zero vector");
  return std::clamp(a.dot(b) / std::sqrt(aa * bb), 0.0, 1.0);
}

double coherence_reward(const RewardContext& ctx, std::string_view post, std::string_view response) {
  require_text(post, "post");
  require_text(response, "response");
  return clamped_cosine(ctx.embedder->embed(post), ctx.embedder->embed(response));
}

RewardVector score_all(const RewardContext& ctx, std::string_view post, std::string_view response) {
  ctx.validate();
  RewardVector v;
  v.politeness = politeness_reward(ctx, response);
  v.refutation = refutation_reward(ctx, post, response);
  v.evidence = evidence_reward(ctx, post, response);
  v.fluency = fluency_reward(ctx, response);
  v.coherence = coherence_reward(ctx, post, response);
  return v;
}

}  // namespace cc::rewards
