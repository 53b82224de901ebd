// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "classifiers/classifier.hpp"
#include "common/kv_config.hpp"
#include "policy/policy.hpp"

namespace cc::rewards {

struct RewardWeights {
  double alpha = 1.0;    // politeness
  double beta = 1.0;     // refutation
  double gamma = 1.0;    // evidence
  double theta = 10.0;   // fluency
  double lambda = 0.1;   // coherence

  void validate() const;
  // Reads alpha/beta/gamma/theta/lambda; absent keys keep the defaults.
  static RewardWeights from_config(const KeyValueConfig& config);
  friend bool operator==(const RewardWeights&, const RewardWeights&) = default;
};

struct RewardVector {
  double politeness = 0.0;
  double refutation = 0.0;
  double evidence = 0.0;
  double fluency = 1.0;
  double coherence = 0.0;

  bool in_bounds() const;
};

// alpha*politeness + beta*refutation + gamma*evidence + theta*fluency + lambda*coherence
double composite_reward(const RewardWeights& w, const RewardVector& v);

nlohmann::json to_json(const RewardWeights& w);
nlohmann::json to_json(const RewardVector& v);

class TextScorer {
 public:
  virtual ~TextScorer() = default;
  // Probability in [0, 1]; `post` is ignored by single-text scorers.
  virtual double score(std::string_view post, std::string_view response) const = 0;
};

class FluencyModel {
 public:
  virtual ~FluencyModel() = default;
  // log p of each scored unit of the response, in order.
  virtual std::vector<double> unit_logprobs(std::string_view response) const = 0;
};

class TextEmbedder {
 public:
  virtual ~TextEmbedder() = default;
  virtual Eigen::VectorXd embed(std::string_view text) const = 0;
};

class ClassifierScorer final : public TextScorer {
 public:
  explicit ClassifierScorer(std::shared_ptr<const classifiers::ClassifierModel> model);
  double score(std::string_view post, std::string_view response) const override;
  const classifiers::ClassifierModel& model() const { return *model_; }

 private:
  std::shared_ptr<const classifiers::ClassifierModel> model_;
};

// Units are the reference model's tokens for the response plus <eos>,
// conditioned on an empty post. Characters outside the vocabulary map to <unk>.
class ReferenceFluency final : public FluencyModel {
 public:
  explicit ReferenceFluency(std::shared_ptr<const policy::PolicyModel> model);
  std::vector<double> unit_logprobs(std::string_view response) const override;

 private:
  std::shared_ptr<const policy::PolicyModel> model_;
};

// Mean of the reference model's token embeddings.
class MeanPoolEmbedder final : public TextEmbedder {
 public:
  explicit MeanPoolEmbedder(std::shared_ptr<const policy::PolicyModel> model);
  Eigen::VectorXd embed(std::string_view text) const override;

 private:
  std::shared_ptr<const policy::PolicyModel> model_;
};

struct RewardContext {
  std::shared_ptr<const TextScorer> politeness;
  std::shared_ptr<const TextScorer> refutation;
  std::shared_ptr<const TextScorer> evidence;
  std::shared_ptr<const FluencyModel> fluency;
  std::shared_ptr<const TextEmbedder> embedder;

  void validate() const;
};

// Builds a context from politeness.clf, refutation.clf, evidence.clf and
// reference.lm inside `dir`.
RewardContext load_context(const std::filesystem::path& dir);
RewardContext make_context(std::shared_ptr<const classifiers::ClassifierModel> politeness,
                           std::shared_ptr<const classifiers::ClassifierModel> refutation,
                           std::shared_ptr<const classifiers::ClassifierModel> evidence,
                           std::shared_ptr<const policy::PolicyModel> reference);

double politeness_reward(const RewardContext& ctx, std::string_view response);
double refutation_reward(const RewardContext& ctx, std::string_view post, std::string_view response);
double evidence_reward(const RewardContext& ctx, std::string_view post, std::string_view response);
double fluency_reward(const RewardContext& ctx, std::string_view response);
double coherence_reward(const RewardContext& ctx, std::string_view post, std::string_view response);

// exp(mean log p); throws ArgumentError for an empty sequence.
double fluency_from_logprobs(std::span<const double> logprobs);
// exp(-mean log p) under the context's reference model.
double perplexity(const RewardContext& ctx, std::string_view response);
// Cosine similarity clamped to [0, 1]; throws ArgumentError on a zero vector.
double clamped_cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

RewardVector score_all(const RewardContext& ctx, std::string_view post, std::string_view response);

}  // namespace cc::rewards
