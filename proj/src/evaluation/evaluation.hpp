// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "policy/policy.hpp"
#include "rewards/rewards.hpp"
#include "rl/trainer.hpp"

namespace cc::evaluation {

class Generator {
 public:
  virtual ~Generator() = default;
  virtual std::string id() const = 0;
  // One response for `post`; may throw on failure.
  virtual std::string generate(std::string_view post, std::uint64_t seed) const = 0;
};

class PolicyGenerator final : public Generator {
 public:
  PolicyGenerator(std::shared_ptr<const policy::PolicyModel> policy, policy::GenerationConfig config,
                  std::string id = "");
  std::string id() const override { return id_; }
  std::string generate(std::string_view post, std::uint64_t seed) const override;

 private:
  std::shared_ptr<const policy::PolicyModel> policy_;
  policy::GenerationConfig config_;
  std::string id_;
};

// Emits the same text for every post.
class FixedGenerator final : public Generator {
 public:
  FixedGenerator(std::string text, std::string id);
  std::string id() const override { return id_; }
  std::string generate(std::string_view, std::uint64_t) const override { return text_; }

 private:
  std::string text_;
  std::string id_;
};

// Looks the post up in a table of reference responses.
class LookupGenerator final : public Generator {
 public:
  LookupGenerator(std::vector<std::pair<std::string, std::string>> table, std::string id);
  std::string id() const override { return id_; }
  std::string generate(std::string_view post, std::uint64_t seed) const override;

 private:
  std::vector<std::pair<std::string, std::string>> table_;
  std::string id_;
};

struct ExampleScore {
  std::string post;
  std::string response;
  rewards::RewardVector rewards;
  double perplexity = 0.0;
  double nll_sum = 0.0;
  std::size_t tokens = 0;
};

struct MetricReport {
  std::string generator_id;
  double politeness = 0.0;
  double refutation = 0.0;
  double evidence = 0.0;
  double perplexity = 0.0;
  double relevance = 0.0;
  std::size_t n_examples = 0;
  std::size_t n_failed = 0;
  std::vector<ExampleScore> examples;
};

// Post i is generated with seed seed_base + i. Perplexity pools the token
// negative log-likelihood over all examples. More than 10% failed
// generations is a StateError.
MetricReport evaluate_generator(const Generator& generator, std::span<const std::string> posts,
                                const rewards::RewardContext& ctx, std::uint64_t seed_base = 0);

// Scores fixed (post, response) pairs, such as a corpus's own responses.
MetricReport evaluate_references(std::span<const std::pair<std::string, std::string>> pairs,
                                 const rewards::RewardContext& ctx, std::string id = "reference");

nlohmann::json to_json(const MetricReport& r, bool include_examples = false);

enum class VariantName { base, plus_politeness, plus_refutation, plus_evidence, full };
const char* to_string(VariantName v);
VariantName parse_variant(std::string_view s);

struct AblationVariant {
  VariantName name = VariantName::base;
  rewards::RewardWeights weights;
};

// base has all weights zero; plus_X keeps fluency and coherence at the
// defaults and zeroes the other two classifier weights; full uses `defaults`.
AblationVariant make_variant(VariantName name, const rewards::RewardWeights& defaults = {});
std::vector<AblationVariant> default_variants(const rewards::RewardWeights& defaults = {});

struct AblationRow {
  AblationVariant variant;
  std::optional<MetricReport> report;
  std::optional<std::string> error;
  std::size_t rl_steps = 0;
};

struct AblationConfig {
  rl::RLConfig rl;
  policy::GenerationConfig eval_generation;
  std::uint64_t eval_seed = 0;
};

// Every non-base variant is trained from a copy of `warm_start` with the same
// RL settings; every variant is evaluated on the same posts and seeds.
std::vector<AblationRow> run_ablation(const policy::PolicyModel& warm_start, std::span<const std::string> train_posts,
                                      std::span<const std::string> eval_posts, const rewards::RewardContext& ctx,
                                      std::span<const AblationVariant> variants, const AblationConfig& config);

std::string format_table(std::span<const AblationRow> rows);
nlohmann::json to_json(const AblationRow& row);

}  // namespace cc::evaluation
