// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "nn/adam.hpp"
#include "nn/random.hpp"
#include "policy/policy.hpp"
#include "rewards/rewards.hpp"

namespace cc::rl {

struct RLConfig {
  int batch_size = 8;
  long long total_steps = 10000;
  double learning_rate = 1e-5;
  std::uint64_t seed = 0;
  int samples_per_post = 1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double top_p = 0.9;
  int max_new_tokens = 64;
  double temperature = 1.0;
  // 0 disables periodic checkpoints.
  long long checkpoint_interval = 0;
  // Restore the step with the highest mean composite reward at the end.
  bool keep_best = false;
  // Extension: subtract a moving average of past rewards. Off by default.
  bool use_baseline = false;
  double baseline_decay = 0.9;
  int max_retries = 3;

  void validate() const;
  nn::AdamConfig adam() const;
  policy::GenerationConfig generation(std::uint64_t seed) const;
};

// -reward * logprob. Throws ArgumentError for a negative reward.
double rl_loss(double reward, double logprob);

struct Sample {
  std::string post;
  std::vector<int> prompt;
  policy::GenerationResult generation;
  rewards::RewardVector rewards;
  double composite = 0.0;
};

struct StepRecord {
  long long step = 0;
  double composite_mean = 0.0;
  rewards::RewardVector component_means;
  double loss = 0.0;
  double grad_norm = 0.0;
  double baseline = 0.0;
  std::size_t samples = 0;
  std::size_t failed = 0;
  std::optional<std::string> checkpoint;
};

struct TrainLog {
  std::vector<StepRecord> steps;
  std::vector<std::string> checkpoints;
  std::optional<long long> best_step;
};

struct RLGradient {
  double loss = 0.0;
  nn::Gradients grads;
};

// Mean over samples of -(advantage_i) * log p(response_i | prompt_i), with
// rewards treated as constants.
RLGradient rl_gradient(const policy::PolicyModel& policy, std::span<const std::vector<int>> prompts,
                       std::span<const std::vector<int>> responses, std::span<const double> advantages);

// Optimizer, sampling stream and baseline owned by one training job.
class TrainerState {
 public:
  TrainerState(const policy::PolicyModel& policy, const RLConfig& config);

  nn::Adam& optimizer() { return adam_; }
  nn::Rng& rng() { return rng_; }
  long long steps_done() const { return steps_; }
  double baseline() const { return baseline_; }

 private:
  friend StepRecord rl_step(policy::PolicyModel&, std::span<const std::string>, const rewards::RewardContext&,
                            const rewards::RewardWeights&, TrainerState&, const RLConfig&);
  nn::Adam adam_;
  nn::Rng rng_;
  double baseline_ = 0.0;
  bool baseline_ready_ = false;
  long long steps_ = 0;
};

// Samples one response per post (samples_per_post times), scores it, and
// applies one optimizer update on the batch mean loss. Throws
// EmptyGenerationError when no post produced a response.
StepRecord rl_step(policy::PolicyModel& policy, std::span<const std::string> posts, const rewards::RewardContext& ctx,
                   const rewards::RewardWeights& weights, TrainerState& state, const RLConfig& config);

using CheckpointFn = std::function<std::string(const policy::PolicyModel&, long long step)>;
using StepCallback = std::function<void(const StepRecord&)>;

// Runs config.total_steps steps, cycling through `posts` in batches.
TrainLog train(policy::PolicyModel& policy, std::span<const std::string> posts, const rewards::RewardContext& ctx,
               const rewards::RewardWeights& weights, const RLConfig& config, const CheckpointFn& checkpoint = {},
               const StepCallback& on_step = {});

nlohmann::json to_json(const StepRecord& r);

}  // namespace cc::rl
