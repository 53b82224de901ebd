// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include "rl/trainer.hpp"

#include <cmath>

#include "common/error.hpp"
#include "nn/graph.hpp"

namespace cc::rl {

void RLConfig::validate() const {
  if (batch_size < 1 || total_steps < 0 || samples_per_post < 1 || max_retries < 0) {
    throw ArgumentError("batch size and samples per post must be positive");
  }
  if (!(learning_rate >= 0.0)) throw ArgumentError("learning rate must be nonnegative");
  if (checkpoint_interval < 0) throw ArgumentError("checkpoint interval must be nonnegative");
  if (!(baseline_decay >= 0.0 && baseline_decay < 1.0)) throw ArgumentError("baseline decay must lie in [0, 1)");
  adam();
  generation(0).validate();
}

nn::AdamConfig RLConfig::adam() const {
  nn::AdamConfig a;
  a.learning_rate = learning_rate;
  a.beta1 = beta1;
  a.beta2 = beta2;
  a.epsilon = epsilon;
  return a;
}

policy::GenerationConfig RLConfig::generation(std::uint64_t seed) const {
  policy::GenerationConfig g;
  g.top_p = top_p;
  g.max_new_tokens = max_new_tokens;
  g.temperature = temperature;
  g.seed = seed;
  return g;
}

double rl_loss(double reward, double logprob) {
  if (!(reward >= 0.0)) throw ArgumentError("reward must be nonnegative");
  return -reward * logprob;
}

RLGradient rl_gradient(const policy::PolicyModel& policy, std::span<const std::vector<int>> prompts,
                       std::span<const std::vector<int>> responses, std::span<const double> advantages) {
  if (prompts.size() != responses.size() || prompts.size() != advantages.size()) {
    throw ArgumentError("prompt, response and reward counts differ");
  }
  if (prompts.empty()) throw ArgumentError("no samples");
  const auto& params = policy.network().parameters();
  RLGradient out;
  out.grads = params.zero_gradients();
  const double inv_n = 1.0 / static_cast<double>(prompts.size());
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    nn::Graph g(&params);
    const auto lp = policy::sequence_logprob(g, policy, prompts[i], responses[i]);
    const auto loss = g.scale(lp, -advantages[i] * inv_n);
    out.loss += g.scalar(loss);
    if (advantages[i] != 0.0) g.backward(loss, out.grads);
  }
  return out;
}

TrainerState::TrainerState(const policy::PolicyModel& policy, const RLConfig& config)
    : adam_(policy.network().parameters(), config.adam()), rng_(config.seed) {}

StepRecord rl_step(policy::PolicyModel& policy, std::span<const std::string> posts, const rewards::RewardContext& ctx,
                   const rewards::RewardWeights& weights, TrainerState& state, const RLConfig& config) {
  if (posts.empty()) throw ArgumentError("RL step needs at least one post");
  ctx.validate();
  weights.validate();

  std::vector<Sample> samples;
  StepRecord rec;
  for (const auto& post : posts) {
    for (int k = 0; k < config.samples_per_post; ++k) {
      const auto seed = state.rng_.next();
      try {
        Sample s;
        s.post = post;
        s.prompt = policy.prompt_ids(post);
        s.generation = policy::generate(policy, post, config.generation(seed));
        s.rewards = rewards::score_all(ctx, post, s.generation.text);
        s.composite = rewards::composite_reward(weights, s.rewards);
        samples.push_back(std::move(s));
      } catch (const policy::EmptyGenerationError&) {
        ++rec.failed;
      }
    }
  }
  if (samples.empty()) throw policy::EmptyGenerationError("every generation in the batch was empty");

  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  rec.component_means.fluency = 0.0;
  for (const auto& s : samples) {
    mean += s.composite / n;
    rec.component_means.politeness += s.rewards.politeness / n;
    rec.component_means.refutation += s.rewards.refutation / n;
    rec.component_means.evidence += s.rewards.evidence / n;
    rec.component_means.coherence += s.rewards.coherence / n;
    rec.component_means.fluency += s.rewards.fluency / n;
  }
  rec.composite_mean = mean;
  rec.samples = samples.size();

  const double baseline = config.use_baseline && state.baseline_ready_ ? state.baseline_ : 0.0;
  rec.baseline = baseline;
  std::vector<std::vector<int>> prompts, responses;
  std::vector<double> advantages;
  for (auto& s : samples) {
    prompts.push_back(s.prompt);
    responses.push_back(s.generation.token_ids);
    advantages.push_back(s.composite - baseline);
  }
  auto grad = rl_gradient(policy, prompts, responses, advantages);
  rec.loss = grad.loss;
  rec.grad_norm = nn::global_norm(grad.grads);
  state.adam_.step(policy.network().parameters(), grad.grads);

  if (config.use_baseline) {
    state.baseline_ = state.baseline_ready_ ? config.baseline_decay * state.baseline_ + (1 - config.baseline_decay) * mean
                                            : mean;
    state.baseline_ready_ = true;
  }
  rec.step = ++state.steps_;
  return rec;
}

TrainLog train(policy::PolicyModel& policy, std::span<const std::string> posts, const rewards::RewardContext& ctx,
               const rewards::RewardWeights& weights, const RLConfig& config, const CheckpointFn& checkpoint,
               const StepCallback& on_step) {
  config.validate();
  TrainLog log;
  if (config.total_steps == 0) return log;
  if (posts.empty()) throw ArgumentError("RL training needs at least one post");

  TrainerState state(policy, config);
  std::optional<nn::ParameterSet> best;
  double best_reward = -INFINITY;
  const auto bs = static_cast<std::size_t>(config.batch_size);
  std::size_t cursor = 0;
  for (long long step = 0; step < config.total_steps; ++step) {
    std::vector<std::string> batch;
    for (std::size_t i = 0; i < bs; ++i) batch.push_back(posts[(cursor + i) % posts.size()]);
    cursor = (cursor + bs) % posts.size();

    std::optional<StepRecord> rec;
    for (int attempt = 0;; ++attempt) {
      try {
        rec = rl_step(policy, batch, ctx, weights, state, config);
        break;
      } catch (const policy::EmptyGenerationError&) {
        if (attempt >= config.max_retries) throw;
      }
    }
    if (config.keep_best && rec->composite_mean > best_reward) {
      best_reward = rec->composite_mean;
      best = policy.network().parameters();
      log.best_step = rec->step;
    }
    if (checkpoint && config.checkpoint_interval > 0 && rec->step % config.checkpoint_interval == 0) {
      rec->checkpoint = checkpoint(policy, rec->step);
      log.checkpoints.push_back(*rec->checkpoint);
    }
    if (on_step) on_step(*rec);
    log.steps.push_back(std::move(*rec));
  }
  if (config.keep_best && best) policy.network().parameters() = std::move(*best);
  return log;
}

nlohmann::json to_json(const StepRecord& r) {
  nlohmann::json j = {{"step", r.step},
                      {"composite_mean", r.composite_mean},
                      {"components", rewards::to_json(r.component_means)},
                      {"loss", r.loss},
                      {"grad_norm", r.grad_norm},
                      {"samples", r.samples},
                      {"failed", r.failed}};
  if (r.baseline != 0.0) j["baseline"] = r.baseline;
  if (r.checkpoint) j["checkpoint"] = *r.checkpoint;
  return j;
}

}  // namespace cc::rl
