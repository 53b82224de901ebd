// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "../support.hpp"
#include "common/error.hpp"
#include "rl/trainer.hpp"
#include "text/tokenizer.hpp"

using namespace cc;
using namespace cc::rl;

namespace {

RLConfig small_config(std::uint64_t seed = 1) {
  RLConfig c;
  c.batch_size = 4;
  c.total_steps = 3;
  c.learning_rate = 1e-3;
  c.seed = seed;
  c.max_new_tokens = 48;
  return c;
}

// Forces <eos> as the first token so every generation is empty.
policy::PolicyModel silent_policy() {
  auto m = *cctest::warm_policy();
  auto& p = m.network().parameters();
  p.value(p.index_of("lnf.g")).setZero();
  p.value(p.index_of("lnf.b")).setOnes();
  auto& head = p.value(p.index_of("w_head"));
  head.setZero();
  head.col(text::kEos).setConstant(100.0);
  return m;
}

}  // namespace

TEST_CASE("loss is the negated reward-weighted log-probability", "[rl]") {
  CHECK(rl_loss(2.0, -3.0) == 6.0);
  CHECK(rl_loss(0.0, -3.0) == 0.0);
  CHECK_THROWS_AS(rl_loss(-0.1, -1.0), ArgumentError);
}

TEST_CASE("batch gradient is the mean of per-sample gradients", "[rl][property]") {
  const auto policy = cctest::warm_policy();
  const auto p1 = policy->prompt_ids("post one");
  const auto p2 = policy->prompt_ids("another post");
  const auto r1 = policy->tokenizer().encode("This is false.");
  const auto r2 = policy->tokenizer().encode("Thank you.");
  const std::vector<std::vector<int>> prompts{p1, p2}, responses{r1, r2};
  const std::vector<double> adv{1.5, 0.25};
  const auto both = rl_gradient(*policy, prompts, responses, adv);
  const auto a = rl_gradient(*policy, std::span(prompts).first(1), std::span(responses).first(1),
                             std::span(adv).first(1));
  const auto b = rl_gradient(*policy, std::span(prompts).last(1), std::span(responses).last(1),
                             std::span(adv).last(1));
  CHECK(both.loss == Catch::Approx(0.5 * (a.loss + b.loss)).epsilon(1e-12));
  for (std::size_t i = 0; i < both.grads.size(); ++i)
    CHECK((both.grads[i] - 0.5 * (a.grads[i] + b.grads[i])).norm() <= 1e-12 * (1.0 + both.grads[i].norm()));
  CHECK_THROWS_AS(rl_gradient(*policy, prompts, std::span(responses).first(1), adv), ArgumentError);
}

TEST_CASE("rl steps are reproducible for a seed", "[rl]") {
  const auto posts = cctest::fixture_posts();
  const auto batch = std::span(posts).first(4);
  auto run = [&] {
    auto model = *cctest::warm_policy();
    const auto cfg = small_config(5);
    TrainerState state(model, cfg);
    std::vector<StepRecord> recs;
    for (int i = 0; i < 2; ++i)
      recs.push_back(rl_step(model, batch, cctest::reward_context(), rewards::RewardWeights{}, state, cfg));
    return std::make_pair(model.id(), recs);
  };
  const auto [id_a, a] = run();
  const auto [id_b, b] = run();
  CHECK(id_a == id_b);
  CHECK(id_a != cctest::warm_policy()->id());
  CHECK(a[1].composite_mean == b[1].composite_mean);
  CHECK(a[1].step == 2);
  CHECK(a[0].samples == 4);
  CHECK(a[0].component_means.in_bounds());
}

TEST_CASE("zero weights or zero learning rate leave the policy unchanged", "[rl]") {
  const auto posts = cctest::fixture_posts();
  {
    auto model = *cctest::warm_policy();
    const auto before = model.id();
    train(model, posts, cctest::reward_context(), rewards::RewardWeights{0, 0, 0, 0, 0}, small_config());
    CHECK(model.id() == before);
  }
  {
    auto model = *cctest::warm_policy();
    const auto before = model.id();
    auto cfg = small_config();
    cfg.learning_rate = 0.0;
    const auto log = train(model, posts, cctest::reward_context(), rewards::RewardWeights{}, cfg);
    CHECK(log.steps.size() == 3);
    CHECK(log.steps.back().loss > 0.0);
    CHECK(model.id() == before);
  }
}

TEST_CASE("training checkpoints, reports progress and keeps the best step", "[rl]") {
  auto model = *cctest::warm_policy();
  auto cfg = small_config();
  cfg.total_steps = 5;
  cfg.checkpoint_interval = 2;
  cfg.keep_best = true;
  std::vector<long long> saved, seen;
  const auto log = train(
      model, cctest::fixture_posts(), cctest::reward_context(), rewards::RewardWeights{}, cfg,
      [&](const policy::PolicyModel&, long long step) {
        saved.push_back(step);
        return "ckpt-" + std::to_string(step);
      },
      [&](const StepRecord& r) { seen.push_back(r.step); });
  CHECK(saved == std::vector<long long>{2, 4});
  CHECK(seen == std::vector<long long>{1, 2, 3, 4, 5});
  CHECK(log.checkpoints == std::vector<std::string>{"ckpt-2", "ckpt-4"});
  REQUIRE(log.best_step.has_value());
  double best = 0.0;
  for (const auto& s : log.steps) best = std::max(best, s.composite_mean);
  CHECK(log.steps[static_cast<std::size_t>(*log.best_step - 1)].composite_mean == best);
  const auto j = to_json(log.steps[1]);
  CHECK(j["step"] == 2);
  CHECK(j["checkpoint"] == "ckpt-2");
  CHECK(j["components"].contains("politeness"));
}

TEST_CASE("baseline tracks a moving average of rewards", "[rl]") {
  auto model = *cctest::warm_policy();
  auto cfg = small_config();
  cfg.use_baseline = true;
  cfg.baseline_decay = 0.5;
  const auto posts = cctest::fixture_posts();
  TrainerState state(model, cfg);
  const auto r1 = rl_step(model, std::span(posts).first(4), cctest::reward_context(), {}, state, cfg);
  CHECK(r1.baseline == 0.0);
  CHECK(state.baseline() == r1.composite_mean);
  const auto r2 = rl_step(model, std::span(posts).first(4), cctest::reward_context(), {}, state, cfg);
  CHECK(r2.baseline == r1.composite_mean);
  CHECK(state.baseline() == Catch::Approx(0.5 * r1.composite_mean + 0.5 * r2.composite_mean));
}

TEST_CASE("empty generations fail the step after retries", "[rl]") {
  auto model = silent_policy();
  auto cfg = small_config();
  cfg.max_retries = 1;
  const auto posts = cctest::fixture_posts();
  TrainerState state(model, cfg);
  CHECK_THROWS_AS(rl_step(model, std::span(posts).first(2), cctest::reward_context(), {}, state, cfg),
                  policy::EmptyGenerationError);
  CHECK_THROWS_AS(train(model, posts, cctest::reward_context(), {}, cfg), policy::EmptyGenerationError);
}

TEST_CASE("rl configuration is validated", "[rl]") {
  RLConfig c;
  CHECK_NOTHROW(c.validate());
  c.batch_size = 0;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = RLConfig{};
  c.learning_rate = -1;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = RLConfig{};
  c.top_p = 1.5;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = RLConfig{};
  c.baseline_decay = 1.0;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  CHECK(RLConfig{}.top_p == 0.9);
  CHECK(RLConfig{}.learning_rate == 1e-5);
  CHECK(RLConfig{}.batch_size == 8);
}
