// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>

#include "../support.hpp"
#include "common/error.hpp"
#include "common/kv_config.hpp"
#include "nn/random.hpp"
#include "policy/policy.hpp"
#include "rewards/rewards.hpp"

using namespace cc;
using namespace cc::rewards;

TEST_CASE("default weights", "[rewards]") {
  const RewardWeights w;
  CHECK(w.alpha == 1.0);
  CHECK(w.beta == 1.0);
  CHECK(w.gamma == 1.0);
  CHECK(w.theta == 10.0);
  CHECK(w.lambda == 0.1);
  CHECK_NOTHROW(w.validate());
  RewardWeights bad = w;
  bad.gamma = -0.5;
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
  bad.gamma = std::nan("");
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
}

TEST_CASE("weights read from a config file", "[rewards]") {
  const auto kv = KeyValueConfig::parse("# weights\nalpha = 2\nlambda=0.5\n");
  const auto w = RewardWeights::from_config(kv);
  CHECK(w.alpha == 2.0);
  CHECK(w.beta == 1.0);
  CHECK(w.lambda == 0.5);
  CHECK_THROWS(RewardWeights::from_config(KeyValueConfig::parse("theta = lots\n")));
}

TEST_CASE("composite reward is linear in the weights", "[rewards][property]") {
  nn::Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    RewardWeights a{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
    RewardWeights b{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
    RewardVector v{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
    RewardWeights sum{a.alpha + b.alpha, a.beta + b.beta, a.gamma + b.gamma, a.theta + b.theta,
                      a.lambda + b.lambda};
    CHECK(composite_reward(sum, v) ==
          Catch::Approx(composite_reward(a, v) + composite_reward(b, v)).epsilon(1e-12));
    CHECK(composite_reward(a, v) >= 0.0);
  }
  const RewardWeights zero{0, 0, 0, 0, 0};
  CHECK(composite_reward(zero, RewardVector{1, 1, 1, 1, 1}) == 0.0);
  CHECK_FALSE(RewardVector{1.5, 0, 0, 1, 0}.in_bounds());
  CHECK_FALSE(RewardVector{0, 0, 0, 0, 0}.in_bounds());
}

TEST_CASE("clamped cosine", "[rewards]") {
  Eigen::VectorXd a(3), b(3);
  a << 1, 2, 3;
  b << -1, -2, -3;
  CHECK(clamped_cosine(a, a) == 1.0);
  CHECK(clamped_cosine(a, b) == 0.0);
  b << 2, 4, 6;
  CHECK(clamped_cosine(a, b) == Catch::Approx(1.0).epsilon(1e-15));
  b << 3, 0, -1;
  CHECK(clamped_cosine(a, b) == 0.0);
  CHECK_THROWS_AS(clamped_cosine(a, Eigen::VectorXd::Zero(3)), ArgumentError);
  CHECK_THROWS_AS(clamped_cosine(a, Eigen::VectorXd::Ones(2)), ArgumentError);
}

TEST_CASE("fluency is the geometric mean of unit probabilities", "[rewards]") {
  const std::vector<double> lp{std::log(0.5), std::log(0.125)};
  CHECK(fluency_from_logprobs(lp) == Catch::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(fluency_from_logprobs(std::vector<double>{}), ArgumentError);
}

TEST_CASE("every reward lies in the unit interval", "[rewards][property]") {
  const auto& ctx = cctest::reward_context();
  const auto policy = cctest::warm_policy();
  const auto posts = cctest::fixture_posts();
  for (std::uint64_t s = 0; s < 24; ++s) {
    policy::GenerationConfig g;
    g.seed = s;
    const auto& post = posts[s % posts.size()];
    const auto text = policy::generate(*policy, post, g).text;
    const auto v = score_all(ctx, post, text);
    CHECK(v.in_bounds());
    CHECK(v.fluency * perplexity(ctx, text) == Catch::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("rewards separate fixture properties", "[rewards]") {
  const auto& ctx = cctest::reward_context();
  const auto& pairs = cctest::classifier_pairs();
  for (const auto& p : pairs) {
    if (*p.response.politeness == corpus::Politeness::polite)
      CHECK(politeness_reward(ctx, p.response.text) > 0.5);
    if (*p.response.politeness == corpus::Politeness::rude) CHECK(politeness_reward(ctx, p.response.text) < 0.5);
    CHECK((refutation_reward(ctx, p.post.text, p.response.text) > 0.5) == *p.response.refuting);
    CHECK((evidence_reward(ctx, p.post.text, p.response.text) > 0.5) == *p.response.evidence);
  }
}

TEST_CASE("coherence of a text with itself is one", "[rewards]") {
  const auto& ctx = cctest::reward_context();
  for (const auto& post : cctest::fixture_posts()) CHECK(coherence_reward(ctx, post, post) == 1.0);
}

TEST_CASE("context requires every component", "[rewards]") {
  RewardContext ctx = cctest::reward_context();
  ctx.embedder.reset();
  CHECK_THROWS_AS(ctx.validate(), StateError);
  CHECK_THROWS_AS(make_context(cctest::classifier(classifiers::Task::refutation),
                               cctest::classifier(classifiers::Task::refutation),
                               cctest::classifier(classifiers::Task::evidence), cctest::reference_model()),
                  ArgumentError);
  CHECK_THROWS_AS(load_context("/nonexistent/context"), IoError);
}

TEST_CASE("context loads from a directory", "[rewards]") {
  using classifiers::Task;
  const auto dir = cctest::scratch_dir("context");
  cctest::classifier(Task::politeness)->save(dir / "politeness.clf");
  cctest::classifier(Task::refutation)->save(dir / "refutation.clf");
  cctest::classifier(Task::evidence)->save(dir / "evidence.clf");
  cctest::reference_model()->save(dir / "reference.lm");
  const auto loaded = load_context(dir);
  const std::string post = cctest::fixture_posts()[0];
  const std::string reply = "Thank you for sharing, but this claim is false.";
  const auto a = score_all(loaded, post, reply);
  const auto b = score_all(cctest::reward_context(), post, reply);
  CHECK(a.politeness == b.politeness);
  CHECK(a.refutation == b.refutation);
  CHECK(a.evidence == b.evidence);
  CHECK(a.fluency == b.fluency);
  CHECK(a.coherence == b.coherence);
  std::filesystem::remove_all(dir);
}
