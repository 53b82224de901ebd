// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>

#include "../support.hpp"
#include "common/error.hpp"
#include "common/kv_config.hpp"
#include "interface/candidates.hpp"
#include "text/utf8.hpp"

using namespace cc;
using namespace cc::interface;

TEST_CASE("candidates are ranked by composite reward", "[interface]") {
  const auto post = cctest::fixture_posts()[1];
  const auto c = generate_candidates(*cctest::warm_policy(), cctest::reward_context(), {}, post, 6, 11);
  REQUIRE(c.size() == 6);
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(c[i].rank == static_cast<int>(i + 1));
    if (i > 0) CHECK(c[i - 1].composite >= c[i].composite);
    CHECK(text::codepoint_length(c[i].text) <= 280);
    CHECK(c[i].scores.in_bounds());
    CHECK(c[i].composite == rewards::composite_reward({}, c[i].scores));
  }
  const auto again = generate_candidates(*cctest::warm_policy(), cctest::reward_context(), {}, post, 6, 11);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(again[i].text == c[i].text);
}

TEST_CASE("candidate requests are bounded", "[interface]") {
  const auto& ctx = cctest::reward_context();
  const auto& policy = *cctest::warm_policy();
  CHECK_THROWS_AS(generate_candidates(policy, ctx, {}, "post", 0, 1), ArgumentError);
  CHECK_THROWS_AS(generate_candidates(policy, ctx, {}, "post", 9, 1), ArgumentError);
  CHECK_THROWS_AS(generate_candidates(policy, ctx, {}, "post", 3, 1, {}, 2), ArgumentError);
  CHECK_THROWS_AS(generate_candidates(policy, ctx, {}, "", 1, 1), ArgumentError);
}

TEST_CASE("drafts are scored like candidates", "[interface]") {
  const auto& ctx = cctest::reward_context();
  const auto post = cctest::fixture_posts()[0];
  const std::string draft = "Thank you for sharing, but this claim is false.";
  const auto c = score_draft(ctx, {}, post, draft);
  const auto v = rewards::score_all(ctx, post, draft);
  CHECK(c.scores.politeness == v.politeness);
  CHECK(c.scores.coherence == v.coherence);
  CHECK(c.composite == rewards::composite_reward({}, v));
  CHECK(score_draft(ctx, {}, post, post).scores.coherence == 1.0);
  std::string longest;
  while (longest.size() < 280) longest += "This claim is false. ";
  longest.resize(280);
  CHECK_NOTHROW(score_draft(ctx, {}, post, longest));
  CHECK_THROWS_AS(score_draft(ctx, {}, post, longest + "!"), ArgumentError);
  CHECK_THROWS_AS(score_draft(ctx, {}, post, ""), ArgumentError);
}

TEST_CASE("service config resolves paths and applies overrides", "[interface]") {
  const auto dir = cctest::scratch_dir("svcconf");
  {
    std::ofstream f(dir / "svc.conf");
    f << "policy_checkpoint = models/p.ccp\ncontext_dir = /abs/ctx\nport = 9000\ntop_p = 0.8\nalpha = 2\n";
  }
  auto cfg = load_service_config(dir / "svc.conf");
  CHECK(cfg.policy_checkpoint == dir / "models/p.ccp");
  CHECK(cfg.context_dir == "/abs/ctx");
  CHECK(cfg.port == 9000);
  CHECK(cfg.generation.top_p == 0.8);
  CHECK(cfg.weights.alpha == 2.0);
  CHECK(cfg.bind_address == "127.0.0.1");

  ::setenv("CC_PORT", "9100", 1);
  ::setenv("CC_BIND_ADDRESS", "0.0.0.0", 1);
  apply_env_overrides(cfg);
  CHECK(cfg.port == 9100);
  CHECK(cfg.bind_address == "0.0.0.0");
  ::setenv("CC_PORT", "lots", 1);
  CHECK_THROWS_AS(apply_env_overrides(cfg), ArgumentError);
  ::unsetenv("CC_PORT");
  ::unsetenv("CC_BIND_ADDRESS");

  CHECK(to_json(cfg)["port"] == 9100);
  cfg.misinfo_gate = true;
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg.misinfo_gate = false;
  cfg.port = 70000;
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("key-value config parsing", "[interface][config]") {
  const auto kv = KeyValueConfig::parse("# comment\n a = 1 \nb= two words\n\nflag = true\n");
  CHECK(kv.get_int("a", 0) == 1);
  CHECK(kv.get_or("b", "") == "two words");
  CHECK(kv.get_bool("flag", false));
  CHECK_FALSE(kv.contains("c"));
  CHECK(kv.get_double("c", 0.5) == 0.5);
  CHECK_THROWS_AS(KeyValueConfig::parse("no equals sign\n"), ValidationError);
  CHECK_THROWS_AS(KeyValueConfig::load("/nonexistent.conf"), IoError);
}
