// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include "interface/candidates.hpp"

#include <algorithm>
#include <cstdlib>

#include "common/error.hpp"
#include "nn/random.hpp"
#include "text/utf8.hpp"

namespace cc::interface {

std::vector<CandidateResponse> generate_candidates(const policy::PolicyModel& policy,
                                                   const rewards::RewardContext& ctx,
                                                   const rewards::RewardWeights& weights, std::string_view post_text,
                                                   int n, std::uint64_t seed,
                                                   const policy::GenerationConfig& generation, int max_candidates) {
  if (post_text.empty()) throw ArgumentError("post_text must not be empty");
  if (max_candidates < 1) throw ArgumentError("max_candidates must be at least 1");
  if (n < 1 || n > max_candidates) {
    throw ArgumentError("n must lie in [1, " + std::to_string(max_candidates) + "]");
  }
  weights.validate();
  std::vector<CandidateResponse> out;
  for (int k = 0; k < n; ++k) {
    auto cfg = generation;
    cfg.seed = nn::mix_seed(seed, static_cast<std::uint64_t>(k));
    const auto g = policy::generate(policy, post_text, cfg);
    CandidateResponse c;
    c.text = g.text;
    c.scores = rewards::score_all(ctx, post_text, c.text);
    c.composite = rewards::composite_reward(weights, c.scores);
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CandidateResponse& a, const CandidateResponse& b) { return a.composite > b.composite; });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i) + 1;
  return out;
}

CandidateResponse score_draft(const rewards::RewardContext& ctx, const rewards::RewardWeights& weights,
                              std::string_view post_text, std::string_view draft_text) {
  if (post_text.empty()) throw ArgumentError("post_text must not be empty");
  if (draft_text.empty()) throw ArgumentError("draft_text must not be empty");
  if (text::codepoint_length(draft_text) > policy::kCharLimit) {
    throw ArgumentError("draft exceeds " + std::to_string(policy::kCharLimit) + " characters");
  }
  weights.validate();
  CandidateResponse c;
  c.text = std::string(draft_text);
  c.scores = rewards::score_all(ctx, post_text, draft_text);
  c.composite = rewards::composite_reward(weights, c.scores);
  return c;
}

nlohmann::json to_json(const CandidateResponse& c) {
  return {{"text", c.text}, {"scores", rewards::to_json(c.scores)}, {"composite", c.composite}, {"rank", c.rank}};
}

void ServiceConfig::validate() const {
  if (max_candidates < 1) throw ArgumentError("max_candidates must be at least 1");
  if (port < 0 || port > 65535) throw ArgumentError("port out of range");
  if (bind_address.empty()) throw ArgumentError("bind_address must not be empty");
  if (misinfo_gate && !misinfo_checkpoint) throw ArgumentError("misinfo_gate needs misinfo_checkpoint");
  generation.validate();
  weights.validate();
}

ServiceConfig service_config_from(const KeyValueConfig& kv, const std::filesystem::path& base_dir) {
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() ? base_dir / path : path;
  };
  ServiceConfig c;
  if (auto v = kv.get("policy_checkpoint")) c.policy_checkpoint = resolve(*v);
  if (auto v = kv.get("context_dir")) c.context_dir = resolve(*v);
  if (auto v = kv.get("misinfo_checkpoint")) c.misinfo_checkpoint = resolve(*v);
  c.misinfo_gate = kv.get_bool("misinfo_gate", c.misinfo_gate);
  c.bind_address = kv.get_or("bind_address", c.bind_address);
  c.port = static_cast<int>(kv.get_int("port", c.port));
  c.max_candidates = static_cast<int>(kv.get_int("max_candidates", c.max_candidates));
  c.generation.top_p = kv.get_double("top_p", c.generation.top_p);
  c.generation.max_new_tokens = static_cast<int>(kv.get_int("max_new_tokens", c.generation.max_new_tokens));
  c.generation.temperature = kv.get_double("temperature", c.generation.temperature);
  c.weights = rewards::RewardWeights::from_config(kv);
  return c;
}

ServiceConfig load_service_config(const std::filesystem::path& path) {
  const auto kv = KeyValueConfig::load(path);
  return service_config_from(kv, path.parent_path());
}

void apply_env_overrides(ServiceConfig& c) {
  if (const char* v = std::getenv("CC_BIND_ADDRESS"); v && *v) c.bind_address = v;
  if (const char* v = std::getenv("CC_PORT"); v && *v) {
    try {
      c.port = std::stoi(v);
    } catch (const std::exception&) {
      throw ArgumentError(std::string("CC_PORT is not a number: ") + v);
    }
  }
  if (const char* v = std::getenv("CC_POLICY_CHECKPOINT"); v && *v) c.policy_checkpoint = v;
  if (const char* v = std::getenv("CC_CONTEXT_DIR"); v && *v) c.context_dir = v;
  if (const char* v = std::getenv("CC_MISINFO_CHECKPOINT"); v && *v) c.misinfo_checkpoint = std::filesystem::path(v);
}

nlohmann::json to_json(const ServiceConfig& c) {
  return {{"policy_checkpoint", c.policy_checkpoint.string()},
          {"context_dir", c.context_dir.string()},
          {"misinfo_checkpoint", c.misinfo_checkpoint ? nlohmann::json(c.misinfo_checkpoint->string()) : nlohmann::json()},
          {"misinfo_gate", c.misinfo_gate},
          {"bind_address", c.bind_address},
          {"port", c.port},
          {"max_candidates", c.max_candidates},
          {"top_p", c.generation.top_p},
          {"max_new_tokens", c.generation.max_new_tokens},
          {"temperature", c.generation.temperature},
          {"weights", rewards::to_json(c.weights)}};
}

}  // namespace cc::interface
