// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "policy/policy.hpp"
#include "rewards/rewards.hpp"

namespace cc::interface {

struct CandidateResponse {
  std::string text;
  rewards::RewardVector scores;
  double composite = 0.0;
  int rank = 1;
};

// Samples n responses with seeds derived from `seed`, scores each, and ranks
// them by composite reward (highest first; ties keep sampling order).
std::vector<CandidateResponse> generate_candidates(const policy::PolicyModel& policy,
                                                   const rewards::RewardContext& ctx,
                                                   const rewards::RewardWeights& weights, std::string_view post_text,
                                                   int n, std::uint64_t seed,
                                                   const policy::GenerationConfig& generation = {},
                                                   int max_candidates = 8);

// Scores a human-written draft; drafts longer than 280 code points are rejected.
CandidateResponse score_draft(const rewards::RewardContext& ctx, const rewards::RewardWeights& weights,
                              std::string_view post_text, std::string_view draft_text);

nlohmann::json to_json(const CandidateResponse& c);

struct ServiceConfig {
  std::filesystem::path policy_checkpoint;
  std::filesystem::path context_dir;
  std::optional<std::filesystem::path> misinfo_checkpoint;
  bool misinfo_gate = false;
  std::string bind_address = "127.0.0.1";
  int port = 8080;
  int max_candidates = 8;
  policy::GenerationConfig generation;
  rewards::RewardWeights weights;

  void validate() const;
};

// Keys: policy_checkpoint, context_dir, misinfo_checkpoint, misinfo_gate,
// bind_address, port, max_candidates, top_p, max_new_tokens, temperature,
// alpha, beta, gamma, theta, lambda. Relative paths resolve against the
// config file's directory.
ServiceConfig load_service_config(const std::filesystem::path& path);
ServiceConfig service_config_from(const KeyValueConfig& kv, const std::filesystem::path& base_dir);
// CC_BIND_ADDRESS, CC_PORT, CC_POLICY_CHECKPOINT, CC_CONTEXT_DIR, CC_MISINFO_CHECKPOINT.
void apply_env_overrides(ServiceConfig& config);
nlohmann::json to_json(const ServiceConfig& config);

}  // namespace cc::interface
