// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "common/error.hpp"
#include "corpus/corpus.hpp"
#include "nn/adam.hpp"
#include "nn/graph.hpp"
#include "policy/transformer.hpp"
#include "text/tokenizer.hpp"

namespace cc::policy {

inline constexpr std::size_t kCharLimit = 280;

struct GenerationConfig {
  double top_p = 0.9;
  int max_new_tokens = 64;
  std::size_t char_limit = kCharLimit;
  double temperature = 1.0;
  std::uint64_t seed = 0;
  int max_resamples = 5;

  void validate() const;
};

enum class StopReason { eos, max_tokens, char_limit };
const char* to_string(StopReason r);

struct GenerationResult {
  std::string text;
  // Response tokens; ends with kEos when stopped_by == eos.
  std::vector<int> token_ids;
  // Log-probabilities under the policy itself (temperature 1, no nucleus
  // truncation), so they sum to log p(response | post).
  std::vector<double> token_logprobs;
  double total_logprob = 0.0;
  StopReason stopped_by = StopReason::eos;
  int resamples = 0;
};

// Raised when every sampling attempt produced an empty response.
class EmptyGenerationError : public StateError {
 public:
  explicit EmptyGenerationError(const std::string& what) : StateError(what) {}
};

// A decoder language model plus its tokenizer. Conditioned on a post, the
// token layout is [post tokens, <sep>, response tokens, <eos>]; an empty post
// turns it into an unconditional model over responses.
class PolicyModel {
 public:
  PolicyModel(text::Tokenizer tokenizer, Transformer network, nlohmann::json provenance = nlohmann::json::object());

  // Fresh randomly initialised model; dims.vocab_size is taken from the tokenizer.
  static PolicyModel create(text::Tokenizer tokenizer, ModelDims dims, std::uint64_t seed);

  const text::Tokenizer& tokenizer() const { return tokenizer_; }
  const Transformer& network() const { return network_; }
  Transformer& network() { return network_; }
  int context_window() const { return network_.dims().context_window; }

  nlohmann::json& provenance() { return provenance_; }
  const nlohmann::json& provenance() const { return provenance_; }

  // Lenient encoding of the post followed by <sep>.
  std::vector<int> prompt_ids(std::string_view post) const;

  // Content hash over tokenizer and weights.
  std::string id() const;

  void save(const std::filesystem::path& path) const;
  static PolicyModel load(const std::filesystem::path& path);

 private:
  text::Tokenizer tokenizer_;
  Transformer network_;
  nlohmann::json provenance_;
};

struct WarmStartConfig {
  int epochs = 30;
  int batch_size = 8;
  double learning_rate = 3e-3;
  std::uint64_t seed = 0;
  nn::AdamConfig adam{};
};

struct WarmStartReport {
  // Mean per-token cross-entropy over the usable pairs, measured before the
  // first update and after the last one.
  double initial_loss = 0.0;
  double final_loss = 0.0;
  std::vector<double> epoch_loss;
  std::size_t used = 0;
  std::size_t skipped = 0;
};

struct TextPair {
  std::string post;
  std::string response;
};

// Supervised next-token training on response tokens only; post tokens are
// context and never targets. Pairs that do not fit the context window are
// skipped with a warning.
WarmStartReport warm_start(PolicyModel& policy, std::span<const TextPair> pairs, const WarmStartConfig& config);
WarmStartReport warm_start(PolicyModel& policy, std::span<const corpus::AnnotatedPair> pairs,
                           const WarmStartConfig& config);

// Trains an unconditional model over `texts` (the fluency reference).
WarmStartReport train_reference(PolicyModel& model, std::span<const std::string> texts, const WarmStartConfig& config);

// Mean per-token cross-entropy of responses (including <eos>) given posts.
double cross_entropy(const PolicyModel& policy, std::span<const TextPair> pairs);

// Nucleus-sampled response. Stops at <eos>, max_new_tokens, a full context
// window, or before a token that would push the text past char_limit. An
// immediate <eos> is resampled up to max_resamples times.
GenerationResult generate(const PolicyModel& policy, std::string_view post, const GenerationConfig& config);

// Argmax decoding with the same stopping rules.
GenerationResult greedy_decode(const PolicyModel& policy, std::string_view post,
                               const GenerationConfig& config = GenerationConfig{});

// log p(response, <eos> | post). Throws ValidationError if the response holds
// characters outside the vocabulary.
double sequence_logprob(const PolicyModel& policy, std::string_view post, std::string_view response);

// Per-token log-probabilities of an explicit token sequence (no <eos> added).
std::vector<double> token_logprobs(const PolicyModel& policy, std::span<const int> prompt,
                                   std::span<const int> response_ids);

// Differentiable sum of the response token log-probabilities.
nn::Var sequence_logprob(nn::Graph& g, const PolicyModel& policy, std::span<const int> prompt,
                         std::span<const int> response_ids);

nlohmann::json to_json(const GenerationResult& r);

}  // namespace cc::policy
