// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include "policy/policy.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "common/binary_io.hpp"
#include "policy/sampling.hpp"

namespace cc::policy {
namespace {

constexpr std::string_view kMagic = "CCPM";
constexpr std::uint32_t kVersion = 1;

struct Example {
  std::vector<int> prompt;
  std::vector<int> target;  // response tokens followed by <eos>
};

std::vector<int> concat(std::span<const int> a, std::span<const int> b) {
  std::vector<int> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::vector<Example> build_examples(const PolicyModel& policy, std::span<const TextPair> pairs,
                                    std::size_t& skipped) {
  std::vector<Example> out;
  skipped = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    Example ex{policy.prompt_ids(pairs[i].post), policy.tokenizer().encode_strict(pairs[i].response)};
    ex.target.push_back(text::kEos);
    if (ex.prompt.size() + ex.target.size() > static_cast<std::size_t>(policy.context_window()) + 1) {
      std::clog << "warning: pair " << i << " needs " << ex.prompt.size() + ex.target.size() - 1
                << " positions, context window is " << policy.context_window() << "; skipped\n";
      ++skipped;
      continue;
    }
    out.push_back(std::move(ex));
  }
  return out;
}

// Sum of target log-probabilities through the graph.
nn::Var target_logprob(nn::Graph& g, const Transformer& net, std::span<const int> prompt,
                       std::span<const int> target) {
  if (prompt.empty()) throw ArgumentError("prompt must contain at least one token");
  if (target.empty()) throw ArgumentError("empty response sequence");
  const auto full = concat(prompt, target);
  const std::span<const int> input(full.data(), full.size() - 1);
  const nn::Var logp = net.forward(g, input);
  std::vector<std::pair<int, int>> cells;
  cells.reserve(target.size());
  const int p = static_cast<int>(prompt.size());
  for (std::size_t j = 0; j < target.size(); ++j) cells.emplace_back(p - 1 + static_cast<int>(j), target[j]);
  const std::vector<double> ones(cells.size(), 1.0);
  return g.pick_sum(logp, cells, ones);
}

double mean_cross_entropy(const Transformer& net, const std::vector<Example>& examples) {
  double nll = 0.0;
  std::size_t tokens = 0;
  for (const auto& ex : examples) {
    nn::Graph g(&net.parameters());
    nll -= g.scalar(target_logprob(g, net, ex.prompt, ex.target));
    tokens += ex.target.size();
  }
  return tokens ? nll / static_cast<double>(tokens) : 0.0;
}

template <typename Picker>
GenerationResult decode(const PolicyModel& policy, std::string_view post, const GenerationConfig& config,
                        Picker&& pick) {
  config.validate();
  const auto prompt = policy.prompt_ids(post);
  const int window = policy.context_window();
  if (static_cast<int>(prompt.size()) >= window) {
    throw ArgumentError("post needs " + std::to_string(prompt.size()) + " tokens, context window is " +
                        std::to_string(window));
  }
  const auto& tok = policy.tokenizer();
  for (int attempt = 0; attempt <= config.max_resamples; ++attempt) {
    Transformer::Session session(policy.network());
    Eigen::RowVectorXd logp;
    for (int id : prompt) logp = session.feed(id);

    GenerationResult r;
    r.resamples = attempt;
    r.stopped_by = StopReason::max_tokens;
    std::size_t chars = 0;
    bool retry = false;
    while (true) {
      if (static_cast<int>(r.token_ids.size()) >= config.max_new_tokens || session.length() >= window) {
        r.stopped_by = StopReason::max_tokens;
        break;
      }
      const int next = pick(logp);
      if (next == text::kEos) {
        if (r.token_ids.empty()) {
          retry = true;
          break;
        }
        r.token_ids.push_back(next);
        r.token_logprobs.push_back(logp(next));
        r.stopped_by = StopReason::eos;
        break;
      }
      if (chars + tok.piece_length(next) > config.char_limit) {
        r.stopped_by = StopReason::char_limit;
        break;
      }
      r.token_ids.push_back(next);
      r.token_logprobs.push_back(logp(next));
      chars += tok.piece_length(next);
      logp = session.feed(next);
    }
    if (retry) continue;
    r.text = tok.decode(r.token_ids);
    if (r.text.empty()) continue;
    r.total_logprob = std::accumulate(r.token_logprobs.begin(), r.token_logprobs.end(), 0.0);
    return r;
  }
  throw EmptyGenerationError("generation stayed empty after " + std::to_string(config.max_resamples) +
                             " resamples");
}

}  // namespace

void GenerationConfig::validate() const {
  if (!(top_p > 0.0 && top_p <= 1.0)) throw ArgumentError("top_p must lie in (0, 1]");
  if (max_new_tokens < 1) throw ArgumentError("max_new_tokens must be positive");
  if (char_limit < 1) throw ArgumentError("char_limit must be positive");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) throw ArgumentError("temperature must be positive");
  if (max_resamples < 0) throw ArgumentError("max_resamples must be non-negative");
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::eos:
      return "eos";
    case StopReason::max_tokens:
      return "max_tokens";
    case StopReason::char_limit:
      return "char_limit";
  }
  return "unknown";
}

PolicyModel::PolicyModel(text::Tokenizer tokenizer, Transformer network, nlohmann::json provenance)
    : tokenizer_(std::move(tokenizer)), network_(std::move(network)), provenance_(std::move(provenance)) {
  if (static_cast<std::size_t>(network_.dims().vocab_size) != tokenizer_.vocab_size()) {
    throw ArgumentError("network vocabulary does not match tokenizer");
  }
}

PolicyModel PolicyModel::create(text::Tokenizer tokenizer, ModelDims dims, std::uint64_t seed) {
  dims.vocab_size = static_cast<int>(tokenizer.vocab_size());
  Transformer net(dims, seed);
  nlohmann::json prov = {{"init_seed", seed}};
  return PolicyModel(std::move(tokenizer), std::move(net), std::move(prov));
}

std::vector<int> PolicyModel::prompt_ids(std::string_view post) const {
  auto ids = tokenizer_.encode(post);
  ids.push_back(text::kSep);
  return ids;
}

std::string PolicyModel::id() const {
  std::ostringstream ss;
  tokenizer_.write(ss);
  network_.write(ss);
  return io::hex64(io::fnv1a64(ss.str()));
}

void PolicyModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  io::write_header(out, kMagic, kVersion);
  tokenizer_.write(out);
  network_.write(out);
  if (!out) throw IoError("write failed for " + path.string());
  out.close();
  const auto& d = network_.dims();
  io::write_sidecar(path, {{"kind", "policy"},
                           {"format_version", kVersion},
                           {"id", id()},
                           {"vocab_hash", tokenizer_.hash()},
                           {"vocab_size", d.vocab_size},
                           {"dims",
                            {{"context_window", d.context_window},
                             {"d_model", d.d_model},
                             {"n_layers", d.n_layers},
                             {"n_heads", d.n_heads},
                             {"mlp_hidden", d.mlp_hidden}}},
                           {"provenance", provenance_}});
}

PolicyModel PolicyModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const auto version = io::read_header(in, kMagic);
  if (version != kVersion) throw IoError("unsupported policy checkpoint version " + std::to_string(version));
  auto tok = text::Tokenizer::read(in);
  auto net = Transformer::read(in);
  nlohmann::json prov = nlohmann::json::object();
  if (std::filesystem::exists(io::sidecar_path(path))) {
    const auto meta = io::read_sidecar(path);
    if (meta.value("vocab_hash", tok.hash()) != tok.hash()) {
      throw IoError("sidecar vocabulary hash does not match checkpoint " + path.string());
    }
    prov = meta.value("provenance", nlohmann::json::object());
  }
  return PolicyModel(std::move(tok), std::move(net), std::move(prov));
}

WarmStartReport warm_start(PolicyModel& policy, std::span<const TextPair> pairs, const WarmStartConfig& config) {
  if (pairs.empty()) throw ArgumentError("warm start needs at least one pair");
  if (config.epochs < 0 || config.batch_size < 1 || config.learning_rate < 0) {
    throw ArgumentError("invalid warm start configuration");
  }
  WarmStartReport report;
  auto examples = build_examples(policy, pairs, report.skipped);
  if (examples.empty()) throw ValidationError("every pair exceeds the context window");
  report.used = examples.size();

  auto& net = policy.network();
  nn::AdamConfig adam = config.adam;
  adam.learning_rate = config.learning_rate;
  nn::Adam optimizer(net.parameters(), adam);
  nn::Rng rng(config.seed);
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  report.initial_loss = mean_cross_entropy(net, examples);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    double epoch_nll = 0.0;
    std::size_t epoch_tokens = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      std::size_t batch_tokens = 0;
      for (std::size_t k = start; k < end; ++k) batch_tokens += examples[order[k]].target.size();
      auto grads = net.parameters().zero_gradients();
      for (std::size_t k = start; k < end; ++k) {
        const auto& ex = examples[order[k]];
        nn::Graph g(&net.parameters());
        const nn::Var lp = target_logprob(g, net, ex.prompt, ex.target);
        epoch_nll -= g.scalar(lp);
        g.backward(g.scale(lp, -1.0 / static_cast<double>(batch_tokens)), grads);
      }
      epoch_tokens += batch_tokens;
      optimizer.step(net.parameters(), grads);
    }
    report.epoch_loss.push_back(epoch_nll / static_cast<double>(epoch_tokens));
  }
  report.final_loss = mean_cross_entropy(net, examples);
  policy.provenance()["warm_start"] = {{"epochs", config.epochs},
                                       {"batch_size", config.batch_size},
                                       {"learning_rate", config.learning_rate},
                                       {"seed", config.seed},
                                       {"pairs", report.used}};
  return report;
}

WarmStartReport warm_start(PolicyModel& policy, std::span<const corpus::AnnotatedPair> pairs,
                           const WarmStartConfig& config) {
  std::vector<TextPair> texts;
  texts.reserve(pairs.size());
  for (const auto& p : pairs) texts.push_back({p.post.text, p.response.text});
  return warm_start(policy, texts, config);
}

WarmStartReport train_reference(PolicyModel& model, std::span<const std::string> texts, const WarmStartConfig& config) {
  std::vector<TextPair> pairs;
  pairs.reserve(texts.size());
  for (const auto& t : texts) pairs.push_back({"", t});
  auto report = warm_start(model, pairs, config);
  model.provenance()["role"] = "reference";
  return report;
}

double cross_entropy(const PolicyModel& policy, std::span<const TextPair> pairs) {
  std::size_t skipped = 0;
  return mean_cross_entropy(policy.network(), build_examples(policy, pairs, skipped));
}

GenerationResult generate(const PolicyModel& policy, std::string_view post, const GenerationConfig& config) {
  nn::Rng rng(config.seed);
  std::vector<double> probs(static_cast<std::size_t>(policy.network().dims().vocab_size));
  return decode(policy, post, config, [&](const Eigen::RowVectorXd& logp) {
    if (config.temperature == 1.0) {
      for (Eigen::Index i = 0; i < logp.size(); ++i) probs[static_cast<std::size_t>(i)] = std::exp(logp(i));
    } else {
      const Eigen::RowVectorXd scaled = logp / config.temperature;
      const double mx = scaled.maxCoeff();
      double total = 0.0;
      for (Eigen::Index i = 0; i < scaled.size(); ++i) {
        probs[static_cast<std::size_t>(i)] = std::exp(scaled(i) - mx);
        total += probs[static_cast<std::size_t>(i)];
      }
      for (auto& p : probs) p /= total;
    }
    return nucleus_sample(probs, config.top_p, rng);
  });
}

GenerationResult greedy_decode(const PolicyModel& policy, std::string_view post, const GenerationConfig& config) {
  auto cfg = config;
  cfg.max_resamples = 0;
  return decode(policy, post, cfg, [](const Eigen::RowVectorXd& logp) {
    return argmax(std::span<const double>(logp.data(), static_cast<std::size_t>(logp.size())));
  });
}

double sequence_logprob(const PolicyModel& policy, std::string_view post, std::string_view response) {
  auto ids = policy.tokenizer().encode_strict(response);
  ids.push_back(text::kEos);
  const auto lps = token_logprobs(policy, policy.prompt_ids(post), ids);
  return std::accumulate(lps.begin(), lps.end(), 0.0);
}

std::vector<double> token_logprobs(const PolicyModel& policy, std::span<const int> prompt,
                                   std::span<const int> response_ids) {
  if (prompt.empty() || response_ids.empty()) throw ArgumentError("empty prompt or response");
  nn::Graph g(&policy.network().parameters());
  const auto full = concat(prompt, response_ids);
  const nn::Var logp = policy.network().forward(g, std::span<const int>(full.data(), full.size() - 1));
  const auto& L = g.value(logp);
  std::vector<double> out;
  out.reserve(response_ids.size());
  const auto p = static_cast<Eigen::Index>(prompt.size());
  for (std::size_t j = 0; j < response_ids.size(); ++j) {
    out.push_back(L(p - 1 + static_cast<Eigen::Index>(j), response_ids[j]));
  }
  return out;
}

nn::Var sequence_logprob(nn::Graph& g, const PolicyModel& policy, std::span<const int> prompt,
                         std::span<const int> response_ids) {
  return target_logprob(g, policy.network(), prompt, response_ids);
}

nlohmann::json to_json(const GenerationResult& r) {
  return {{"text", r.text},
          {"token_ids", r.token_ids},
          {"token_logprobs", r.token_logprobs},
          {"total_logprob", r.total_logprob},
          {"stopped_by", to_string(r.stopped_by)},
          {"resamples", r.resamples}};
}

}  // namespace cc::policy
