// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include "evaluation/evaluation.hpp"

#include <cmath>
#include <cstdio>

#include "common/error.hpp"

namespace cc::evaluation {

PolicyGenerator::PolicyGenerator(std::shared_ptr<const policy::PolicyModel> policy, policy::GenerationConfig config,
                                 std::string id)
    : policy_(std::move(policy)), config_(config), id_(std::move(id)) {
  if (!policy_) throw ArgumentError("policy generator needs a model");
  config_.validate();
  if (id_.empty()) id_ = "policy:" + policy_->id();
}

std::string PolicyGenerator::generate(std::string_view post, std::uint64_t seed) const {
  auto cfg = config_;
  cfg.seed = seed;
  return policy::generate(*policy_, post, cfg).text;
}

FixedGenerator::FixedGenerator(std::string text, std::string id) : text_(std::move(text)), id_(std::move(id)) {
  if (text_.empty()) throw ArgumentError("fixed response must not be empty");
}

LookupGenerator::LookupGenerator(std::vector<std::pair<std::string, std::string>> table, std::string id)
    : table_(std::move(table)), id_(std::move(id)) {}

std::string LookupGenerator::generate(std::string_view post, std::uint64_t) const {
  for (const auto& [p, r] : table_) {
    if (p == post) return r;
  }
  throw ArgumentError("no reference response for post");
}

namespace {

ExampleScore score_example(const rewards::RewardContext& ctx, std::string post, std::string response) {
  ExampleScore ex;
  ex.post = std::move(post);
  ex.response = std::move(response);
  ex.rewards = rewards::score_all(ctx, ex.post, ex.response);
  const auto lps = ctx.fluency->unit_logprobs(ex.response);
  for (double lp : lps) ex.nll_sum -= lp;
  ex.tokens = lps.size();
  ex.perplexity = std::exp(ex.nll_sum / static_cast<double>(ex.tokens));
  return ex;
}

void summarize(MetricReport& r) {
  r.n_examples = r.examples.size();
  if (r.n_examples == 0) return;
  const double n = static_cast<double>(r.n_examples);
  double total_nll = 0.0;
  std::size_t total_tokens = 0;
  for (const auto& ex : r.examples) {
    r.politeness += ex.rewards.politeness / n;
    r.refutation += ex.rewards.refutation / n;
    r.evidence += ex.rewards.evidence / n;
    r.relevance += ex.rewards.coherence / n;
    total_nll += ex.nll_sum;
    total_tokens += ex.tokens;
  }
  r.perplexity = std::exp(total_nll / static_cast<double>(total_tokens));
}

}  // namespace

MetricReport evaluate_generator(const Generator& generator, std::span<const std::string> posts,
                                const rewards::RewardContext& ctx, std::uint64_t seed_base) {
  if (posts.empty()) throw ArgumentError("evaluation needs at least one post");
  ctx.validate();
  MetricReport r;
  r.generator_id = generator.id();
  for (std::size_t i = 0; i < posts.size(); ++i) {
    std::string response;
    try {
      response = generator.generate(posts[i], seed_base + i);
      if (response.empty()) throw policy::EmptyGenerationError("empty response");
    } catch (const Error&) {
      ++r.n_failed;
      continue;
    }
    r.examples.push_back(score_example(ctx, posts[i], std::move(response)));
  }
  if (r.n_failed * 10 > posts.size()) {
    throw StateError(std::to_string(r.n_failed) + " of " + std::to_string(posts.size()) + " generations failed");
  }
  summarize(r);
  return r;
}

MetricReport evaluate_references(std::span<const std::pair<std::string, std::string>> pairs,
                                 const rewards::RewardContext& ctx, std::string id) {
  if (pairs.empty()) throw ArgumentError("evaluation needs at least one pair");
  ctx.validate();
  MetricReport r;
  r.generator_id = std::move(id);
  for (const auto& [post, response] : pairs) r.examples.push_back(score_example(ctx, post, response));
  summarize(r);
  return r;
}

nlohmann::json to_json(const MetricReport& r, bool include_examples) {
  nlohmann::json j = {{"generator_id", r.generator_id}, {"politeness", r.politeness}, {"refutation", r.refutation},
                      {"evidence", r.evidence},         {"perplexity", r.perplexity}, {"relevance", r.relevance},
                      {"n_examples", r.n_examples},     {"n_failed", r.n_failed}};
  if (include_examples) {
    j["examples"] = nlohmann::json::array();
    for (const auto& ex : r.examples) {
      j["examples"].push_back({{"post", ex.post},
                               {"response", ex.response},
                               {"scores", rewards::to_json(ex.rewards)},
                               {"perplexity", ex.perplexity},
                               {"tokens", ex.tokens}});
    }
  }
  return j;
}

const char* to_string(VariantName v) {
  switch (v) {
    case VariantName::base:
      return "base";
    case VariantName::plus_politeness:
      return "plus_politeness";
    case VariantName::plus_refutation:
      return "plus_refutation";
    case VariantName::plus_evidence:
      return "plus_evidence";
    case VariantName::full:
      break;
  }
  return "full";
}

VariantName parse_variant(std::string_view s) {
  for (auto v : {VariantName::base, VariantName::plus_politeness, VariantName::plus_refutation,
                 VariantName::plus_evidence, VariantName::full}) {
    if (s == to_string(v)) return v;
  }
  throw ArgumentError("unknown ablation variant '" + std::string(s) + "'");
}

AblationVariant make_variant(VariantName name, const rewards::RewardWeights& defaults) {
  defaults.validate();
  AblationVariant v{name, defaults};
  auto& w = v.weights;
  switch (name) {
    case VariantName::base:
      w = {0, 0, 0, 0, 0};
      break;
    case VariantName::plus_politeness:
      w.beta = w.gamma = 0;
      break;
    case VariantName::plus_refutation:
      w.alpha = w.gamma = 0;
      break;
    case VariantName::plus_evidence:
      w.alpha = w.beta = 0;
      break;
    case VariantName::full:
      break;
  }
  return v;
}

std::vector<AblationVariant> default_variants(const rewards::RewardWeights& defaults) {
  std::vector<AblationVariant> out;
  for (auto v : {VariantName::base, VariantName::plus_politeness, VariantName::plus_refutation,
                 VariantName::plus_evidence, VariantName::full}) {
    out.push_back(make_variant(v, defaults));
  }
  return out;
}

std::vector<AblationRow> run_ablation(const policy::PolicyModel& warm_start, std::span<const std::string> train_posts,
                                      std::span<const std::string> eval_posts, const rewards::RewardContext& ctx,
                                      std::span<const AblationVariant> variants, const AblationConfig& config) {
  bool has_base = false, has_full = false;
  for (const auto& v : variants) {
    has_base |= v.name == VariantName::base;
    has_full |= v.name == VariantName::full;
  }
  if (!has_base || !has_full) throw ArgumentError("an ablation needs the base and full variants");

  std::vector<AblationRow> rows;
  for (const auto& variant : variants) {
    AblationRow row;
    row.variant = variant;
    try {
      auto model = std::make_shared<policy::PolicyModel>(warm_start);
      if (variant.name != VariantName::base) {
        const auto log = rl::train(*model, train_posts, ctx, variant.weights, config.rl);
        row.rl_steps = log.steps.size();
      }
      PolicyGenerator gen(model, config.eval_generation, to_string(variant.name));
      row.report = evaluate_generator(gen, eval_posts, ctx, config.eval_seed);
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_table(std::span<const AblationRow> rows) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %8s %8s %8s %8s %8s\n", "variant", "polite", "refut", "evid", "perpl",
                "rele");
  out += line;
  for (const auto& row : rows) {
    if (row.report) {
      const auto& r = *row.report;
      std::snprintf(line, sizeof line, "%-16s %8.3f %8.3f %8.3f %8.3f %8.3f\n", to_string(row.variant.name),
                    r.politeness, r.refutation, r.evidence, r.perplexity, r.relevance);
    } else {
      std::snprintf(line, sizeof line, "%-16s failed: %s\n", to_string(row.variant.name),
                    row.error.value_or("unknown error").c_str());
    }
    out += line;
  }
  return out;
}

nlohmann::json to_json(const AblationRow& row) {
  nlohmann::json j = {{"variant", to_string(row.variant.name)},
                      {"weights", rewards::to_json(row.variant.weights)},
                      {"rl_steps", row.rl_steps}};
  if (row.report) j["report"] = to_json(*row.report);
  if (row.error) j["error"] = *row.error;
  return j;
}

}  // namespace cc::evaluation
