// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include "countercorrect/countercorrect.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <set>
#include <string>

#include <json.hpp>

#include "classifiers/cascade.hpp"
#include "classifiers/classifier.hpp"
#include "common/binary_io.hpp"
#include "common/error.hpp"
#include "common/kv_config.hpp"
#include "corpus/corpus.hpp"
#include "evaluation/evaluation.hpp"
#include "evaluation/pairwise.hpp"
#include "interface/candidates.hpp"
#include "policy/policy.hpp"
#include "rewards/rewards.hpp"
#include "rl/trainer.hpp"

struct cc_corpus {
  std::vector<cc::corpus::AnnotatedPair> pairs;
};

struct cc_classifier {
  std::shared_ptr<const cc::classifiers::ClassifierModel> model;
};

struct cc_policy {
  std::shared_ptr<cc::policy::PolicyModel> model;
};

struct cc_reward_context {
  cc::rewards::RewardContext ctx;
};

namespace {

using nlohmann::json;

thread_local std::string g_last_error;

cc_status status_for(cc::ErrorKind kind) {
  switch (kind) {
    case cc::ErrorKind::io:
      return CC_ERR_IO;
    case cc::ErrorKind::validation:
      return CC_ERR_VALIDATION;
    case cc::ErrorKind::argument:
      return CC_ERR_ARGUMENT;
    case cc::ErrorKind::state:
      return CC_ERR_STATE;
    case cc::ErrorKind::internal:
      break;
  }
  return CC_ERR_INTERNAL;
}

template <typename Fn>
cc_status guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return CC_OK;
  } catch (const cc::Error& e) {
    g_last_error = e.what();
    return status_for(e.kind());
  } catch (const json::exception& e) {
    g_last_error = e.what();
    return CC_ERR_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CC_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return CC_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw cc::ArgumentError(std::string(what) + " must not be NULL");
}

char* dup(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

void emit(char** out, const json& j) {
  require(out, "output pointer");
  *out = dup(j.dump());
}

json parse_config(const char* text) {
  if (text == nullptr || *text == '\0') return json::object();
  auto j = json::parse(text);
  if (!j.is_object()) throw cc::ArgumentError("configuration must be a JSON object");
  return j;
}

cc::rewards::RewardWeights weights_from(const json& j) {
  cc::rewards::RewardWeights w;
  if (j.is_null()) return w;
  w.alpha = j.value("alpha", w.alpha);
  w.beta = j.value("beta", w.beta);
  w.gamma = j.value("gamma", w.gamma);
  w.theta = j.value("theta", w.theta);
  w.lambda = j.value("lambda", w.lambda);
  w.validate();
  return w;
}

cc::policy::GenerationConfig generation_from(const json& j) {
  cc::policy::GenerationConfig g;
  g.top_p = j.value("top_p", g.top_p);
  g.max_new_tokens = j.value("max_new_tokens", g.max_new_tokens);
  g.temperature = j.value("temperature", g.temperature);
  g.seed = j.value("seed", g.seed);
  g.validate();
  return g;
}

cc::rl::RLConfig rl_from(const json& j) {
  cc::rl::RLConfig c;
  c.batch_size = j.value("batch_size", c.batch_size);
  c.total_steps = j.value("total_steps", c.total_steps);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.seed = j.value("seed", c.seed);
  c.samples_per_post = j.value("samples_per_post", c.samples_per_post);
  c.top_p = j.value("top_p", c.top_p);
  c.max_new_tokens = j.value("max_new_tokens", c.max_new_tokens);
  c.temperature = j.value("temperature", c.temperature);
  c.checkpoint_interval = j.value("checkpoint_interval", c.checkpoint_interval);
  c.keep_best = j.value("keep_best", c.keep_best);
  c.use_baseline = j.value("use_baseline", c.use_baseline);
  c.baseline_decay = j.value("baseline_decay", c.baseline_decay);
  c.max_retries = j.value("max_retries", c.max_retries);
  c.validate();
  return c;
}

cc::classifiers::ClassifierTrainConfig classifier_config_from(const json& j) {
  cc::classifiers::ClassifierTrainConfig c;
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.seed = j.value("seed", c.seed);
  c.folds = j.value("folds", c.folds);
  c.embed_dim = j.value("embed_dim", c.embed_dim);
  c.hidden = j.value("hidden", c.hidden);
  c.vocab_size = j.value("vocab_size", c.vocab_size);
  c.validate();
  return c;
}

std::vector<cc::classifiers::Example> training_examples(const char* path, cc::classifiers::Task task) {
  require(path, "data path");
  const auto content = cc::io::read_text_file(path);
  const auto first = content.find_first_not_of(" \t\r\n");
  if (first != std::string::npos) {
    auto end = content.find('\n', first);
    if (end == std::string::npos) end = content.size();
    const auto head = json::parse(content.substr(first, end - first), nullptr, false);
    if (head.is_object() && head.contains("response_text")) {
      const auto pairs = cc::corpus::parse_pairs(content);
      return cc::classifiers::examples_from_pairs(pairs, task);
    }
  }
  return cc::classifiers::load_examples(path, task);
}

std::vector<std::string> unique_posts(const cc_corpus* c) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& p : c->pairs) {
    if (seen.insert(p.post.text).second) out.push_back(p.post.text);
  }
  return out;
}

cc::policy::WarmStartConfig warm_config_from(const json& j) {
  cc::policy::WarmStartConfig w;
  w.epochs = j.value("epochs", w.epochs);
  w.batch_size = j.value("batch_size", w.batch_size);
  w.learning_rate = j.value("learning_rate", w.learning_rate);
  w.seed = j.value("seed", w.seed);
  return w;
}

cc::policy::ModelDims dims_from(const json& j) {
  cc::policy::ModelDims d;
  d.context_window = j.value("context_window", d.context_window);
  d.d_model = j.value("d_model", d.d_model);
  d.n_layers = j.value("n_layers", d.n_layers);
  d.n_heads = j.value("n_heads", d.n_heads);
  d.mlp_hidden = j.value("mlp_hidden", d.mlp_hidden);
  return d;
}

json warm_report(const cc::policy::WarmStartReport& r) {
  return {{"initial_loss", r.initial_loss},
          {"final_loss", r.final_loss},
          {"epoch_loss", r.epoch_loss},
          {"used", r.used},
          {"skipped", r.skipped}};
}

json policy_info(const cc::policy::PolicyModel& m) {
  const auto& d = m.network().dims();
  return {{"id", m.id()},
          {"vocab_size", d.vocab_size},
          {"vocab_hash", m.tokenizer().hash()},
          {"context_window", d.context_window},
          {"d_model", d.d_model},
          {"n_layers", d.n_layers},
          {"n_heads", d.n_heads},
          {"mlp_hidden", d.mlp_hidden},
          {"parameters", m.network().parameters().scalar_count()},
          {"provenance", m.provenance()}};
}

cc::policy::PolicyModel fresh_policy(const std::vector<std::string>& texts, const json& cfg) {
  const auto vocab = cfg.value("vocab_size", std::size_t{512});
  auto tok = cc::text::Tokenizer::train(texts, vocab);
  return cc::policy::PolicyModel::create(std::move(tok), dims_from(cfg), cfg.value("seed", std::uint64_t{0}));
}

}  // namespace

extern "C" {

const char* cc_last_error(void) { return g_last_error.c_str(); }

const char* cc_status_name(cc_status status) {
  switch (status) {
    case CC_OK:
      return "ok";
    case CC_ERR_IO:
      return "io_error";
    case CC_ERR_VALIDATION:
      return "validation_error";
    case CC_ERR_ARGUMENT:
      return "argument_error";
    case CC_ERR_STATE:
      return "state_error";
    case CC_ERR_INTERNAL:
      break;
  }
  return "internal_error";
}

const char* cc_version(void) { return "0.1.0"; }

void cc_string_free(char* s) { std::free(s); }

cc_status cc_config_load(const char* path, char** json_out) {
  return guard([&] {
    require(path, "path");
    const auto kv = cc::KeyValueConfig::load(path);
    emit(json_out, kv.values());
  });
}

cc_status cc_corpus_load(const char* path, cc_corpus** out) {
  return guard([&] {
    require(path, "path");
    require(out, "output pointer");
    auto c = std::make_unique<cc_corpus>();
    c->pairs = cc::corpus::load_pairs(path);
    *out = c.release();
  });
}

cc_status cc_corpus_parse(const char* jsonl, cc_corpus** out) {
  return guard([&] {
    require(jsonl, "jsonl");
    require(out, "output pointer");
    auto c = std::make_unique<cc_corpus>();
    c->pairs = cc::corpus::parse_pairs(jsonl);
    *out = c.release();
  });
}

void cc_corpus_free(cc_corpus* corpus) { delete corpus; }

cc_status cc_corpus_size(const cc_corpus* corpus, size_t* out) {
  return guard([&] {
    require(corpus, "corpus");
    require(out, "output pointer");
    *out = corpus->pairs.size();
  });
}

cc_status cc_corpus_save(const cc_corpus* corpus, const char* path) {
  return guard([&] {
    require(corpus, "corpus");
    require(path, "path");
    cc::corpus::save_pairs(path, corpus->pairs);
  });
}

cc_status cc_corpus_to_jsonl(const cc_corpus* corpus, char** out) {
  return guard([&] {
    require(corpus, "corpus");
    require(out, "output pointer");
    std::string s;
    for (const auto& p : corpus->pairs) s += cc::corpus::to_json(p).dump() + "\n";
    *out = dup(s);
  });
}

cc_status cc_corpus_stats(const cc_corpus* corpus, char** json_out) {
  return guard([&] {
    require(corpus, "corpus");
    emit(json_out, cc::corpus::to_json(cc::corpus::compute_stats(corpus->pairs)));
  });
}

cc_status cc_corpus_clean(const cc_corpus* corpus, cc_corpus** out) {
  return guard([&] {
    require(corpus, "corpus");
    require(out, "output pointer");
    auto c = std::make_unique<cc_corpus>();
    c->pairs = cc::corpus::filter_clean(corpus->pairs);
    *out = c.release();
  });
}

cc_status cc_corpus_filter_keywords(const cc_corpus* corpus, const char* keywords_json, cc_corpus** out) {
  return guard([&] {
    require(corpus, "corpus");
    require(out, "output pointer");
    std::vector<std::string> keywords = cc::corpus::default_keywords();
    if (keywords_json != nullptr) keywords = json::parse(keywords_json).get<std::vector<std::string>>();
    std::vector<cc::corpus::MisinfoPost> posts;
    for (const auto& p : corpus->pairs) posts.push_back(p.post);
    const auto kept = cc::corpus::keyword_filter(posts, keywords);
    auto c = std::make_unique<cc_corpus>();
    std::size_t k = 0;
    for (const auto& p : corpus->pairs) {
      if (k < kept.size() && kept[k].id == p.post.id && kept[k].text == p.post.text) {
        auto pair = p;
        pair.post = kept[k++];
        c->pairs.push_back(std::move(pair));
      }
    }
    *out = c.release();
  });
}

cc_status cc_corpus_split(const cc_corpus* corpus, double train, double validation, double test, uint64_t seed,
                          cc_corpus** train_out, cc_corpus** validation_out, cc_corpus** test_out) {
  return guard([&] {
    require(corpus, "corpus");
    require(train_out, "train output");
    require(validation_out, "validation output");
    require(test_out, "test output");
    auto s = cc::corpus::split(corpus->pairs, {train, validation, test}, seed);
    auto a = std::make_unique<cc_corpus>(cc_corpus{std::move(s.train)});
    auto b = std::make_unique<cc_corpus>(cc_corpus{std::move(s.validation)});
    auto c = std::make_unique<cc_corpus>(cc_corpus{std::move(s.test)});
    *train_out = a.release();
    *validation_out = b.release();
    *test_out = c.release();
  });
}

cc_status cc_classifier_train(const char* data_path, const char* task, const char* config_json,
                              cc_classifier** out) {
  return guard([&] {
    require(task, "task");
    require(out, "output pointer");
    const auto t = cc::classifiers::parse_task(task);
    const auto cfg = classifier_config_from(parse_config(config_json));
    const auto examples = training_examples(data_path, t);
    auto m = std::make_shared<const cc::classifiers::ClassifierModel>(cc::classifiers::train_classifier(examples, t, cfg));
    *out = new cc_classifier{std::move(m)};
  });
}

cc_status cc_classifier_load(const char* path, cc_classifier** out) {
  return guard([&] {
    require(path, "path");
    require(out, "output pointer");
    auto m = std::make_shared<const cc::classifiers::ClassifierModel>(cc::classifiers::ClassifierModel::load(path));
    *out = new cc_classifier{std::move(m)};
  });
}

cc_status cc_classifier_save(const cc_classifier* model, const char* path) {
  return guard([&] {
    require(model, "model");
    require(path, "path");
    model->model->save(path);
  });
}

void cc_classifier_free(cc_classifier* model) { delete model; }

cc_status cc_classifier_info(const cc_classifier* model, char** json_out) {
  return guard([&] {
    require(model, "model");
    const auto& m = *model->model;
    emit(json_out, {{"task", cc::classifiers::to_string(m.task())},
                    {"arity", cc::classifiers::to_string(m.arity())},
                    {"classes", cc::classifiers::class_count(m.task())},
                    {"seed", m.seed()},
                    {"vocab_hash", m.tokenizer().hash()},
                    {"vocab_size", m.tokenizer().vocab_size()}});
  });
}

cc_status cc_classifier_score(const cc_classifier* model, const char* post, const char* response, double* out) {
  return guard([&] {
    require(model, "model");
    require(response, "response");
    require(out, "output pointer");
    const auto p = post ? std::optional<std::string_view>(post) : std::nullopt;
    *out = cc::classifiers::score(*model->model, p, response);
  });
}

cc_status cc_classifier_evaluate(const cc_classifier* model, const char* data_path, char** json_out) {
  return guard([&] {
    require(model, "model");
    const auto examples = training_examples(data_path, model->model->task());
    auto j = cc::classifiers::to_json(cc::classifiers::evaluate_classifier(*model->model, examples));
    j["accuracy"] = cc::classifiers::accuracy(*model->model, examples);
    j["n"] = examples.size();
    emit(json_out, j);
  });
}

cc_status cc_classifier_cross_validate(const char* data_path, const char* task, const char* config_json, int folds,
                                       char** json_out) {
  return guard([&] {
    require(task, "task");
    const auto t = cc::classifiers::parse_task(task);
    auto cfg = classifier_config_from(parse_config(config_json));
    cfg.folds = folds;
    const auto cv = cc::classifiers::cross_validate(training_examples(data_path, t), t, cfg);
    json j = {{"mean", cc::classifiers::to_json(cv.mean)}, {"folds", json::array()}};
    for (const auto& f : cv.folds) j["folds"].push_back(cc::classifiers::to_json(f));
    emit(json_out, j);
  });
}

cc_status cc_cascade_identify(const cc_classifier* misinfo, const cc_classifier* disbelief, const char* threads_path,
                              double threshold, char** jsonl_out) {
  return guard([&] {
    require(misinfo, "misinfo model");
    require(disbelief, "disbelief model");
    require(threads_path, "threads path");
    require(jsonl_out, "output pointer");
    const auto threads = cc::classifiers::load_threads(threads_path);
    std::string s;
    for (const auto& c : cc::classifiers::cascade_identify_counters(*misinfo->model, *disbelief->model, threads,
                                                                    threshold)) {
      s += cc::classifiers::to_json(c).dump() + "\n";
    }
    *jsonl_out = dup(s);
  });
}

cc_status cc_policy_warm_start(const cc_corpus* pairs, const char* config_json, cc_policy** out,
                               char** report_json) {
  return guard([&] {
    require(pairs, "pairs");
    require(out, "output pointer");
    const auto cfg = parse_config(config_json);
    std::vector<std::string> texts;
    for (const auto& p : pairs->pairs) {
      texts.push_back(p.post.text);
      texts.push_back(p.response.text);
    }
    auto model = std::make_shared<cc::policy::PolicyModel>(fresh_policy(texts, cfg));
    const auto report = cc::policy::warm_start(*model, pairs->pairs, warm_config_from(cfg));
    model->provenance() = {{"stage", "warm_start"}, {"pairs", report.used}, {"config", cfg}};
    if (report_json != nullptr) emit(report_json, warm_report(report));
    *out = new cc_policy{std::move(model)};
  });
}

cc_status cc_policy_continue_warm_start(cc_policy* policy, const cc_corpus* pairs, const char* config_json,
                                        char** report_json) {
  return guard([&] {
    require(policy, "policy");
    require(pairs, "pairs");
    const auto cfg = parse_config(config_json);
    const auto report = cc::policy::warm_start(*policy->model, pairs->pairs, warm_config_from(cfg));
    if (report_json != nullptr) emit(report_json, warm_report(report));
  });
}

cc_status cc_policy_train_reference(const cc_corpus* pairs, const char* config_json, cc_policy** out,
                                    char** report_json) {
  return guard([&] {
    require(pairs, "pairs");
    require(out, "output pointer");
    const auto cfg = parse_config(config_json);
    std::vector<std::string> texts;
    for (const auto& p : pairs->pairs) texts.push_back(p.response.text);
    auto model = std::make_shared<cc::policy::PolicyModel>(fresh_policy(texts, cfg));
    const auto report = cc::policy::train_reference(*model, texts, warm_config_from(cfg));
    model->provenance() = {{"stage", "reference"}, {"texts", report.used}, {"config", cfg}};
    if (report_json != nullptr) emit(report_json, warm_report(report));
    *out = new cc_policy{std::move(model)};
  });
}

cc_status cc_policy_load(const char* path, cc_policy** out) {
  return guard([&] {
    require(path, "path");
    require(out, "output pointer");
    *out = new cc_policy{std::make_shared<cc::policy::PolicyModel>(cc::policy::PolicyModel::load(path))};
  });
}

cc_status cc_policy_save(const cc_policy* policy, const char* path) {
  return guard([&] {
    require(policy, "policy");
    require(path, "path");
    policy->model->save(path);
  });
}

void cc_policy_free(cc_policy* policy) { delete policy; }

cc_status cc_policy_info(const cc_policy* policy, char** json_out) {
  return guard([&] {
    require(policy, "policy");
    emit(json_out, policy_info(*policy->model));
  });
}

cc_status cc_policy_generate(const cc_policy* policy, const char* post, const char* config_json, char** result_json) {
  return guard([&] {
    require(policy, "policy");
    require(post, "post");
    const auto cfg = generation_from(parse_config(config_json));
    emit(result_json, cc::policy::to_json(cc::policy::generate(*policy->model, post, cfg)));
  });
}

cc_status cc_policy_sequence_logprob(const cc_policy* policy, const char* post, const char* response, double* out) {
  return guard([&] {
    require(policy, "policy");
    require(post, "post");
    require(response, "response");
    require(out, "output pointer");
    *out = cc::policy::sequence_logprob(*policy->model, post, response);
  });
}

cc_status cc_reward_context_load(const char* dir, cc_reward_context** out) {
  return guard([&] {
    require(dir, "dir");
    require(out, "output pointer");
    *out = new cc_reward_context{cc::rewards::load_context(dir)};
  });
}

void cc_reward_context_free(cc_reward_context* ctx) { delete ctx; }

cc_status cc_weights_from_config(const char* path, char** weights_json) {
  return guard([&] {
    require(path, "path");
    emit(weights_json, cc::rewards::to_json(cc::rewards::RewardWeights::from_config(cc::KeyValueConfig::load(path))));
  });
}

cc_status cc_composite_reward(const char* weights_json, const char* vector_json, double* out) {
  return guard([&] {
    require(vector_json, "vector");
    require(out, "output pointer");
    const auto w = weights_from(parse_config(weights_json));
    const auto j = parse_config(vector_json);
    cc::rewards::RewardVector v;
    v.politeness = j.at("politeness").get<double>();
    v.refutation = j.at("refutation").get<double>();
    v.evidence = j.at("evidence").get<double>();
    v.fluency = j.at("fluency").get<double>();
    v.coherence = j.at("coherence").get<double>();
    if (!v.in_bounds()) throw cc::ArgumentError("reward vector out of bounds");
    *out = cc::rewards::composite_reward(w, v);
  });
}

cc_status cc_reward_score(const cc_reward_context* ctx, const char* weights_json, const char* post,
                          const char* response, char** json_out) {
  return guard([&] {
    require(ctx, "context");
    require(post, "post");
    require(response, "response");
    const auto w = weights_from(parse_config(weights_json));
    const auto v = cc::rewards::score_all(ctx->ctx, post, response);
    emit(json_out, {{"scores", cc::rewards::to_json(v)},
                    {"composite", cc::rewards::composite_reward(w, v)},
                    {"perplexity", cc::rewards::perplexity(ctx->ctx, response)}});
  });
}

cc_status cc_rl_train(cc_policy* policy, const cc_corpus* posts, const cc_reward_context* ctx,
                      const char* weights_json, const char* config_json, const char* log_path,
                      const char* checkpoint_prefix, char** summary_json) {
  return guard([&] {
    require(policy, "policy");
    require(posts, "posts");
    require(ctx, "context");
    const auto w = weights_from(parse_config(weights_json));
    const auto cfg = rl_from(parse_config(config_json));
    const auto prompts = unique_posts(posts);

    std::ofstream log_file;
    if (log_path != nullptr) {
      log_file.open(log_path, std::ios::trunc);
      if (!log_file) throw cc::IoError(std::string("cannot write ") + log_path);
    }
    cc::rl::StepCallback on_step;
    if (log_file.is_open()) {
      on_step = [&](const cc::rl::StepRecord& r) { log_file << cc::rl::to_json(r).dump() << "\n" << std::flush; };
    }
    cc::rl::CheckpointFn checkpoint;
    if (checkpoint_prefix != nullptr) {
      const std::string prefix = checkpoint_prefix;
      checkpoint = [prefix](const cc::policy::PolicyModel& m, long long step) {
        const auto path = prefix + "-" + std::to_string(step) + ".ccp";
        m.save(path);
        return path;
      };
    }
    const auto log = cc::rl::train(*policy->model, prompts, ctx->ctx, w, cfg, checkpoint, on_step);
    policy->model->provenance()["rl"] = {{"steps", log.steps.size()},
                                         {"weights", cc::rewards::to_json(w)},
                                         {"learning_rate", cfg.learning_rate},
                                         {"batch_size", cfg.batch_size},
                                         {"seed", cfg.seed}};
    if (summary_json != nullptr) {
      json s = {{"steps", log.steps.size()}, {"checkpoints", log.checkpoints}, {"policy_id", policy->model->id()}};
      if (!log.steps.empty()) {
        s["first_composite"] = log.steps.front().composite_mean;
        s["final_composite"] = log.steps.back().composite_mean;
      }
      if (log.best_step) s["best_step"] = *log.best_step;
      emit(summary_json, s);
    }
  });
}

cc_status cc_evaluate_policy(const cc_policy* policy, const cc_corpus* test, const cc_reward_context* ctx,
                             const char* config_json, char** report_json) {
  return guard([&] {
    require(policy, "policy");
    require(test, "test corpus");
    require(ctx, "context");
    const auto cfg = parse_config(config_json);
    const auto gen_cfg = generation_from(cfg);
    cc::evaluation::PolicyGenerator gen(policy->model, gen_cfg);
    const auto report = cc::evaluation::evaluate_generator(gen, unique_posts(test), ctx->ctx, gen_cfg.seed);
    emit(report_json, cc::evaluation::to_json(report, cfg.value("examples", false)));
  });
}

cc_status cc_evaluate_references(const cc_corpus* test, const cc_reward_context* ctx, char** report_json) {
  return guard([&] {
    require(test, "test corpus");
    require(ctx, "context");
    std::vector<std::pair<std::string, std::string>> table;
    for (const auto& p : test->pairs) table.emplace_back(p.post.text, p.response.text);
    emit(report_json, cc::evaluation::to_json(cc::evaluation::evaluate_references(table, ctx->ctx)));
  });
}

cc_status cc_run_ablation(const cc_policy* warm_start, const cc_corpus* train, const cc_corpus* test,
                          const cc_reward_context* ctx, const char* config_json, char** json_out) {
  return guard([&] {
    require(warm_start, "warm start policy");
    require(train, "train corpus");
    require(test, "test corpus");
    require(ctx, "context");
    const auto cfg = parse_config(config_json);
    const auto weights = weights_from(cfg.value("weights", json()));
    std::vector<cc::evaluation::AblationVariant> variants;
    if (cfg.contains("variants")) {
      for (const auto& v : cfg["variants"]) {
        variants.push_back(cc::evaluation::make_variant(cc::evaluation::parse_variant(v.get<std::string>()), weights));
      }
    } else {
      variants = cc::evaluation::default_variants(weights);
    }
    cc::evaluation::AblationConfig ab;
    ab.rl = rl_from(cfg.value("rl", json::object()));
    ab.eval_generation = generation_from(cfg.value("eval", json::object()));
    ab.eval_seed = ab.eval_generation.seed;
    const auto rows = cc::evaluation::run_ablation(*warm_start->model, unique_posts(train), unique_posts(test),
                                                   ctx->ctx, variants, ab);
    json out = {{"rows", json::array()}, {"table", cc::evaluation::format_table(rows)}};
    for (const auto& r : rows) out["rows"].push_back(cc::evaluation::to_json(r));
    emit(json_out, out);
  });
}

cc_status cc_pairwise_export(const cc_policy* a, const cc_policy* b, const cc_corpus* posts, size_t n_items,
                             uint64_t seed, const char* config_json, const char* annotator_path,
                             const char* mapping_path) {
  return guard([&] {
    require(a, "first policy");
    require(posts, "posts");
    require(annotator_path, "annotator path");
    require(mapping_path, "mapping path");
    const auto cfg = parse_config(config_json);
    const auto gen_cfg = generation_from(cfg);
    cc::evaluation::PolicyGenerator gen_a(a->model, gen_cfg, cfg.value("id_a", "policy:" + a->model->id()));
    std::unique_ptr<cc::evaluation::Generator> gen_b;
    if (b != nullptr) {
      gen_b = std::make_unique<cc::evaluation::PolicyGenerator>(b->model, gen_cfg,
                                                                cfg.value("id_b", "policy:" + b->model->id()));
    } else {
      std::vector<std::pair<std::string, std::string>> table;
      for (const auto& p : posts->pairs) table.emplace_back(p.post.text, p.response.text);
      gen_b = std::make_unique<cc::evaluation::LookupGenerator>(std::move(table), cfg.value("id_b", "reference"));
    }
    const auto sheet = cc::evaluation::export_pairwise_eval(gen_a, *gen_b, unique_posts(posts), n_items, seed);
    cc::evaluation::write_sheet(sheet, annotator_path, mapping_path);
  });
}

cc_status cc_pairwise_tally(const char* mapping_path, const char* judgements_path, char** json_out) {
  return guard([&] {
    require(mapping_path, "mapping path");
    require(judgements_path, "judgements path");
    const auto mapping = json::parse(cc::io::read_text_file(mapping_path));
    const auto judgements = cc::evaluation::load_judgements(judgements_path);
    emit(json_out, cc::evaluation::to_json(cc::evaluation::tally_pairwise(mapping, judgements)));
  });
}

cc_status cc_generate_candidates(const cc_policy* policy, const cc_reward_context* ctx, const char* request_json,
                                 char** response_json) {
  return guard([&] {
    require(policy, "policy");
    require(ctx, "context");
    require(request_json, "request");
    const auto req = parse_config(request_json);
    if (!req.contains("post_text") || !req["post_text"].is_string()) {
      throw cc::ArgumentError("post_text must be a string");
    }
    const auto post = req["post_text"].get<std::string>();
    const int n = req.value("n", 1);
    const auto seed = req.value("seed", std::uint64_t{0});
    const int max_candidates = req.value("max_candidates", 8);
    json gen = json::object();
    for (const char* k : {"top_p", "max_new_tokens", "temperature"}) {
      if (req.contains(k)) gen[k] = req[k];
    }
    const auto weights = weights_from(req.value("weights", json()));
    const auto cands = cc::interface::generate_candidates(*policy->model, ctx->ctx, weights, post, n, seed,
                                                          generation_from(gen), max_candidates);
    json out = {{"candidates", json::array()}};
    for (const auto& c : cands) out["candidates"].push_back(cc::interface::to_json(c));
    emit(response_json, out);
  });
}

cc_status cc_score_draft(const cc_reward_context* ctx, const char* request_json, char** response_json) {
  return guard([&] {
    require(ctx, "context");
    require(request_json, "request");
    const auto req = parse_config(request_json);
    for (const char* k : {"post_text", "draft_text"}) {
      if (!req.contains(k) || !req[k].is_string()) throw cc::ArgumentError(std::string(k) + " must be a string");
    }
    const auto weights = weights_from(req.value("weights", json()));
    const auto c = cc::interface::score_draft(ctx->ctx, weights, req["post_text"].get<std::string>(),
                                              req["draft_text"].get<std::string>());
    emit(response_json, cc::interface::to_json(c));
  });
}

cc_status cc_service_config(const char* path, char** json_out) {
  return guard([&] {
    cc::interface::ServiceConfig cfg;
    if (path != nullptr) cfg = cc::interface::load_service_config(path);
    cc::interface::apply_env_overrides(cfg);
    cfg.validate();
    emit(json_out, cc::interface::to_json(cfg));
  });
}

}  // extern "C"
