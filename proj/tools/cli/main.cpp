// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "countercorrect/countercorrect.h"
#include "service.hpp"

namespace {

using nlohmann::json;

struct Failure {
  cc_status status;
  std::string message;
};

void check(cc_status s) {
  if (s != CC_OK) throw Failure{s, cc_last_error()};
}

std::string take(char* s) {
  std::string out(s == nullptr ? "" : s);
  cc_string_free(s);
  return out;
}

void print_json(const std::string& raw) { std::cout << json::parse(raw).dump(2) << "\n"; }

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Corpus = std::unique_ptr<cc_corpus, Deleter<cc_corpus, cc_corpus_free>>;
using Classifier = std::unique_ptr<cc_classifier, Deleter<cc_classifier, cc_classifier_free>>;
using Policy = std::unique_ptr<cc_policy, Deleter<cc_policy, cc_policy_free>>;
using Context = std::unique_ptr<cc_reward_context, Deleter<cc_reward_context, cc_reward_context_free>>;

Corpus load_corpus(const std::string& path) {
  cc_corpus* c = nullptr;
  check(cc_corpus_load(path.c_str(), &c));
  return Corpus(c);
}

Classifier load_classifier(const std::string& path) {
  cc_classifier* c = nullptr;
  check(cc_classifier_load(path.c_str(), &c));
  return Classifier(c);
}

Policy load_policy(const std::string& path) {
  cc_policy* p = nullptr;
  check(cc_policy_load(path.c_str(), &p));
  return Policy(p);
}

Context load_context(const std::string& dir) {
  cc_reward_context* c = nullptr;
  check(cc_reward_context_load(dir.c_str(), &c));
  return Context(c);
}

struct WeightFlags {
  std::string config;
  std::optional<double> alpha, beta, gamma, theta, lambda;

  void attach(CLI::App* app) {
    app->add_option("--weights-config", config, "key = value file with alpha/beta/gamma/theta/lambda");
    app->add_option("--alpha", alpha, "politeness weight");
    app->add_option("--beta", beta, "refutation weight");
    app->add_option("--gamma", gamma, "evidence weight");
    app->add_option("--theta", theta, "fluency weight");
    app->add_option("--lambda", lambda, "coherence weight");
  }

  json resolve() const {
    json w = json::object();
    if (!config.empty()) {
      char* out = nullptr;
      check(cc_weights_from_config(config.c_str(), &out));
      w = json::parse(take(out));
    }
    if (alpha) w["alpha"] = *alpha;
    if (beta) w["beta"] = *beta;
    if (gamma) w["gamma"] = *gamma;
    if (theta) w["theta"] = *theta;
    if (lambda) w["lambda"] = *lambda;
    return w;
  }
};

struct ModelFlags {
  int epochs = 30;
  int batch = 8;
  double lr = 3e-3;
  std::uint64_t seed = 0;
  int vocab = 512;
  int context = 256;
  int d_model = 64;
  int layers = 2;
  int heads = 4;
  int mlp = 256;

  void attach(CLI::App* app) {
    app->add_option("--epochs", epochs, "training epochs")->capture_default_str();
    app->add_option("--batch", batch, "batch size")->capture_default_str();
    app->add_option("--lr", lr, "learning rate")->capture_default_str();
    app->add_option("--seed", seed, "random seed")->capture_default_str();
    app->add_option("--vocab-size", vocab, "subword vocabulary size")->capture_default_str();
    app->add_option("--context", context, "context window in tokens")->capture_default_str();
    app->add_option("--d-model", d_model, "hidden size")->capture_default_str();
    app->add_option("--layers", layers, "decoder layers")->capture_default_str();
    app->add_option("--heads", heads, "attention heads")->capture_default_str();
    app->add_option("--mlp", mlp, "MLP hidden size")->capture_default_str();
  }

  json to_json() const {
    return {{"epochs", epochs},   {"batch_size", batch}, {"learning_rate", lr}, {"seed", seed},
            {"vocab_size", vocab}, {"context_window", context}, {"d_model", d_model}, {"n_layers", layers},
            {"n_heads", heads},   {"mlp_hidden", mlp}};
  }
};

std::vector<double> parse_ratios(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(std::stod(part));
  if (out.size() != 3) throw Failure{CC_ERR_ARGUMENT, "--ratios needs three comma-separated fractions"};
  return out;
}

void add_corpus(CLI::App& app) {
  auto* corpus = app.add_subcommand("corpus", "inspect and prepare annotated pairs");
  corpus->require_subcommand(1);

  static std::string stats_in;
  auto* stats = corpus->add_subcommand("stats", "label counts and proportions");
  stats->add_option("file", stats_in, "pairs file")->required();
  stats->callback([] {
    auto c = load_corpus(stats_in);
    char* out = nullptr;
    check(cc_corpus_stats(c.get(), &out));
    print_json(take(out));
  });

  static std::string clean_in, clean_out;
  auto* clean = corpus->add_subcommand("clean", "keep pairs with at least one desirable property");
  clean->add_option("in", clean_in, "input pairs")->required();
  clean->add_option("out", clean_out, "output pairs")->required();
  clean->callback([] {
    auto c = load_corpus(clean_in);
    cc_corpus* kept = nullptr;
    check(cc_corpus_clean(c.get(), &kept));
    Corpus k(kept);
    check(cc_corpus_save(k.get(), clean_out.c_str()));
    size_t before = 0, after = 0;
    check(cc_corpus_size(c.get(), &before));
    check(cc_corpus_size(k.get(), &after));
    std::cout << json{{"input", before}, {"kept", after}}.dump(2) << "\n";
  });

  static std::string filter_in, filter_out, filter_keywords;
  auto* filter = corpus->add_subcommand("filter", "keep pairs whose post mentions a topic keyword");
  filter->add_option("in", filter_in, "input pairs")->required();
  filter->add_option("out", filter_out, "output pairs")->required();
  filter->add_option("--keywords", filter_keywords, "comma-separated keywords (default: built-in list)");
  filter->callback([] {
    auto c = load_corpus(filter_in);
    std::optional<std::string> kw;
    if (!filter_keywords.empty()) {
      json arr = json::array();
      std::stringstream ss(filter_keywords);
      std::string part;
      while (std::getline(ss, part, ',')) arr.push_back(part);
      kw = arr.dump();
    }
    cc_corpus* kept = nullptr;
    check(cc_corpus_filter_keywords(c.get(), kw ? kw->c_str() : nullptr, &kept));
    Corpus k(kept);
    check(cc_corpus_save(k.get(), filter_out.c_str()));
  });

  static std::string split_in, split_ratios = "0.8,0.1,0.1", split_dir = ".";
  static std::uint64_t split_seed = 0;
  auto* split = corpus->add_subcommand("split", "seeded train/validation/test split");
  split->add_option("in", split_in, "input pairs")->required();
  split->add_option("--ratios", split_ratios, "train,validation,test fractions")->capture_default_str();
  split->add_option("--seed", split_seed, "shuffle seed")->capture_default_str();
  split->add_option("--out-dir", split_dir, "directory for train/validation/test.jsonl")->capture_default_str();
  split->callback([] {
    const auto r = parse_ratios(split_ratios);
    auto c = load_corpus(split_in);
    cc_corpus *a = nullptr, *b = nullptr, *t = nullptr;
    check(cc_corpus_split(c.get(), r[0], r[1], r[2], split_seed, &a, &b, &t));
    Corpus ta(a), tb(b), tt(t);
    const std::filesystem::path dir(split_dir);
    std::filesystem::create_directories(dir);
    json sizes = json::object();
    for (auto [name, part] : {std::pair{"train", ta.get()}, {"validation", tb.get()}, {"test", tt.get()}}) {
      check(cc_corpus_save(part, (dir / (std::string(name) + ".jsonl")).string().c_str()));
      size_t n = 0;
      check(cc_corpus_size(part, &n));
      sizes[name] = n;
    }
    std::cout << sizes.dump(2) << "\n";
  });
}

void add_clf(CLI::App& app) {
  auto* clf = app.add_subcommand("clf", "reward and cascade classifiers");
  clf->require_subcommand(1);

  static std::string task, data, out;
  static int epochs = 80, batch = 16, folds = 0;
  static double lr = 0.02;
  static std::uint64_t seed = 0;
  auto* train = clf->add_subcommand("train", "train a classifier");
  train->add_option("--task", task, "politeness|refutation|evidence|misinfo|disbelief")->required();
  train->add_option("--data", data, "annotated pairs or labeled examples")->required();
  train->add_option("--out", out, "checkpoint path")->required();
  train->add_option("--seed", seed, "random seed")->capture_default_str();
  train->add_option("--epochs", epochs, "epochs")->capture_default_str();
  train->add_option("--batch", batch, "batch size")->capture_default_str();
  train->add_option("--lr", lr, "learning rate")->capture_default_str();
  train->add_option("--folds", folds, "also report k-fold cross-validation");
  train->callback([] {
    const json cfg = {{"epochs", epochs}, {"batch_size", batch}, {"learning_rate", lr}, {"seed", seed}};
    cc_classifier* m = nullptr;
    check(cc_classifier_train(data.c_str(), task.c_str(), cfg.dump().c_str(), &m));
    Classifier model(m);
    check(cc_classifier_save(model.get(), out.c_str()));
    char* report = nullptr;
    check(cc_classifier_evaluate(model.get(), data.c_str(), &report));
    json summary = {{"checkpoint", out}, {"training", json::parse(take(report))}};
    if (folds > 0) {
      char* cv = nullptr;
      check(cc_classifier_cross_validate(data.c_str(), task.c_str(), cfg.dump().c_str(), folds, &cv));
      summary["cross_validation"] = json::parse(take(cv));
    }
    std::cout << summary.dump(2) << "\n";
  });

  static std::string eval_ckpt, eval_data;
  auto* eval = clf->add_subcommand("eval", "precision, recall and F1 on held-out data");
  eval->add_option("--checkpoint", eval_ckpt, "classifier checkpoint")->required();
  eval->add_option("--data", eval_data, "held-out examples")->required();
  eval->callback([] {
    auto m = load_classifier(eval_ckpt);
    char* report = nullptr;
    check(cc_classifier_evaluate(m.get(), eval_data.c_str(), &report));
    print_json(take(report));
  });

  static std::string score_ckpt, score_post, score_response;
  auto* score = clf->add_subcommand("score", "positive-class probability of one input");
  score->add_option("--checkpoint", score_ckpt, "classifier checkpoint")->required();
  score->add_option("--post", score_post, "post text (pairwise tasks)");
  score->add_option("--response", score_response, "response text")->required();
  score->callback([score] {
    auto m = load_classifier(score_ckpt);
    double p = 0.0;
    const char* post = score->count("--post") ? score_post.c_str() : nullptr;
    check(cc_classifier_score(m.get(), post, score_response.c_str(), &p));
    std::cout << json{{"score", p}}.dump(2) << "\n";
  });

  static std::string cas_misinfo, cas_disbelief, cas_threads, cas_out;
  static double cas_threshold = 0.5;
  auto* cascade = clf->add_subcommand("cascade", "find candidate counter-replies for manual verification");
  cascade->add_option("--misinfo", cas_misinfo, "misinfo classifier")->required();
  cascade->add_option("--disbelief", cas_disbelief, "disbelief classifier")->required();
  cascade->add_option("--threads", cas_threads, "posts with replies")->required();
  cascade->add_option("--threshold", cas_threshold, "decision threshold")->capture_default_str();
  cascade->add_option("--out", cas_out, "write candidates here instead of stdout");
  cascade->callback([] {
    auto m = load_classifier(cas_misinfo);
    auto d = load_classifier(cas_disbelief);
    char* out = nullptr;
    check(cc_cascade_identify(m.get(), d.get(), cas_threads.c_str(), cas_threshold, &out));
    const auto lines = take(out);
    if (cas_out.empty()) {
      std::cout << lines;
    } else {
      std::ofstream f(cas_out);
      f << lines;
      if (!f) throw Failure{CC_ERR_IO, "cannot write " + cas_out};
    }
  });
}

void add_policy(CLI::App& app) {
  auto* pol = app.add_subcommand("policy", "decoder policy model");
  pol->require_subcommand(1);

  static std::string ws_data, ws_out, ws_init;
  static ModelFlags ws_flags;
  auto* ws = pol->add_subcommand("warmstart", "supervised training on (post, response) pairs");
  ws->add_option("--data", ws_data, "annotated pairs")->required();
  ws->add_option("--out", ws_out, "checkpoint path")->required();
  ws->add_option("--init", ws_init, "continue from this checkpoint");
  ws_flags.attach(ws);
  ws->callback([] {
    auto c = load_corpus(ws_data);
    Policy p;
    char* report = nullptr;
    if (!ws_init.empty()) {
      p = load_policy(ws_init);
      check(cc_policy_continue_warm_start(p.get(), c.get(), ws_flags.to_json().dump().c_str(), &report));
    } else {
      cc_policy* raw = nullptr;
      check(cc_policy_warm_start(c.get(), ws_flags.to_json().dump().c_str(), &raw, &report));
      p.reset(raw);
    }
    check(cc_policy_save(p.get(), ws_out.c_str()));
    auto r = json::parse(take(report));
    r.erase("epoch_loss");
    std::cout << json{{"checkpoint", ws_out}, {"report", r}}.dump(2) << "\n";
  });

  static std::string ref_data, ref_out;
  static ModelFlags ref_flags;
  auto* ref = pol->add_subcommand("reference", "train the frozen fluency reference model on responses");
  ref->add_option("--data", ref_data, "annotated pairs")->required();
  ref->add_option("--out", ref_out, "checkpoint path")->required();
  ref_flags.attach(ref);
  ref->callback([] {
    auto c = load_corpus(ref_data);
    cc_policy* raw = nullptr;
    char* report = nullptr;
    check(cc_policy_train_reference(c.get(), ref_flags.to_json().dump().c_str(), &raw, &report));
    Policy p(raw);
    check(cc_policy_save(p.get(), ref_out.c_str()));
    auto r = json::parse(take(report));
    r.erase("epoch_loss");
    std::cout << json{{"checkpoint", ref_out}, {"report", r}}.dump(2) << "\n";
  });

  static std::string gen_ckpt, gen_post;
  static double gen_top_p = 0.9, gen_temp = 1.0;
  static int gen_max = 64;
  static std::uint64_t gen_seed = 0;
  auto* gen = pol->add_subcommand("generate", "nucleus-sampled response to a post");
  gen->add_option("--checkpoint", gen_ckpt, "policy checkpoint")->required();
  gen->add_option("--post", gen_post, "misinformation post")->required();
  gen->add_option("--top-p", gen_top_p, "nucleus mass")->capture_default_str();
  gen->add_option("--seed", gen_seed, "sampling seed")->capture_default_str();
  gen->add_option("--max-new-tokens", gen_max, "token budget")->capture_default_str();
  gen->add_option("--temperature", gen_temp, "sampling temperature")->capture_default_str();
  gen->callback([] {
    auto p = load_policy(gen_ckpt);
    const json cfg = {{"top_p", gen_top_p}, {"seed", gen_seed}, {"max_new_tokens", gen_max}, {"temperature", gen_temp}};
    char* out = nullptr;
    check(cc_policy_generate(p.get(), gen_post.c_str(), cfg.dump().c_str(), &out));
    print_json(take(out));
  });

  static std::string lp_ckpt, lp_post, lp_response;
  auto* lp = pol->add_subcommand("logprob", "log p(response | post)");
  lp->add_option("--checkpoint", lp_ckpt, "policy checkpoint")->required();
  lp->add_option("--post", lp_post, "post text")->required();
  lp->add_option("--response", lp_response, "response text")->required();
  lp->callback([] {
    auto p = load_policy(lp_ckpt);
    double v = 0.0;
    check(cc_policy_sequence_logprob(p.get(), lp_post.c_str(), lp_response.c_str(), &v));
    std::cout << json{{"logprob", v}}.dump(2) << "\n";
  });

  static std::string info_ckpt;
  auto* info = pol->add_subcommand("info", "checkpoint metadata");
  info->add_option("--checkpoint", info_ckpt, "policy checkpoint")->required();
  info->callback([] {
    auto p = load_policy(info_ckpt);
    char* out = nullptr;
    check(cc_policy_info(p.get(), &out));
    print_json(take(out));
  });
}

void add_reward(CLI::App& app) {
  auto* rew = app.add_subcommand("reward", "score a response with the five rewards");
  static std::string ctx_dir, post, response;
  static WeightFlags weights;
  rew->add_option("--context", ctx_dir, "reward context directory")->required();
  rew->add_option("--post", post, "post text")->required();
  rew->add_option("--response", response, "response text")->required();
  weights.attach(rew);
  rew->callback([] {
    auto ctx = load_context(ctx_dir);
    char* out = nullptr;
    check(cc_reward_score(ctx.get(), weights.resolve().dump().c_str(), post.c_str(), response.c_str(), &out));
    print_json(take(out));
  });
}

void add_rl(CLI::App& app) {
  auto* rl = app.add_subcommand("rl", "reward-increment policy training");
  rl->require_subcommand(1);
  static std::string ckpt, data, ctx_dir, out, log_path;
  static long long steps = 10000, every = 0;
  static int batch = 8, max_new = 64;
  static double lr = 1e-5, top_p = 0.9;
  static std::uint64_t seed = 0;
  static bool keep_best = false, baseline = false;
  static WeightFlags weights;
  auto* train = rl->add_subcommand("train", "fine-tune a warm-started policy");
  train->add_option("--checkpoint", ckpt, "warm-started policy")->required();
  train->add_option("--data", data, "pairs whose posts are used as prompts")->required();
  train->add_option("--context", ctx_dir, "reward context directory")->required();
  train->add_option("--out", out, "final checkpoint path")->required();
  train->add_option("--steps", steps, "optimizer steps")->capture_default_str();
  train->add_option("--batch", batch, "posts per step")->capture_default_str();
  train->add_option("--lr", lr, "learning rate")->capture_default_str();
  train->add_option("--seed", seed, "sampling seed")->capture_default_str();
  train->add_option("--top-p", top_p, "nucleus mass")->capture_default_str();
  train->add_option("--max-new-tokens", max_new, "token budget")->capture_default_str();
  train->add_option("--log", log_path, "line-delimited step records");
  train->add_option("--checkpoint-every", every, "save every N steps next to --out");
  train->add_flag("--keep-best", keep_best, "restore the best mean-reward step at the end");
  train->add_flag("--baseline", baseline, "subtract a moving-average reward baseline");
  weights.attach(train);
  train->callback([] {
    auto p = load_policy(ckpt);
    auto c = load_corpus(data);
    auto ctx = load_context(ctx_dir);
    const json cfg = {{"total_steps", steps},       {"batch_size", batch},  {"learning_rate", lr},
                      {"seed", seed},               {"top_p", top_p},       {"max_new_tokens", max_new},
                      {"checkpoint_interval", every}, {"keep_best", keep_best}, {"use_baseline", baseline}};
    const auto prefix = std::filesystem::path(out).replace_extension().string();
    char* summary = nullptr;
    check(cc_rl_train(p.get(), c.get(), ctx.get(), weights.resolve().dump().c_str(), cfg.dump().c_str(),
                      log_path.empty() ? nullptr : log_path.c_str(), every > 0 ? prefix.c_str() : nullptr,
                      &summary));
    check(cc_policy_save(p.get(), out.c_str()));
    auto s = json::parse(take(summary));
    s["checkpoint"] = out;
    std::cout << s.dump(2) << "\n";
  });
}

void add_eval(CLI::App& app) {
  auto* ev = app.add_subcommand("eval", "metrics, ablations and pairwise sheets");
  ev->require_subcommand(1);

  static std::string run_ckpt, run_data, run_ctx;
  static double run_top_p = 0.9;
  static std::uint64_t run_seed = 0;
  static bool run_refs = false, run_examples = false;
  auto* run = ev->add_subcommand("run", "five-metric report for a policy or the reference responses");
  run->add_option("--checkpoint", run_ckpt, "policy checkpoint");
  run->add_option("--data", run_data, "held-out pairs")->required();
  run->add_option("--context", run_ctx, "reward context directory")->required();
  run->add_option("--top-p", run_top_p, "nucleus mass")->capture_default_str();
  run->add_option("--seed", run_seed, "first generation seed")->capture_default_str();
  run->add_flag("--references", run_refs, "score the corpus responses instead of a policy");
  run->add_flag("--examples", run_examples, "include per-example scores");
  run->callback([] {
    auto c = load_corpus(run_data);
    auto ctx = load_context(run_ctx);
    char* out = nullptr;
    if (run_refs) {
      check(cc_evaluate_references(c.get(), ctx.get(), &out));
    } else {
      if (run_ckpt.empty()) throw Failure{CC_ERR_ARGUMENT, "--checkpoint is required unless --references is set"};
      auto p = load_policy(run_ckpt);
      const json cfg = {{"top_p", run_top_p}, {"seed", run_seed}, {"examples", run_examples}};
      check(cc_evaluate_policy(p.get(), c.get(), ctx.get(), cfg.dump().c_str(), &out));
    }
    print_json(take(out));
  });

  static std::string ab_ckpt, ab_train, ab_test, ab_ctx, ab_variants, ab_out;
  static long long ab_steps = 100;
  static int ab_batch = 8;
  static double ab_lr = 1e-5;
  static std::uint64_t ab_seed = 0, ab_eval_seed = 0;
  static WeightFlags ab_weights;
  auto* ab = ev->add_subcommand("ablation", "train and evaluate reward-subset variants");
  ab->add_option("--checkpoint", ab_ckpt, "warm-started policy")->required();
  ab->add_option("--train", ab_train, "pairs used as RL prompts")->required();
  ab->add_option("--test", ab_test, "held-out pairs")->required();
  ab->add_option("--context", ab_ctx, "reward context directory")->required();
  ab->add_option("--steps", ab_steps, "RL steps per variant")->capture_default_str();
  ab->add_option("--batch", ab_batch, "posts per step")->capture_default_str();
  ab->add_option("--lr", ab_lr, "learning rate")->capture_default_str();
  ab->add_option("--seed", ab_seed, "RL seed shared by all variants")->capture_default_str();
  ab->add_option("--eval-seed", ab_eval_seed, "first evaluation seed")->capture_default_str();
  ab->add_option("--variants", ab_variants, "comma-separated subset (default: all five)");
  ab->add_option("--out", ab_out, "write the JSON result here");
  ab_weights.attach(ab);
  ab->callback([] {
    auto p = load_policy(ab_ckpt);
    auto tr = load_corpus(ab_train);
    auto te = load_corpus(ab_test);
    auto ctx = load_context(ab_ctx);
    json cfg = {{"weights", ab_weights.resolve()},
                {"rl", {{"total_steps", ab_steps}, {"batch_size", ab_batch}, {"learning_rate", ab_lr}, {"seed", ab_seed}}},
                {"eval", {{"seed", ab_eval_seed}}}};
    if (!ab_variants.empty()) {
      cfg["variants"] = json::array();
      std::stringstream ss(ab_variants);
      std::string part;
      while (std::getline(ss, part, ',')) cfg["variants"].push_back(part);
    }
    char* out = nullptr;
    check(cc_run_ablation(p.get(), tr.get(), te.get(), ctx.get(), cfg.dump().c_str(), &out));
    const auto result = json::parse(take(out));
    std::cout << result.at("table").get<std::string>();
    if (!ab_out.empty()) {
      std::ofstream f(ab_out);
      f << result.dump(2) << "\n";
      if (!f) throw Failure{CC_ERR_IO, "cannot write " + ab_out};
    }
  });

  static std::string px_a, px_b, px_data, px_view, px_map;
  static std::size_t px_n = 50;
  static std::uint64_t px_seed = 0;
  auto* px = ev->add_subcommand("pairwise-export", "blinded A/B sheet plus hidden method mapping");
  px->add_option("--a", px_a, "first policy checkpoint")->required();
  px->add_option("--b", px_b, "second policy checkpoint (default: reference responses)");
  px->add_option("--data", px_data, "pairs supplying posts")->required();
  px->add_option("--n", px_n, "items")->capture_default_str();
  px->add_option("--seed", px_seed, "sampling and ordering seed")->capture_default_str();
  px->add_option("--sheet", px_view, "annotator view path")->required();
  px->add_option("--mapping", px_map, "hidden mapping path")->required();
  px->callback([] {
    auto a = load_policy(px_a);
    Policy b;
    if (!px_b.empty()) b = load_policy(px_b);
    auto c = load_corpus(px_data);
    const json cfg = {{"id_a", px_a}, {"id_b", px_b.empty() ? std::string("reference") : px_b}};
    check(cc_pairwise_export(a.get(), b.get(), c.get(), px_n, px_seed, cfg.dump().c_str(), px_view.c_str(),
                             px_map.c_str()));
    std::cout << json{{"sheet", px_view}, {"mapping", px_map}, {"items", px_n}}.dump(2) << "\n";
  });

  static std::string pt_map, pt_judgements;
  auto* pt = ev->add_subcommand("pairwise-tally", "count wins over items both annotators agree on");
  pt->add_option("--mapping", pt_map, "hidden mapping path")->required();
  pt->add_option("--judgements", pt_judgements, "line-delimited {item_id, annotator, choice}")->required();
  pt->callback([] {
    char* out = nullptr;
    check(cc_pairwise_tally(pt_map.c_str(), pt_judgements.c_str(), &out));
    print_json(take(out));
  });
}

void add_serve(CLI::App& app) {
  static std::string config_path, bind;
  static int port = -1;
  auto* serve = app.add_subcommand("serve", "HTTP generation and scoring service");
  serve->add_option("--config", config_path, "key = value service config");
  serve->add_option("--bind", bind, "bind address (overrides config and CC_BIND_ADDRESS)");
  serve->add_option("--port", port, "port (overrides config and CC_PORT)");
  serve->callback([] {
    char* out = nullptr;
    check(cc_service_config(config_path.empty() ? nullptr : config_path.c_str(), &out));
    auto cfg = json::parse(take(out));
    if (!bind.empty()) cfg["bind_address"] = bind;
    if (port >= 0) cfg["port"] = port;
    std::unique_ptr<ccsvc::Service> svc;
    try {
      svc = ccsvc::Service::from_config(cfg);
    } catch (const std::runtime_error& e) {
      throw Failure{CC_ERR_IO, e.what()};
    }
    const int rc = ccsvc::serve(*svc, cfg.at("bind_address").get<std::string>(), cfg.at("port").get<int>());
    if (rc != 0) throw Failure{CC_ERR_IO, "server failed"};
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counter-misinformation response generation toolkit", "countercorrect"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cc_version()));
  add_corpus(app);
  add_clf(app);
  add_policy(app);
  add_reward(app);
  add_rl(app);
  add_eval(app);
  add_serve(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Failure& f) {
    std::cerr << "error (" << cc_status_name(f.status) << "): " << f.message << "\n";
    return static_cast<int>(f.status);
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
