// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

// Exercises the library through its C header only.

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "countercorrect/countercorrect.h"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string data(const char* name) { return (fs::path(CC_DATA_DIR) / name).string(); }

json take_json(char* s) {
  REQUIRE(s != nullptr);
  auto j = json::parse(s);
  cc_string_free(s);
  return j;
}

fs::path temp_dir() {
  const auto d = fs::temp_directory_path() / ("cc-capi-" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

const char* kSmallModel =
    R"({"vocab_size": 256, "context_window": 128, "d_model": 16, "n_layers": 1, "n_heads": 2, "mlp_hidden": 32,
        "epochs": 15, "seed": 2})";

}  // namespace

TEST_CASE("status names and version", "[capi]") {
  CHECK(std::string(cc_status_name(CC_OK)) == "ok");
  CHECK(std::string(cc_status_name(CC_ERR_IO)) == "io_error");
  CHECK(std::string(cc_version()) == "0.1.0");
  cc_string_free(nullptr);
}

TEST_CASE("errors map to status codes", "[capi]") {
  cc_corpus* c = nullptr;
  CHECK(cc_corpus_load(nullptr, &c) == CC_ERR_ARGUMENT);
  CHECK(cc_corpus_load("/nonexistent/file.jsonl", &c) == CC_ERR_IO);
  CHECK(std::string(cc_last_error()).find("nonexistent") != std::string::npos);
  CHECK(cc_corpus_parse("{\"post_text\": 1}", &c) == CC_ERR_VALIDATION);
  CHECK(c == nullptr);
  CHECK(cc_corpus_parse("{oops", &c) == CC_ERR_VALIDATION);
  double out = 0;
  CHECK(cc_composite_reward("{\"alpha\": -1}", "{}", &out) == CC_ERR_ARGUMENT);
  CHECK(cc_composite_reward("not json", "{}", &out) == CC_ERR_ARGUMENT);
  cc_classifier* m = nullptr;
  CHECK(cc_classifier_train(data("misinfo_examples.jsonl").c_str(), "sarcasm", nullptr, &m) == CC_ERR_ARGUMENT);
}

TEST_CASE("composite reward through the C API", "[capi]") {
  double out = 0;
  REQUIRE(cc_composite_reward(nullptr,
                              R"({"politeness":0.5,"refutation":1,"evidence":0,"fluency":0.2,"coherence":1})",
                              &out) == CC_OK);
  CHECK(out == Catch::Approx(0.5 + 1 + 0 + 10 * 0.2 + 0.1).epsilon(1e-15));
}

TEST_CASE("corpus operations", "[capi]") {
  cc_corpus* c = nullptr;
  REQUIRE(cc_corpus_load(data("stats_fixture.jsonl").c_str(), &c) == CC_OK);
  size_t n = 0;
  REQUIRE(cc_corpus_size(c, &n) == CC_OK);
  CHECK(n == 4);
  char* s = nullptr;
  REQUIRE(cc_corpus_stats(c, &s) == CC_OK);
  const auto stats = take_json(s);
  CHECK(stats["politeness"]["counts"]["rude"] == 2);

  cc_corpus* clean = nullptr;
  REQUIRE(cc_corpus_clean(c, &clean) == CC_OK);
  REQUIRE(cc_corpus_size(clean, &n) == CC_OK);
  CHECK(n == 3);
  cc_corpus_free(clean);

  cc_corpus* kept = nullptr;
  REQUIRE(cc_corpus_filter_keywords(c, R"(["microchip"])", &kept) == CC_OK);
  cc_corpus_free(kept);
  CHECK(cc_corpus_filter_keywords(c, "[]", &kept) == CC_ERR_ARGUMENT);

  cc_corpus *tr = nullptr, *va = nullptr, *te = nullptr;
  CHECK(cc_corpus_split(c, 0.5, 0.25, 0.25, 1, &tr, &va, &te) == CC_OK);
  size_t a = 0, b = 0, d = 0;
  cc_corpus_size(tr, &a);
  cc_corpus_size(va, &b);
  cc_corpus_size(te, &d);
  CHECK(a + b + d == 4);
  cc_corpus_free(tr);
  cc_corpus_free(va);
  cc_corpus_free(te);
  CHECK(cc_corpus_split(c, 0.5, 0.5, 0.5, 1, &tr, &va, &te) == CC_ERR_ARGUMENT);

  char* text = nullptr;
  REQUIRE(cc_corpus_to_jsonl(c, &text) == CC_OK);
  cc_corpus* back = nullptr;
  REQUIRE(cc_corpus_parse(text, &back) == CC_OK);
  cc_string_free(text);
  cc_corpus_size(back, &n);
  CHECK(n == 4);
  cc_corpus_free(back);
  cc_corpus_free(c);
}

TEST_CASE("end-to-end pipeline through the C API", "[capi][pipeline]") {
  const auto dir = temp_dir();
  const auto ctx_dir = dir / "context";
  fs::create_directories(ctx_dir);

  const char* clf_cfg = R"({"epochs": 40, "seed": 1})";
  for (const char* task : {"politeness", "refutation", "evidence"}) {
    cc_classifier* m = nullptr;
    REQUIRE(cc_classifier_train(data("classifier_pairs.jsonl").c_str(), task, clf_cfg, &m) == CC_OK);
    char* ev = nullptr;
    REQUIRE(cc_classifier_evaluate(m, data("classifier_pairs.jsonl").c_str(), &ev) == CC_OK);
    CHECK(take_json(ev)["f1"].get<double>() > 0.9);
    REQUIRE(cc_classifier_save(m, (ctx_dir / (std::string(task) + ".clf")).c_str()) == CC_OK);
    cc_classifier_free(m);
  }
  cc_classifier* pol = nullptr;
  REQUIRE(cc_classifier_load((ctx_dir / "politeness.clf").c_str(), &pol) == CC_OK);
  double p = -1;
  REQUIRE(cc_classifier_score(pol, nullptr, "Thank you for sharing.", &p) == CC_OK);
  CHECK(p >= 0.0);
  CHECK(p <= 1.0);
  CHECK(cc_classifier_score(pol, "post", "Thank you.", &p) == CC_ERR_ARGUMENT);
  char* info = nullptr;
  REQUIRE(cc_classifier_info(pol, &info) == CC_OK);
  CHECK(take_json(info)["task"] == "politeness");
  cc_classifier_free(pol);

  cc_classifier *mis = nullptr, *dis = nullptr;
  REQUIRE(cc_classifier_train(data("misinfo_examples.jsonl").c_str(), "misinfo", clf_cfg, &mis) == CC_OK);
  REQUIRE(cc_classifier_train(data("disbelief_examples.jsonl").c_str(), "disbelief", clf_cfg, &dis) == CC_OK);
  char* found = nullptr;
  REQUIRE(cc_cascade_identify(mis, dis, data("threads.jsonl").c_str(), 0.5, &found) == CC_OK);
  CHECK(std::string(found).find("That claim is fake.") != std::string::npos);
  cc_string_free(found);
  cc_classifier_free(mis);
  cc_classifier_free(dis);

  cc_corpus* pairs = nullptr;
  REQUIRE(cc_corpus_load(data("fixture_pairs.jsonl").c_str(), &pairs) == CC_OK);
  cc_policy* ref = nullptr;
  char* report = nullptr;
  REQUIRE(cc_policy_train_reference(pairs, kSmallModel, &ref, &report) == CC_OK);
  cc_string_free(report);
  REQUIRE(cc_policy_save(ref, (ctx_dir / "reference.lm").c_str()) == CC_OK);
  cc_policy_free(ref);

  cc_policy* policy = nullptr;
  REQUIRE(cc_policy_warm_start(pairs, kSmallModel, &policy, &report) == CC_OK);
  const auto ws = take_json(report);
  CHECK(ws["final_loss"].get<double>() < ws["initial_loss"].get<double>());

  char* gen = nullptr;
  REQUIRE(cc_policy_generate(policy, "The vaccine contains a microchip to track you.", R"({"seed": 3})", &gen) ==
          CC_OK);
  const auto g = take_json(gen);
  CHECK(g.contains("text"));
  double lp = 0;
  REQUIRE(cc_policy_sequence_logprob(policy, "The vaccine contains a microchip to track you.",
                                     g["text"].get<std::string>().c_str(), &lp) == CC_OK);
  CHECK(lp == Catch::Approx(g["total_logprob"].get<double>()).epsilon(1e-9));

  cc_reward_context* ctx = nullptr;
  CHECK(cc_reward_context_load("/nonexistent", &ctx) == CC_ERR_IO);
  REQUIRE(cc_reward_context_load(ctx_dir.c_str(), &ctx) == CC_OK);
  char* scored = nullptr;
  REQUIRE(cc_reward_score(ctx, nullptr, "post text", "This claim is false.", &scored) == CC_OK);
  const auto sc = take_json(scored);
  CHECK(sc["scores"]["fluency"].get<double>() * sc["perplexity"].get<double>() ==
        Catch::Approx(1.0).epsilon(1e-12));

  char* cands = nullptr;
  REQUIRE(cc_generate_candidates(policy, ctx, R"({"post_text": "The vaccine changes your DNA.", "n": 3, "seed": 1})",
                                 &cands) == CC_OK);
  CHECK(take_json(cands)["candidates"].size() == 3);
  CHECK(cc_generate_candidates(policy, ctx, R"({"n": 3})", &cands) == CC_ERR_ARGUMENT);

  const auto log_path = dir / "rl.log";
  const auto prefix = dir / "ckpt";
  char* summary = nullptr;
  REQUIRE(cc_rl_train(policy, pairs, ctx, nullptr,
                      R"({"batch_size": 2, "total_steps": 2, "learning_rate": 0.001, "checkpoint_interval": 2})",
                      log_path.c_str(), prefix.c_str(), &summary) == CC_OK);
  cc_string_free(summary);
  CHECK(fs::exists(dir / "ckpt-2.ccp"));
  std::ifstream log(log_path);
  int lines = 0;
  for (std::string line; std::getline(log, line);) ++lines;
  CHECK(lines == 2);

  char* ev = nullptr;
  REQUIRE(cc_evaluate_policy(policy, pairs, ctx, R"({"seed": 1})", &ev) == CC_OK);
  const auto evj = take_json(ev);
  CHECK(evj.contains("perplexity"));
  REQUIRE(cc_evaluate_references(pairs, ctx, &ev) == CC_OK);
  CHECK(take_json(ev)["n_examples"] == 50);

  const auto sheet = dir / "sheet.json";
  const auto mapping = dir / "mapping.json";
  REQUIRE(cc_pairwise_export(policy, nullptr, pairs, 3, 9, nullptr, sheet.c_str(), mapping.c_str()) == CC_OK);
  std::ifstream sf(sheet);
  const auto sj = json::parse(sf);
  CHECK(sj["items"].size() == 3);
  {
    std::ofstream jf(dir / "judgements.jsonl");
    for (const auto& it : sj["items"])
      for (const char* who : {"x", "y"})
        jf << json{{"item_id", it["item_id"]}, {"annotator", who}, {"choice", "equal"}}.dump() << "\n";
  }
  char* tally = nullptr;
  REQUIRE(cc_pairwise_tally(mapping.c_str(), (dir / "judgements.jsonl").c_str(), &tally) == CC_OK);
  CHECK(take_json(tally)["equal"] == 3);

  cc_reward_context_free(ctx);
  cc_policy_free(policy);
  cc_corpus_free(pairs);
  fs::remove_all(dir);
}
