// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

// Prints one PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "../support.hpp"
#include "classifiers/classifier.hpp"
#include "corpus/corpus.hpp"
#include "countercorrect/countercorrect.h"
#include "evaluation/evaluation.hpp"
#include "nn/random.hpp"
#include "policy/policy.hpp"
#include "policy/sampling.hpp"
#include "rewards/rewards.hpp"
#include "rl/trainer.hpp"
#include "text/utf8.hpp"

// After the Eigen users: resolv.h, pulled in by httplib, defines _res.
#include <httplib.h>
#include "service.hpp"

using namespace cc;
using json = nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;
std::set<std::string> g_only;

void run(const char* name, double budget_seconds, const std::function<Outcome()>& check) {
  if (!g_only.empty() && !g_only.count(name)) return;
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_seconds) {
    o.pass = false;
    o.detail += " (over time budget)";
  }
  if (!o.pass) ++g_failures;
  std::printf("%s %-22s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome composite_oracle() {
  const rewards::RewardWeights w{1.0, 1.0, 1.0, 10.0, 0.1};
  nn::Rng rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    rewards::RewardVector v;
    v.politeness = rng.uniform();
    v.refutation = rng.uniform();
    v.evidence = rng.uniform();
    v.fluency = rng.uniform();
    v.coherence = rng.uniform();
    if (!v.in_bounds()) return {false, "generated vector out of bounds"};
    const double oracle =
        1.0 * v.politeness + 1.0 * v.refutation + 1.0 * v.evidence + 10.0 * v.fluency + 0.1 * v.coherence;
    worst = std::max(worst, std::abs(rewards::composite_reward(w, v) - oracle));
  }
  return {worst <= 1e-9, fmt("max |diff| = %.3g over 1000 vectors", worst)};
}

Outcome gradient_check() {
  const std::vector<std::string> texts{"ab", "ba", "aab"};
  auto tok = text::Tokenizer::train(texts, 6);
  policy::ModelDims dims;
  dims.context_window = 6;
  dims.d_model = 2;
  dims.n_layers = 1;
  dims.n_heads = 1;
  dims.mlp_hidden = 4;
  nn::Rng rng(99);
  double worst = 0.0;
  std::size_t n_params = 0;
  for (int c = 0; c < 50; ++c) {
    auto model = policy::PolicyModel::create(tok, dims, 1000 + c);
    n_params = model.network().parameters().scalar_count();
    if (n_params > 100) return {false, "toy model has " + std::to_string(n_params) + " parameters"};
    const int v = static_cast<int>(tok.vocab_size());
    const int prompt_len = 1 + static_cast<int>(rng.below(3));
    const int resp_len = 1 + static_cast<int>(rng.below(3));
    std::vector<int> prompt, resp;
    for (int i = 0; i < prompt_len; ++i) prompt.push_back(static_cast<int>(rng.below(v)));
    for (int i = 0; i < resp_len; ++i) resp.push_back(static_cast<int>(rng.below(v)));
    const double r = 0.05 + 1.5 * rng.uniform();

    const std::vector<std::vector<int>> prompts{prompt}, responses{resp};
    const std::vector<double> adv{r};
    const auto analytic = rl::rl_gradient(model, prompts, responses, adv);

    auto loss = [&](const policy::PolicyModel& m) {
      double lp = 0.0;
      for (double x : policy::token_logprobs(m, prompt, resp)) lp += x;
      return -r * lp;
    };
    auto flat = model.network().parameters().flatten();
    std::vector<double> fd(flat.size());
    // Fourth-order central stencil: two-element layer norms make the loss
    // sharply curved, which swamps the plain two-point difference.
    const double h = 1e-5;
    for (std::size_t i = 0; i < flat.size(); ++i) {
      const double keep = flat[i];
      auto at = [&](double offset) {
        flat[i] = keep + offset;
        model.network().parameters().assign_flat(flat);
        return loss(model);
      };
      fd[i] = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
      flat[i] = keep;
    }
    model.network().parameters().assign_flat(flat);

    std::vector<double> an;
    for (const auto& g : analytic.grads)
      for (Eigen::Index k = 0; k < g.size(); ++k) an.push_back(g.data()[k]);
    if (an.size() != fd.size()) return {false, "gradient size mismatch"};
    double diff = 0.0, na = 0.0, nf = 0.0;
    for (std::size_t i = 0; i < an.size(); ++i) {
      diff += (an[i] - fd[i]) * (an[i] - fd[i]);
      na += an[i] * an[i];
      nf += fd[i] * fd[i];
    }
    const double denom = std::max({std::sqrt(na), std::sqrt(nf), 1e-12});
    worst = std::max(worst, std::sqrt(diff) / denom);
  }
  return {worst < 1e-4, fmt("max relative error %.3g over 50 cases, %g parameters", worst, double(n_params))};
}

std::vector<int> oracle_nucleus(const std::vector<double>& p, double top_p) {
  std::vector<int> idx(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) idx[i] = static_cast<int>(i);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return p[a] > p[b]; });
  std::vector<int> out;
  double cum = 0.0;
  for (int i : idx) {
    out.push_back(i);
    cum += p[i];
    if (cum >= top_p) break;
  }
  return out;
}

std::vector<double> random_distribution(nn::Rng& rng) {
  const std::size_t n = 2 + rng.below(19);
  std::vector<double> p(n);
  double s = 0.0;
  for (auto& x : p) {
    // Quantized so that ties occur.
    x = (rng.below(4) == 0) ? 0.25 : -std::log(1.0 - rng.uniform());
    s += x;
  }
  for (auto& x : p) x /= s;
  return p;
}

Outcome nucleus() {
  nn::Rng rng(7);
  nn::Rng draw(8);
  std::size_t outside = 0, draws = 0;
  for (int d = 0; d < 100; ++d) {
    const auto p = random_distribution(rng);
    const double top_p = 0.05 + 0.95 * rng.uniform();
    const auto set = oracle_nucleus(p, top_p);
    const std::set<int> allowed(set.begin(), set.end());
    for (int k = 0; k < 100; ++k, ++draws)
      if (!allowed.count(policy::nucleus_sample(p, top_p, draw))) ++outside;
  }
  std::size_t argmax_miss = 0;
  for (int d = 0; d < 100; ++d) {
    const auto p = random_distribution(rng);
    const double mx = *std::max_element(p.begin(), p.end());
    int expect = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] == mx) {
        expect = static_cast<int>(i);
        break;
      }
    const double top_p = (d % 2 == 0) ? mx : mx * (0.01 + 0.99 * rng.uniform());
    for (int k = 0; k < 20; ++k)
      if (policy::nucleus_sample(p, top_p, draw) != expect) ++argmax_miss;
  }
  const std::vector<double> p{0.05, 0.1, 0.15, 0.3, 0.4};
  std::vector<double> freq(p.size(), 0.0);
  for (int k = 0; k < 10000; ++k) freq[policy::nucleus_sample(p, 1.0, draw)] += 1.0 / 10000;
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) worst = std::max(worst, std::abs(freq[i] - p[i]));
  const bool ok = outside == 0 && draws == 10000 && argmax_miss == 0 && worst <= 0.03;
  return {ok, "out-of-nucleus " + std::to_string(outside) + "/" + std::to_string(draws) + ", argmax misses " +
                  std::to_string(argmax_miss) + fmt(", top_p=1 max freq error %.4f", worst)};
}

Outcome fluency_identity() {
  const auto& ctx = cctest::reward_context();
  const auto policy = cctest::warm_policy();
  const auto posts = cctest::fixture_posts();
  double worst = 0.0;
  int n = 0;
  for (int i = 0; n < 100 && i < 1000; ++i) {
    policy::GenerationConfig g;
    g.seed = static_cast<std::uint64_t>(i);
    std::string text;
    try {
      text = policy::generate(*policy, posts[i % posts.size()], g).text;
    } catch (const policy::EmptyGenerationError&) {
      continue;
    }
    worst = std::max(worst, std::abs(rewards::fluency_reward(ctx, text) * rewards::perplexity(ctx, text) - 1.0));
    ++n;
  }
  auto flat_model = *cctest::reference_model();
  auto& params = flat_model.network().parameters();
  params.value(params.index_of("w_head")).setZero();
  auto uniform = std::make_shared<const policy::PolicyModel>(std::move(flat_model));
  using classifiers::Task;
  const auto uctx = rewards::make_context(cctest::classifier(Task::politeness), cctest::classifier(Task::refutation),
                                          cctest::classifier(Task::evidence), uniform);
  const double vocab = static_cast<double>(uniform->tokenizer().vocab_size());
  double uworst = 0.0;
  for (const auto& p : posts) uworst = std::max(uworst, std::abs(rewards::fluency_reward(uctx, p) - 1.0 / vocab));
  const bool ok = n == 100 && worst <= 1e-9 && uworst <= 1e-12;
  return {ok, fmt("%g samples, max |f*ppl-1| = %.3g; uniform LM max |f-1/V| = %.3g", n, worst, uworst)};
}

Outcome warm_start_oracle() {
  const auto pairs = cctest::fixture_text_pairs();
  const policy::TextPair one = pairs.front();
  auto single = policy::PolicyModel::create(cctest::warm_policy()->tokenizer(), cctest::desk_dims(), 21);
  policy::WarmStartConfig cfg;
  cfg.seed = 21;
  int epochs_used = -1;
  for (int done = 0; done < 200;) {
    cfg.epochs = 20;
    const std::vector<policy::TextPair> batch{one};
    policy::warm_start(single, std::span<const policy::TextPair>(batch), cfg);
    done += cfg.epochs;
    if (policy::greedy_decode(single, one.post).text == one.response) {
      epochs_used = done;
      break;
    }
  }
  auto model = policy::PolicyModel::create(cctest::warm_policy()->tokenizer(), cctest::desk_dims(), 22);
  cfg.epochs = 40;
  cfg.seed = 22;
  const auto report = policy::warm_start(model, std::span<const policy::TextPair>(pairs), cfg);
  const bool ok = epochs_used > 0 && report.used == 50 && report.final_loss < 0.5 * report.initial_loss;
  return {ok, fmt("verbatim after %g epochs; 50-pair CE %.3f -> %.3f", epochs_used, report.initial_loss,
                  report.final_loss)};
}

Outcome directional_ablation() {
  using evaluation::VariantName;
  const auto posts = cctest::fixture_posts();
  std::vector<std::string> eval_posts;
  for (int r = 0; r < 4; ++r) eval_posts.insert(eval_posts.end(), posts.begin(), posts.end());
  const std::vector<evaluation::AblationVariant> variants{
      evaluation::make_variant(VariantName::base),          evaluation::make_variant(VariantName::full),
      evaluation::make_variant(VariantName::plus_politeness),
      evaluation::make_variant(VariantName::plus_refutation), evaluation::make_variant(VariantName::plus_evidence)};
  int wins_pol = 0, wins_ref = 0, wins_evi = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    evaluation::AblationConfig cfg;
    cfg.rl.batch_size = 8;
    cfg.rl.total_steps = 150;
    cfg.rl.learning_rate = 5e-4;
    cfg.rl.use_baseline = true;
    cfg.rl.seed = seed;
    cfg.eval_seed = 1000 * seed;
    const auto rows = evaluation::run_ablation(*cctest::warm_policy(), posts, eval_posts, cctest::reward_context(),
                                               variants, cfg);
    std::map<VariantName, evaluation::MetricReport> by;
    for (const auto& row : rows) {
      if (!row.report) return {false, "variant failed: " + row.error.value_or("?")};
      by[row.variant.name] = *row.report;
    }
    const auto& base = by[VariantName::base];
    wins_pol += by[VariantName::plus_politeness].politeness > base.politeness;
    wins_ref += by[VariantName::plus_refutation].refutation > base.refutation;
    wins_evi += by[VariantName::plus_evidence].evidence > base.evidence;
    detail += fmt("[seed %g: pol %.3f->%.3f ", double(seed), base.politeness, by[VariantName::plus_politeness].politeness);
    detail += fmt("ref %.3f->%.3f ", base.refutation, by[VariantName::plus_refutation].refutation);
    detail += fmt("evi %.3f->%.3f] ", base.evidence, by[VariantName::plus_evidence].evidence);
  }
  const bool ok = wins_pol >= 2 && wins_ref >= 2 && wins_evi >= 2;
  return {ok, "wins " + std::to_string(wins_pol) + "/" + std::to_string(wins_ref) + "/" + std::to_string(wins_evi) +
                  " " + detail};
}

class TemplateScorer final : public rewards::TextScorer {
 public:
  explicit TemplateScorer(std::string t) : target_(std::move(t)) {}
  double score(std::string_view, std::string_view response) const override { return response == target_ ? 1.0 : 0.0; }

 private:
  std::string target_;
};

class ZeroScorer final : public rewards::TextScorer {
 public:
  double score(std::string_view, std::string_view) const override { return 0.0; }
};

class FlatFluency final : public rewards::FluencyModel {
 public:
  std::vector<double> unit_logprobs(std::string_view) const override { return {0.0}; }
};

class ConstEmbedder final : public rewards::TextEmbedder {
 public:
  Eigen::VectorXd embed(std::string_view) const override { return Eigen::VectorXd::Ones(2); }
};

Outcome bandit() {
  const std::string post = "Is it true?";
  const std::vector<std::string> templates{"No, that is false.", "Yes.", "Maybe so.", "Who knows."};
  const std::string& target = templates[0];
  std::vector<std::string> texts{post};
  texts.insert(texts.end(), templates.begin(), templates.end());
  policy::ModelDims dims;
  dims.context_window = 48;
  dims.d_model = 16;
  dims.n_layers = 1;
  dims.n_heads = 2;
  dims.mlp_hidden = 32;
  auto model = policy::PolicyModel::create(text::Tokenizer::train(texts, 64), dims, 4);
  std::vector<policy::TextPair> pairs;
  for (const auto& t : templates) pairs.push_back({post, t});
  policy::WarmStartConfig ws;
  ws.epochs = 300;
  ws.batch_size = 4;
  ws.seed = 4;
  policy::warm_start(model, std::span<const policy::TextPair>(pairs), ws);

  rewards::RewardContext ctx;
  ctx.politeness = std::make_shared<TemplateScorer>(target);
  ctx.refutation = std::make_shared<ZeroScorer>();
  ctx.evidence = std::make_shared<ZeroScorer>();
  ctx.fluency = std::make_shared<FlatFluency>();
  ctx.embedder = std::make_shared<ConstEmbedder>();
  const rewards::RewardWeights w{1.0, 0.0, 0.0, 0.0, 0.0};

  rl::RLConfig cfg;
  cfg.batch_size = 8;
  cfg.learning_rate = 5e-4;
  cfg.top_p = 1.0;
  cfg.max_new_tokens = 24;
  cfg.seed = 4;
  cfg.total_steps = 500;
  rl::TrainerState state(model, cfg);
  const std::vector<std::string> batch(cfg.batch_size, post);
  auto prob = [&] { return std::exp(policy::sequence_logprob(model, post, target)); };
  const double p0 = prob();
  double prev = p0;
  int violations = 0;
  for (int step = 1; step <= 500; ++step) {
    rl::rl_step(model, batch, ctx, w, state, cfg);
    if (step % 5 == 0) {
      const double p = prob();
      if (!(p > prev)) ++violations;
      if (std::getenv("CC_TRACE")) std::printf("  step %d p=%.6f\n", step, p);
      prev = p;
    }
  }
  return {violations == 0, fmt("p(template) %.4f -> %.6f, %g non-increasing windows of 100", p0, prev, violations)};
}

Outcome corpus_stats() {
  const auto table = corpus::load_pairs(cctest::data_file("annotation_summary.jsonl"));
  const auto s = corpus::compute_stats(table);
  bool ok = s.n_pairs == 754 && s.politeness.count("polite") == 51 && s.politeness.count("neutral") == 415 &&
            s.politeness.count("rude") == 288 && s.evidence.count("yes") == 181 && s.evidence.count("no") == 573 &&
            s.refuting.count("yes") == 588 && s.refuting.count("no") == 166 &&
            std::floor(s.politeness.proportion("rude") * 10000) == 3819;
  const auto small = corpus::compute_stats(corpus::load_pairs(cctest::data_file("stats_fixture.jsonl")));
  ok = ok && small.n_pairs == 4 && small.politeness.count("polite") == 1 && small.politeness.count("neutral") == 1 &&
       small.politeness.count("rude") == 2 && small.evidence.count("yes") == 1 && small.evidence.count("no") == 3 &&
       small.refuting.count("yes") == 3 && small.refuting.count("no") == 1;
  return {ok, fmt("%g/%g/%g, ", double(s.politeness.count("polite")), double(s.politeness.count("neutral")),
                  double(s.politeness.count("rude"))) +
                  fmt("%g/%g, %g/", double(s.evidence.count("yes")), double(s.evidence.count("no")),
                      double(s.refuting.count("yes"))) +
                  fmt("%g, rude %.3f%% (38.19 truncated); 4-pair fixture matches", double(s.refuting.count("no")),
                      100 * s.politeness.proportion("rude"))};
}

Outcome classifier_sanity() {
  using classifiers::Task;
  std::string detail;
  bool ok = true;
  for (Task t : {Task::politeness, Task::refutation, Task::evidence, Task::misinfo, Task::disbelief}) {
    const auto model = cctest::classifier(t);
    std::vector<classifiers::Example> ex;
    if (t == Task::misinfo)
      ex = classifiers::load_examples(cctest::data_file("misinfo_examples.jsonl"), t);
    else if (t == Task::disbelief)
      ex = classifiers::load_examples(cctest::data_file("disbelief_examples.jsonl"), t);
    else
      ex = classifiers::examples_from_pairs(cctest::classifier_pairs(), t);
    const double acc = classifiers::accuracy(*model, ex);
    const auto r = classifiers::evaluate_classifier(*model, ex);
    const bool good = acc == 1.0 && r.precision == 1.0 && r.recall == 1.0 && r.f1 == 1.0;
    ok = ok && good;
    detail += std::string(classifiers::to_string(t)) + (good ? " ok; " : fmt(" acc %.3f f1 %.3f; ", acc, r.f1));
  }
  // Hand case: three predicted positive (two correct), two predicted negative (one wrong).
  const auto ref = cctest::classifier(Task::refutation);
  std::vector<classifiers::Example> pos, neg;
  for (const auto& e : classifiers::examples_from_pairs(cctest::classifier_pairs(), Task::refutation)) {
    const bool predicted = ref->probabilities(e.post, e.text)[1] > 0.5;
    (predicted ? pos : neg).push_back(e);
  }
  if (pos.size() < 3 || neg.size() < 2) return {false, "not enough examples for the hand case"};
  std::vector<classifiers::Example> hand{pos[0], pos[1], pos[2], neg[0], neg[1]};
  const int labels[] = {1, 1, 0, 1, 0};
  for (int i = 0; i < 5; ++i) hand[i].label = labels[i];
  const auto r = classifiers::evaluate_classifier(*ref, hand);
  const bool hand_ok = r.precision == 2.0 / 3.0 && r.recall == 2.0 / 3.0 && r.f1 == 2.0 / 3.0;
  detail += fmt("hand case P=%.17g R=%.17g F1=%.17g", r.precision, r.recall, r.f1);
  return {ok && hand_ok, detail};
}

Outcome service_contract() {
  const auto dir = cctest::scratch_dir("acceptance-service");
  const auto ctx_dir = dir / "context";
  std::filesystem::create_directories(ctx_dir);
  using classifiers::Task;
  cctest::classifier(Task::politeness)->save(ctx_dir / "politeness.clf");
  cctest::classifier(Task::refutation)->save(ctx_dir / "refutation.clf");
  cctest::classifier(Task::evidence)->save(ctx_dir / "evidence.clf");
  cctest::reference_model()->save(ctx_dir / "reference.lm");
  cctest::warm_policy()->save(dir / "policy.ccp");
  {
    std::ofstream conf(dir / "service.conf");
    conf << "policy_checkpoint = policy.ccp\ncontext_dir = context\nmax_candidates = 8\n";
  }
  char* cfg = nullptr;
  if (cc_service_config((dir / "service.conf").c_str(), &cfg) != CC_OK) return {false, cc_last_error()};
  const auto config = json::parse(cfg);
  cc_string_free(cfg);
  auto service = ccsvc::Service::from_config(config);

  httplib::Server server;
  service->install(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);

  std::string detail;
  bool ok = true;
  const std::string post = cctest::fixture_posts().front();
  const json req{{"post_text", post}, {"n", 6}, {"seed", 17}};
  auto r1 = client.Post("/generate", req.dump(), "application/json");
  auto r2 = client.Post("/generate", req.dump(), "application/json");
  if (!r1 || !r2 || r1->status != 200 || r2->status != 200) {
    ok = false;
    detail += "generate failed; ";
  } else {
    if (r1->body != r2->body) {
      ok = false;
      detail += "not byte-reproducible; ";
    }
    const auto cands = json::parse(r1->body).at("candidates");
    bool sorted = true, short_enough = true;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (i > 0 && cands[i - 1].at("composite").get<double>() < cands[i].at("composite").get<double>()) sorted = false;
      if (text::codepoint_length(cands[i].at("text").get<std::string>()) > 280) short_enough = false;
    }
    ok = ok && sorted && short_enough && !cands.empty();
    detail += std::to_string(cands.size()) + " candidates, sorted=" + (sorted ? "yes" : "no") +
              ", <=280=" + (short_enough ? "yes" : "no") + "; ";
  }
  auto s = client.Post("/score", json{{"post_text", post}, {"draft_text", post}}.dump(), "application/json");
  if (!s || s->status != 200) {
    ok = false;
    detail += "score failed";
  } else {
    const double coh = json::parse(s->body).at("scores").at("coherence").get<double>();
    ok = ok && coh == 1.0;
    detail += fmt("score(draft == post) coherence = %.17g", coh);
  }
  server.stop();
  th.join();
  std::filesystem::remove_all(dir);
  return {ok, detail};
}

}  // namespace

// Optional arguments restrict the run to the named checks.
int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) g_only.insert(argv[i]);
  run("composite-reward", 1.0, composite_oracle);
  run("policy-gradient-fd", 30.0, gradient_check);
  run("nucleus-sampler", 10.0, nucleus);
  {
    const auto t0 = std::chrono::steady_clock::now();
    cctest::reward_context();
    cctest::warm_policy();
    std::printf("INFO desk models built in %.2fs\n",
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  run("classifier-sanity", 600.0, classifier_sanity);
  run("fluency-perplexity", 5.0, fluency_identity);
  run("warm-start", 600.0, warm_start_oracle);
  run("bandit", 300.0, bandit);
  run("corpus-stats", 60.0, corpus_stats);
  run("directional-ablation", 1800.0, directional_ablation);
  run("service-contract", 300.0, service_contract);
  std::printf("%s: %d failing\n", g_failures == 0 ? "ALL PASS" : "SOME FAIL", g_failures);
  return g_failures == 0 ? 0 : 1;
}
