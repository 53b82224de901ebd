// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include "support.hpp"

#include <atomic>
#include <map>
#include <mutex>
#include <set>

#include <unistd.h>

namespace cctest {

namespace fs = std::filesystem;
using namespace cc;

fs::path data_file(const std::string& name) { return fs::path(CC_DATA_DIR) / name; }

fs::path scratch_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto dir = fs::temp_directory_path() /
                   ("cc-test-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

policy::ModelDims desk_dims() {
  policy::ModelDims d;
  d.context_window = 128;
  d.d_model = 32;
  d.n_layers = 2;
  d.n_heads = 4;
  d.mlp_hidden = 64;
  return d;
}

const std::vector<corpus::AnnotatedPair>& fixture_pairs() {
  static const auto pairs = corpus::load_pairs(data_file("fixture_pairs.jsonl"));
  return pairs;
}

const std::vector<corpus::AnnotatedPair>& classifier_pairs() {
  static const auto pairs = corpus::load_pairs(data_file("classifier_pairs.jsonl"));
  return pairs;
}

std::vector<std::string> fixture_posts() {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& p : fixture_pairs())
    if (seen.insert(p.post.text).second) out.push_back(p.post.text);
  return out;
}

std::vector<policy::TextPair> fixture_text_pairs() {
  std::vector<policy::TextPair> out;
  for (const auto& p : fixture_pairs()) out.push_back({p.post.text, p.response.text});
  return out;
}

namespace {

std::vector<classifiers::Example> task_examples(classifiers::Task task) {
  using classifiers::Task;
  switch (task) {
    case Task::misinfo:
      return classifiers::load_examples(data_file("misinfo_examples.jsonl"), task);
    case Task::disbelief:
      return classifiers::load_examples(data_file("disbelief_examples.jsonl"), task);
    default:
      return classifiers::examples_from_pairs(classifier_pairs(), task);
  }
}

text::Tokenizer shared_tokenizer() {
  std::vector<std::string> texts;
  for (const auto& p : fixture_pairs()) {
    texts.push_back(p.post.text);
    texts.push_back(p.response.text);
  }
  for (const auto& p : classifier_pairs()) texts.push_back(p.response.text);
  return text::Tokenizer::train(texts, 512);
}

std::mutex& fixture_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::shared_ptr<const classifiers::ClassifierModel> classifier(classifiers::Task task) {
  std::lock_guard lock(fixture_mutex());
  static std::map<classifiers::Task, std::shared_ptr<const classifiers::ClassifierModel>> cache;
  auto& slot = cache[task];
  if (!slot) {
    classifiers::ClassifierTrainConfig cfg;
    cfg.seed = 11;
    slot = std::make_shared<const classifiers::ClassifierModel>(
        classifiers::train_classifier(task_examples(task), task, cfg));
  }
  return slot;
}

std::shared_ptr<const policy::PolicyModel> reference_model() {
  std::lock_guard lock(fixture_mutex());
  static std::shared_ptr<const policy::PolicyModel> model;
  if (!model) {
    auto m = policy::PolicyModel::create(shared_tokenizer(), desk_dims(), 5);
    std::vector<std::string> texts;
    for (const auto& p : fixture_pairs()) texts.push_back(p.response.text);
    policy::WarmStartConfig cfg;
    cfg.epochs = 10;
    cfg.seed = 5;
    policy::train_reference(m, texts, cfg);
    model = std::make_shared<const policy::PolicyModel>(std::move(m));
  }
  return model;
}

std::shared_ptr<const policy::PolicyModel> warm_policy() {
  std::lock_guard lock(fixture_mutex());
  static std::shared_ptr<const policy::PolicyModel> model;
  if (!model) {
    auto m = policy::PolicyModel::create(shared_tokenizer(), desk_dims(), 3);
    policy::WarmStartConfig cfg;
    cfg.epochs = 40;
    cfg.seed = 3;
    const auto pairs = fixture_text_pairs();
    policy::warm_start(m, std::span<const policy::TextPair>(pairs), cfg);
    model = std::make_shared<const policy::PolicyModel>(std::move(m));
  }
  return model;
}

const rewards::RewardContext& reward_context() {
  using classifiers::Task;
  static const rewards::RewardContext ctx = rewards::make_context(
      classifier(Task::politeness), classifier(Task::refutation), classifier(Task::evidence), reference_model());
  return ctx;
}

fs::path model_bundle() {
  using classifiers::Task;
  static const fs::path dir = [] {
    const auto d = scratch_dir("bundle");
    fs::create_directories(d / "context");
    classifier(Task::politeness)->save(d / "context" / "politeness.clf");
    classifier(Task::refutation)->save(d / "context" / "refutation.clf");
    classifier(Task::evidence)->save(d / "context" / "evidence.clf");
    reference_model()->save(d / "context" / "reference.lm");
    classifier(Task::misinfo)->save(d / "misinfo.clf");
    warm_policy()->save(d / "policy.ccp");
    return d;
  }();
  return dir;
}

}  // namespace cctest
