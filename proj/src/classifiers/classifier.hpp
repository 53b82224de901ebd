// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "corpus/corpus.hpp"
#include "nn/parameters.hpp"
#include "text/tokenizer.hpp"

namespace cc::classifiers {

enum class Task { politeness, refutation, evidence, misinfo, disbelief };
enum class Arity { single_text, text_pair };

const char* to_string(Task t);
const char* to_string(Arity a);
Task parse_task(std::string_view s);
Arity arity_of(Task t);
// 3 for politeness (rude, neutral, polite), 2 otherwise (negative, positive).
int class_count(Task t);

namespace politeness_class {
inline constexpr int rude = 0;
inline constexpr int neutral = 1;
inline constexpr int polite = 2;
}  // namespace politeness_class

struct Example {
  std::string post;  // empty for single-text tasks
  std::string text;
  int label = 0;
};

struct ClassifierTrainConfig {
  int epochs = 80;
  int batch_size = 16;
  double learning_rate = 0.02;
  std::uint64_t seed = 0;
  int folds = 5;
  int embed_dim = 32;
  int hidden = 32;
  // Used only when no tokenizer is supplied to train_classifier.
  std::size_t vocab_size = 400;

  void validate() const;
};

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t true_positive = 0;
  std::size_t false_positive = 0;
  std::size_t false_negative = 0;
  std::size_t true_negative = 0;
};

// Mean-pooled token embeddings of the post and of the response, a tanh
// hidden layer over both pools and a softmax head. Immutable once built.
class ClassifierModel {
 public:
  ClassifierModel(Task task, text::Tokenizer tokenizer, nn::ParameterSet params, std::uint64_t seed);

  Task task() const { return task_; }
  Arity arity() const { return arity_of(task_); }
  std::uint64_t seed() const { return seed_; }
  const text::Tokenizer& tokenizer() const { return tokenizer_; }
  const nn::ParameterSet& parameters() const { return params_; }

  // Class probabilities. `post` must be present iff the task is pairwise.
  std::vector<double> probabilities(std::optional<std::string_view> post, std::string_view response) const;

  void save(const std::filesystem::path& path) const;
  static ClassifierModel load(const std::filesystem::path& path);

 private:
  Task task_;
  text::Tokenizer tokenizer_;
  nn::ParameterSet params_;
  std::uint64_t seed_;
};

// Positive-class probability; for politeness P(polite) + 0.5 * P(neutral).
double score(const ClassifierModel& model, std::optional<std::string_view> post, std::string_view response);

// Drops majority-class examples (seeded) until both classes are equal.
std::vector<Example> balance_classes(std::span<const Example> examples, std::uint64_t seed);

// Evidence data are balanced before training. Without a tokenizer one is
// trained on the example texts.
ClassifierModel train_classifier(std::span<const Example> examples, Task task, const ClassifierTrainConfig& config,
                                 const text::Tokenizer* tokenizer = nullptr);

// Fraction of examples whose argmax class equals the label.
double accuracy(const ClassifierModel& model, std::span<const Example> examples);

// A prediction counts as positive when the positive-class probability
// (P(polite) for politeness) exceeds 0.5; labels resolve the same way.
EvalReport evaluate_classifier(const ClassifierModel& model, std::span<const Example> heldout);
EvalReport report_from_predictions(std::span<const bool> predicted, std::span<const bool> actual);
nlohmann::json to_json(const EvalReport& r);

struct CrossValidation {
  std::vector<EvalReport> folds;
  EvalReport mean;
};
CrossValidation cross_validate(std::span<const Example> examples, Task task, const ClassifierTrainConfig& config);

// Labeled examples for a task from annotated pairs; pairs without the
// relevant label are skipped.
std::vector<Example> examples_from_pairs(std::span<const corpus::AnnotatedPair> pairs, Task task);

// Reads {"post"?, "text", "label"} records; labels are ints, booleans, or
// politeness names.
std::vector<Example> load_examples(const std::filesystem::path& path, Task task);

}  // namespace cc::classifiers
