// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include "classifiers/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numeric>

#include "common/binary_io.hpp"
#include "common/error.hpp"
#include "common/jsonl.hpp"
#include "nn/adam.hpp"
#include "nn/graph.hpp"
#include "nn/random.hpp"

namespace cc::classifiers {

namespace {

constexpr std::string_view kMagic = "CCCL";
constexpr std::uint32_t kVersion = 1;

enum Slot : std::size_t { kEmbed = 0, kWPost, kWResp, kBHidden, kWOut, kBOut };

struct Encoded {
  std::vector<int> post;
  std::vector<int> response;
  int label = 0;
};

int positive_class(Task t) { return t == Task::politeness ? politeness_class::polite : 1; }

void check_arity(Task task, bool has_post) {
  const bool pairwise = arity_of(task) == Arity::text_pair;
  if (pairwise && !has_post) throw ArgumentError(std::string(to_string(task)) + " scoring needs a post");
  if (!pairwise && has_post) throw ArgumentError(std::string(to_string(task)) + " scoring takes the response only");
}

Encoded encode(const text::Tokenizer& tok, Task task, std::string_view post, std::string_view response, int label) {
  if (response.empty()) throw ArgumentError("response text must not be empty");
  Encoded e;
  if (arity_of(task) == Arity::text_pair) {
    if (post.empty()) throw ArgumentError("pairwise example needs a post");
    e.post = tok.encode(post);
  }
  e.response = tok.encode(response);
  e.label = label;
  return e;
}

// B x K log-probabilities for a batch.
nn::Var forward(nn::Graph& g, std::span<const Encoded* const> batch) {
  std::vector<int> ids;
  for (const auto* e : batch) {
    ids.insert(ids.end(), e->post.begin(), e->post.end());
    ids.insert(ids.end(), e->response.begin(), e->response.end());
  }
  const auto b = static_cast<Eigen::Index>(batch.size());
  const auto n = static_cast<Eigen::Index>(ids.size());
  nn::Matrix pool_post = nn::Matrix::Zero(b, n);
  nn::Matrix pool_resp = nn::Matrix::Zero(b, n);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < b; ++i) {
    const auto& e = *batch[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < e.post.size(); ++k) pool_post(i, col++) = 1.0 / static_cast<double>(e.post.size());
    for (std::size_t k = 0; k < e.response.size(); ++k) {
      pool_resp(i, col++) = 1.0 / static_cast<double>(e.response.size());
    }
  }
  const auto emb = g.rows(g.param(kEmbed), ids);
  const auto mp = g.matmul(g.constant(std::move(pool_post)), emb);
  const auto mr = g.matmul(g.constant(std::move(pool_resp)), emb);
  auto pre = g.add(g.matmul(mp, g.param(kWPost)), g.matmul(mr, g.param(kWResp)));
  const auto h = g.tanh(g.add_row(pre, g.param(kBHidden)));
  return g.log_softmax(g.add_row(g.matmul(h, g.param(kWOut)), g.param(kBOut)));
}

Eigen::RowVectorXd mean_embedding(const nn::Matrix& table, const std::vector<int>& ids) {
  Eigen::RowVectorXd m = Eigen::RowVectorXd::Zero(table.cols());
  if (ids.empty()) return m;
  for (int id : ids) m += table.row(id);
  return m / static_cast<double>(ids.size());
}

void check_labels(std::span<const Example> examples, Task task) {
  if (examples.empty()) throw ArgumentError("no training examples");
  const int k = class_count(task);
  std::vector<std::size_t> seen(static_cast<std::size_t>(k), 0);
  for (const auto& e : examples) {
    if (e.label < 0 || e.label >= k) throw ValidationError("label " + std::to_string(e.label) + " out of range");
    ++seen[static_cast<std::size_t>(e.label)];
  }
  const auto present = std::count_if(seen.begin(), seen.end(), [](std::size_t c) { return c > 0; });
  if (present < 2) throw ValidationError("training data must contain at least two classes");
}

}  // namespace

const char* to_string(Task t) {
  switch (t) {
    case Task::politeness:
      return "politeness";
    case Task::refutation:
      return "refutation";
    case Task::evidence:
      return "evidence";
    case Task::misinfo:
      return "misinfo";
    case Task::disbelief:
      break;
  }
  return "disbelief";
}

const char* to_string(Arity a) { return a == Arity::text_pair ? "text_pair" : "single_text"; }

Task parse_task(std::string_view s) {
  for (auto t : {Task::politeness, Task::refutation, Task::evidence, Task::misinfo, Task::disbelief}) {
    if (s == to_string(t)) return t;
  }
  throw ArgumentError("unknown classifier task '" + std::string(s) + "'");
}

Arity arity_of(Task t) {
  return t == Task::refutation || t == Task::evidence ? Arity::text_pair : Arity::single_text;
}

int class_count(Task t) { return t == Task::politeness ? 3 : 2; }

void ClassifierTrainConfig::validate() const {
  if (epochs < 1 || batch_size < 1 || !(learning_rate > 0) || folds < 1 || embed_dim < 1 || hidden < 1) {
    throw ArgumentError("classifier training settings must be positive");
  }
}

ClassifierModel::ClassifierModel(Task task, text::Tokenizer tokenizer, nn::ParameterSet params, std::uint64_t seed)
    : task_(task), tokenizer_(std::move(tokenizer)), params_(std::move(params)), seed_(seed) {
  if (params_.size() != 6) throw ValidationError("classifier parameter layout mismatch");
  if (params_.value(kEmbed).rows() != static_cast<Eigen::Index>(tokenizer_.vocab_size())) {
    throw ValidationError("classifier embedding does not match tokenizer");
  }
  if (params_.value(kWOut).cols() != class_count(task_)) throw ValidationError("classifier head has wrong arity");
}

std::vector<double> ClassifierModel::probabilities(std::optional<std::string_view> post,
                                                   std::string_view response) const {
  check_arity(task_, post.has_value());
  const auto e = encode(tokenizer_, task_, post.value_or(""), response, 0);
  const auto& table = params_.value(kEmbed);
  Eigen::RowVectorXd pre = mean_embedding(table, e.response) * params_.value(kWResp) + params_.value(kBHidden);
  if (!e.post.empty()) pre += mean_embedding(table, e.post) * params_.value(kWPost);
  const Eigen::RowVectorXd h = pre.array().tanh();
  const Eigen::RowVectorXd logits = h * params_.value(kWOut) + params_.value(kBOut);
  const Eigen::RowVectorXd p = (logits.array() - logits.maxCoeff()).exp();
  const double z = p.sum();
  std::vector<double> out(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) out[static_cast<std::size_t>(i)] = p(i) / z;
  return out;
}

void ClassifierModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  io::write_header(out, kMagic, kVersion);
  io::write_string(out, to_string(task_));
  io::write_u64(out, seed_);
  tokenizer_.write(out);
  params_.write(out);
  if (!out) throw IoError("write failed for " + path.string());
  out.close();
  io::write_sidecar(path, {{"kind", "classifier"},
                           {"format_version", kVersion},
                           {"task", to_string(task_)},
                           {"arity", to_string(arity())},
                           {"classes", class_count(task_)},
                           {"seed", seed_},
                           {"vocab_hash", tokenizer_.hash()},
                           {"vocab_size", tokenizer_.vocab_size()}});
}

ClassifierModel ClassifierModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const auto version = io::read_header(in, kMagic);
  if (version != kVersion) throw IoError("unsupported classifier checkpoint version " + std::to_string(version));
  const auto task = parse_task(io::read_string(in));
  const auto seed = io::read_u64(in);
  auto tok = text::Tokenizer::read(in);
  auto params = nn::ParameterSet::read(in);
  if (std::filesystem::exists(io::sidecar_path(path))) {
    const auto meta = io::read_sidecar(path);
    if (meta.value("vocab_hash", tok.hash()) != tok.hash()) {
      throw IoError("sidecar vocabulary hash does not match checkpoint " + path.string());
    }
  }
  return ClassifierModel(task, std::move(tok), std::move(params), seed);
}

double score(const ClassifierModel& model, std::optional<std::string_view> post, std::string_view response) {
  const auto p = model.probabilities(post, response);
  const double s = model.task() == Task::politeness ? p[politeness_class::polite] + 0.5 * p[politeness_class::neutral]
                                                    : p[1];
  return std::clamp(s, 0.0, 1.0);
}

std::vector<Example> balance_classes(std::span<const Example> examples, std::uint64_t seed) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < examples.size(); ++i) (examples[i].label == 1 ? pos : neg).push_back(i);
  auto& major = pos.size() > neg.size() ? pos : neg;
  const auto keep = std::min(pos.size(), neg.size());
  nn::Rng rng(seed);
  for (std::size_t i = major.size(); i > 1; --i) std::swap(major[i - 1], major[rng.below(i)]);
  major.resize(keep);
  std::vector<std::size_t> kept(pos);
  kept.insert(kept.end(), neg.begin(), neg.end());
  std::sort(kept.begin(), kept.end());
  std::vector<Example> out;
  out.reserve(kept.size());
  for (auto i : kept) out.push_back(examples[i]);
  return out;
}

ClassifierModel train_classifier(std::span<const Example> examples, Task task, const ClassifierTrainConfig& config,
                                 const text::Tokenizer* tokenizer) {
  config.validate();
  check_labels(examples, task);
  std::vector<Example> data(examples.begin(), examples.end());
  if (task == Task::evidence) {
    data = balance_classes(data, nn::mix_seed(config.seed, 1));
    check_labels(data, task);
  }

  text::Tokenizer tok;
  if (tokenizer != nullptr) {
    tok = *tokenizer;
  } else {
    std::vector<std::string> texts;
    for (const auto& e : data) {
      if (!e.post.empty()) texts.push_back(e.post);
      texts.push_back(e.text);
    }
    tok = text::Tokenizer::train(texts, config.vocab_size);
  }

  std::vector<Encoded> encoded;
  encoded.reserve(data.size());
  for (const auto& e : data) encoded.push_back(encode(tok, task, e.post, e.text, e.label));

  nn::Rng rng(config.seed);
  const auto v = static_cast<Eigen::Index>(tok.vocab_size());
  const int d = config.embed_dim;
  const int h = config.hidden;
  const int k = class_count(task);
  nn::ParameterSet params;
  params.add("embed", nn::gaussian(v, d, 0.5, rng));
  params.add("w_post", nn::gaussian(d, h, 1.0 / std::sqrt(d), rng));
  params.add("w_resp", nn::gaussian(d, h, 1.0 / std::sqrt(d), rng));
  params.add("b_hidden", nn::Matrix::Zero(1, h));
  params.add("w_out", nn::gaussian(h, k, 1.0 / std::sqrt(h), rng));
  params.add("b_out", nn::Matrix::Zero(1, k));

  nn::AdamConfig adam_cfg;
  adam_cfg.learning_rate = config.learning_rate;
  nn::Adam adam(params, adam_cfg);
  std::vector<std::size_t> order(encoded.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto bs = static_cast<std::size_t>(config.batch_size);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    for (std::size_t start = 0; start < order.size(); start += bs) {
      const auto end = std::min(order.size(), start + bs);
      std::vector<const Encoded*> batch;
      std::vector<std::pair<int, int>> cells;
      for (auto i = start; i < end; ++i) {
        cells.emplace_back(static_cast<int>(batch.size()), encoded[order[i]].label);
        batch.push_back(&encoded[order[i]]);
      }
      std::vector<double> weights(cells.size(), -1.0 / static_cast<double>(cells.size()));
      nn::Graph g(&params);
      const auto loss = g.pick_sum(forward(g, batch), cells, weights);
      auto grads = params.zero_gradients();
      g.backward(loss, grads);
      adam.step(params, grads);
    }
  }
  return ClassifierModel(task, std::move(tok), std::move(params), config.seed);
}

double accuracy(const ClassifierModel& model, std::span<const Example> examples) {
  if (examples.empty()) throw ArgumentError("no examples to measure");
  std::size_t correct = 0;
  for (const auto& e : examples) {
    const auto post = model.arity() == Arity::text_pair ? std::optional<std::string_view>(e.post) : std::nullopt;
    const auto p = model.probabilities(post, e.text);
    const auto best = std::max_element(p.begin(), p.end()) - p.begin();
    correct += best == e.label ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

EvalReport report_from_predictions(std::span<const bool> predicted, std::span<const bool> actual) {
  if (predicted.size() != actual.size()) throw ArgumentError("prediction and label counts differ");
  if (predicted.empty()) throw ArgumentError("no predictions to evaluate");
  EvalReport r;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] && actual[i]) ++r.true_positive;
    if (predicted[i] && !actual[i]) ++r.false_positive;
    if (!predicted[i] && actual[i]) ++r.false_negative;
    if (!predicted[i] && !actual[i]) ++r.true_negative;
  }
  const auto tp = static_cast<double>(r.true_positive);
  if (r.true_positive + r.false_positive > 0) r.precision = tp / static_cast<double>(r.true_positive + r.false_positive);
  if (r.true_positive + r.false_negative > 0) r.recall = tp / static_cast<double>(r.true_positive + r.false_negative);
  // Harmonic mean of precision and recall, written over the counts so that
  // equal precision and recall give back exactly that value.
  const auto denom = 2 * r.true_positive + r.false_positive + r.false_negative;
  if (r.true_positive > 0) r.f1 = 2 * tp / static_cast<double>(denom);
  return r;
}

EvalReport evaluate_classifier(const ClassifierModel& model, std::span<const Example> heldout) {
  if (heldout.empty()) throw ArgumentError("held-out set is empty");
  const int pos = positive_class(model.task());
  const auto n = heldout.size();
  auto predicted = std::make_unique<bool[]>(n);
  auto actual = std::make_unique<bool[]>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = heldout[i];
    const auto post = model.arity() == Arity::text_pair ? std::optional<std::string_view>(e.post) : std::nullopt;
    predicted[i] = model.probabilities(post, e.text)[static_cast<std::size_t>(pos)] > 0.5;
    actual[i] = e.label == pos;
  }
  return report_from_predictions({predicted.get(), n}, {actual.get(), n});
}

nlohmann::json to_json(const EvalReport& r) {
  return {{"precision", r.precision},
          {"recall", r.recall},
          {"f1", r.f1},
          {"tp", r.true_positive},
          {"fp", r.false_positive},
          {"fn", r.false_negative},
          {"tn", r.true_negative}};
}

CrossValidation cross_validate(std::span<const Example> examples, Task task, const ClassifierTrainConfig& config) {
  config.validate();
  if (config.folds < 2) throw ArgumentError("cross-validation needs at least 2 folds");
  const auto k = static_cast<std::size_t>(config.folds);
  if (examples.size() < k) throw ArgumentError("fewer examples than folds");
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  nn::Rng rng(nn::mix_seed(config.seed, 2));
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  CrossValidation cv;
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<Example> train, test;
    for (std::size_t i = 0; i < order.size(); ++i) (i % k == f ? test : train).push_back(examples[order[i]]);
    const auto model = train_classifier(train, task, config);
    cv.folds.push_back(evaluate_classifier(model, test));
  }
  for (const auto& r : cv.folds) {
    cv.mean.precision += r.precision / static_cast<double>(k);
    cv.mean.recall += r.recall / static_cast<double>(k);
    cv.mean.f1 += r.f1 / static_cast<double>(k);
  }
  return cv;
}

std::vector<Example> examples_from_pairs(std::span<const corpus::AnnotatedPair> pairs, Task task) {
  std::vector<Example> out;
  for (const auto& p : pairs) {
    const auto& r = p.response;
    switch (task) {
      case Task::politeness:
        if (r.politeness) {
          const int label = *r.politeness == corpus::Politeness::polite    ? politeness_class::polite
                            : *r.politeness == corpus::Politeness::neutral ? politeness_class::neutral
                                                                            : politeness_class::rude;
          out.push_back({"", r.text, label});
        }
        break;
      case Task::refutation:
        if (r.refuting) out.push_back({p.post.text, r.text, *r.refuting ? 1 : 0});
        break;
      case Task::evidence:
        if (r.evidence) out.push_back({p.post.text, r.text, *r.evidence ? 1 : 0});
        break;
      case Task::misinfo:
      case Task::disbelief:
        throw ArgumentError(std::string(to_string(task)) + " labels are not part of annotated pairs");
    }
  }
  return out;
}

std::vector<Example> load_examples(const std::filesystem::path& path, Task task) {
  if (!std::filesystem::exists(path)) throw IoError("no such file: " + path.string());
  std::vector<Example> out;
  io::for_each_jsonl(io::read_text_file(path), [&](const nlohmann::json& j) {
    Example e;
    e.text = j.at("text").get<std::string>();
    if (j.contains("post") && j["post"].is_string()) e.post = j["post"].get<std::string>();
    const auto& label = j.at("label");
    if (label.is_boolean()) {
      e.label = label.get<bool>() ? 1 : 0;
    } else if (label.is_number_integer()) {
      e.label = label.get<int>();
    } else if (label.is_string() && task == Task::politeness) {
      const auto p = corpus::parse_politeness(label.get<std::string>());
      e.label = p == corpus::Politeness::polite    ? politeness_class::polite
                : p == corpus::Politeness::neutral ? politeness_class::neutral
                                                    : politeness_class::rude;
    } else {
      throw ValidationError("unsupported label");
    }
    if (e.text.empty()) throw ValidationError("empty text");
    if (arity_of(task) == Arity::text_pair && e.post.empty()) throw ValidationError("pairwise example needs a post");
    out.push_back(std::move(e));
  });
  return out;
}

}  // namespace cc::classifiers
