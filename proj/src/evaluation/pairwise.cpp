// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include "evaluation/pairwise.hpp"

#include <cstdio>
#include <numeric>

#include "common/binary_io.hpp"
#include "common/error.hpp"
#include "common/jsonl.hpp"
#include "nn/random.hpp"

namespace cc::evaluation {

PairwiseEvalSheet export_pairwise_eval(const Generator& a, const Generator& b, std::span<const std::string> posts,
                                       std::size_t n_items, std::uint64_t seed) {
  if (n_items == 0) throw ArgumentError("a sheet needs at least one item");
  if (n_items > posts.size()) throw ArgumentError("more items requested than posts available");
  if (a.id() == b.id()) throw ArgumentError("the two generators must have distinct ids");

  std::vector<std::size_t> order(posts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  nn::Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  PairwiseEvalSheet sheet;
  sheet.seed = seed;
  for (std::size_t i = 0; i < n_items; ++i) {
    const auto& post = posts[order[i]];
    const auto gen_seed = nn::mix_seed(seed, i);
    auto ra = a.generate(post, gen_seed);
    auto rb = b.generate(post, gen_seed);
    char id[32];
    std::snprintf(id, sizeof id, "item-%04zu", i + 1);
    PairwiseItem item{id, post, std::move(ra), std::move(rb), a.id(), b.id()};
    if (rng.below(2) == 1) {
      std::swap(item.response_a, item.response_b);
      std::swap(item.method_a, item.method_b);
    }
    sheet.items.push_back(std::move(item));
  }
  return sheet;
}

nlohmann::json annotator_view(const PairwiseEvalSheet& sheet) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& it : sheet.items) {
    items.push_back({{"item_id", it.item_id}, {"post", it.post}, {"response_A", it.response_a},
                     {"response_B", it.response_b}});
  }
  return {{"question", sheet.question}, {"annotators_per_item", sheet.annotators_per_item}, {"items", items}};
}

nlohmann::json method_mapping(const PairwiseEvalSheet& sheet) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& it : sheet.items) items.push_back({{"item_id", it.item_id}, {"A", it.method_a}, {"B", it.method_b}});
  return {{"seed", sheet.seed}, {"items", items}};
}

void write_sheet(const PairwiseEvalSheet& sheet, const std::filesystem::path& annotator_path,
                 const std::filesystem::path& mapping_path) {
  io::write_text_file(annotator_path, annotator_view(sheet).dump(2) + "\n");
  io::write_text_file(mapping_path, method_mapping(sheet).dump(2) + "\n");
}

Choice parse_choice(std::string_view s) {
  if (s == "first" || s == "A") return Choice::first;
  if (s == "second" || s == "B") return Choice::second;
  if (s == "equal") return Choice::equal;
  throw ValidationError("unknown choice '" + std::string(s) + "'");
}

PairwiseTally tally_pairwise(const nlohmann::json& mapping, std::span<const Judgement> judgements,
                             int annotators_per_item) {
  if (annotators_per_item < 1) throw ArgumentError("annotators per item must be positive");
  std::map<std::string, std::pair<std::string, std::string>> methods;
  for (const auto& it : mapping.at("items")) {
    methods[it.at("item_id").get<std::string>()] = {it.at("A").get<std::string>(), it.at("B").get<std::string>()};
  }
  std::map<std::string, std::vector<Choice>> by_item;
  for (const auto& j : judgements) {
    if (!methods.count(j.item_id)) throw ValidationError("judgement for unknown item " + j.item_id);
    by_item[j.item_id].push_back(j.choice);
  }
  PairwiseTally t;
  for (const auto& [id, ab] : methods) {
    t.wins.emplace(ab.first, 0);
    t.wins.emplace(ab.second, 0);
  }
  for (const auto& [id, ab] : methods) {
    const auto& choices = by_item[id];
    const bool complete = choices.size() == static_cast<std::size_t>(annotators_per_item);
    bool agree = complete;
    for (auto c : choices) agree = agree && c == choices.front();
    if (!agree) {
      ++t.discarded;
      continue;
    }
    ++t.agreed;
    switch (choices.front()) {
      case Choice::first:
        ++t.wins[ab.first];
        break;
      case Choice::second:
        ++t.wins[ab.second];
        break;
      case Choice::equal:
        ++t.equal;
        break;
    }
  }
  return t;
}

std::vector<Judgement> load_judgements(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("no such file: " + path.string());
  std::vector<Judgement> out;
  io::for_each_jsonl(io::read_text_file(path), [&](const nlohmann::json& j) {
    out.push_back({j.at("item_id").get<std::string>(), j.value("annotator", std::string()),
                   parse_choice(j.at("choice").get<std::string>())});
  });
  return out;
}

nlohmann::json to_json(const PairwiseTally& t) {
  return {{"wins", t.wins}, {"equal", t.equal}, {"agreed", t.agreed}, {"discarded", t.discarded}};
}

}  // namespace cc::evaluation
