// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "evaluation/evaluation.hpp"

namespace cc::evaluation {

// Shown verbatim to annotators.
inline constexpr std::string_view kPairwiseQuestion =
    "which response is better when countering the misinformation post: the first, the second, or are they "
    "equally effective?";

struct PairwiseItem {
  std::string item_id;
  std::string post;
  std::string response_a;
  std::string response_b;
  // Hidden mapping; never part of the annotator view.
  std::string method_a;
  std::string method_b;
};

struct PairwiseEvalSheet {
  std::vector<PairwiseItem> items;
  std::string question{kPairwiseQuestion};
  int annotators_per_item = 2;
  std::uint64_t seed = 0;
};

// Samples n_items posts, generates one response from each generator, and
// randomizes which one is shown first.
PairwiseEvalSheet export_pairwise_eval(const Generator& a, const Generator& b, std::span<const std::string> posts,
                                       std::size_t n_items, std::uint64_t seed);

nlohmann::json annotator_view(const PairwiseEvalSheet& sheet);
nlohmann::json method_mapping(const PairwiseEvalSheet& sheet);
void write_sheet(const PairwiseEvalSheet& sheet, const std::filesystem::path& annotator_path,
                 const std::filesystem::path& mapping_path);

enum class Choice { first, second, equal };
Choice parse_choice(std::string_view s);

struct Judgement {
  std::string item_id;
  std::string annotator;
  Choice choice = Choice::equal;
};

struct PairwiseTally {
  std::map<std::string, std::size_t> wins;
  std::size_t equal = 0;
  std::size_t agreed = 0;
  std::size_t discarded = 0;
};

// Items whose annotators disagree, or that lack exactly
// `annotators_per_item` judgements, are discarded.
PairwiseTally tally_pairwise(const nlohmann::json& mapping, std::span<const Judgement> judgements,
                             int annotators_per_item = 2);
std::vector<Judgement> load_judgements(const std::filesystem::path& path);
nlohmann::json to_json(const PairwiseTally& t);

}  // namespace cc::evaluation
