// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace cc::corpus {

inline constexpr std::size_t kResponseCharLimit = 280;

enum class Topic { unknown, bill_gates, microchip, infertility, dna_gene };
enum class PostOrigin { in_the_wild, synthetic_fixture };
enum class ResponseOrigin { in_the_wild, crowdsourced, generated };
enum class Politeness { polite, neutral, rude };

const char* to_string(Topic t);
const char* to_string(PostOrigin o);
const char* to_string(ResponseOrigin o);
const char* to_string(Politeness p);
Topic parse_topic(std::string_view s);
ResponseOrigin parse_response_origin(std::string_view s);
Politeness parse_politeness(std::string_view s);

struct MisinfoPost {
  std::string id;
  std::string text;
  Topic topic = Topic::unknown;
  PostOrigin origin = PostOrigin::in_the_wild;
};

struct CounterResponse {
  std::string text;
  std::optional<Politeness> politeness;
  std::optional<bool> evidence;
  std::optional<bool> refuting;
  ResponseOrigin origin = ResponseOrigin::in_the_wild;

  bool fully_labeled() const { return politeness && evidence && refuting; }
};

struct AnnotatedPair {
  MisinfoPost post;
  CounterResponse response;
};

// Label counts for one annotation dimension. Keys are label names
// ("polite", "neutral", "rude" or "yes", "no").
struct LabelTally {
  std::map<std::string, std::size_t> counts;

  std::size_t labeled() const;
  std::size_t count(const std::string& label) const;
  // count / labeled, or 0 when nothing is labeled.
  double proportion(const std::string& label) const;
};

struct CorpusStats {
  std::size_t n_pairs = 0;
  LabelTally politeness;
  LabelTally evidence;
  LabelTally refuting;
};

struct DatasetSplit {
  std::vector<AnnotatedPair> train;
  std::vector<AnnotatedPair> validation;
  std::vector<AnnotatedPair> test;
  std::uint64_t seed = 0;
};

// Keyword list used to scope posts to the four vaccine topics.
const std::vector<std::string>& default_keywords();
// Topic for a keyword from the default list, unknown otherwise.
Topic keyword_topic(std::string_view keyword);

// Reads line-delimited JSON pairs. Blank lines are skipped; both texts are
// truncated to 280 code points. Throws IoError for an unreadable file and
// ValidationError naming the 1-based line for a malformed record.
std::vector<AnnotatedPair> load_pairs(const std::filesystem::path& path);
std::vector<AnnotatedPair> parse_pairs(std::string_view jsonl);
void save_pairs(const std::filesystem::path& path, std::span<const AnnotatedPair> pairs);

AnnotatedPair pair_from_json(const nlohmann::json& record);
nlohmann::json to_json(const AnnotatedPair& pair);

// Case-insensitive substring filter. Retained posts whose topic is unknown
// take the topic of the first matching keyword that maps to one.
std::vector<MisinfoPost> keyword_filter(std::span<const MisinfoPost> posts, std::span<const std::string> keywords);

// Keeps crowdsourced pairs and pairs with at least one desirable label
// (polite or neutral, evidenced, refuting). Unlabeled generated responses
// are dropped; an in-the-wild pair lacking any label is a ValidationError.
std::vector<AnnotatedPair> filter_clean(std::span<const AnnotatedPair> pairs);

// First `limit` code points.
std::string truncate_to_limit(std::string_view text, std::size_t limit = kResponseCharLimit);

CorpusStats compute_stats(std::span<const AnnotatedPair> pairs);
nlohmann::json to_json(const CorpusStats& stats);

// Seeded shuffle, then floor allocation of validation and test sizes with
// the remainder going to train. Ratios must be positive and sum to 1.
DatasetSplit split(std::span<const AnnotatedPair> pairs, const std::array<double, 3>& ratios, std::uint64_t seed);

}  // namespace cc::corpus
