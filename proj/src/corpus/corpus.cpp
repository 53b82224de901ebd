// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include "corpus/corpus.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include "common/binary_io.hpp"
#include "common/error.hpp"
#include "common/jsonl.hpp"
#include "nn/random.hpp"
#include "text/utf8.hpp"

namespace cc::corpus {

const char* to_string(Topic t) {
  switch (t) {
    case Topic::bill_gates:
      return "bill_gates";
    case Topic::microchip:
      return "microchip";
    case Topic::infertility:
      return "infertility";
    case Topic::dna_gene:
      return "dna_gene";
    case Topic::unknown:
      break;
  }
  return "unknown";
}

const char* to_string(PostOrigin o) {
  return o == PostOrigin::synthetic_fixture ? "synthetic_fixture" : "in_the_wild";
}

const char* to_string(ResponseOrigin o) {
  switch (o) {
    case ResponseOrigin::crowdsourced:
      return "crowdsourced";
    case ResponseOrigin::generated:
      return "generated";
    case ResponseOrigin::in_the_wild:
      break;
  }
  return "in_the_wild";
}

const char* to_string(Politeness p) {
  switch (p) {
    case Politeness::polite:
      return "polite";
    case Politeness::neutral:
      return "neutral";
    case Politeness::rude:
      break;
  }
  return "rude";
}

Topic parse_topic(std::string_view s) {
  if (s == "bill_gates") return Topic::bill_gates;
  if (s == "microchip") return Topic::microchip;
  if (s == "infertility") return Topic::infertility;
  if (s == "dna_gene") return Topic::dna_gene;
  if (s == "unknown" || s.empty()) return Topic::unknown;
  throw ValidationError("unknown topic '" + std::string(s) + "'");
}

ResponseOrigin parse_response_origin(std::string_view s) {
  if (s == "in_the_wild") return ResponseOrigin::in_the_wild;
  if (s == "crowdsourced") return ResponseOrigin::crowdsourced;
  if (s == "generated") return ResponseOrigin::generated;
  throw ValidationError("unknown origin '" + std::string(s) + "'");
}

Politeness parse_politeness(std::string_view s) {
  if (s == "polite") return Politeness::polite;
  if (s == "neutral") return Politeness::neutral;
  if (s == "rude") return Politeness::rude;
  throw ValidationError("unknown politeness label '" + std::string(s) + "'");
}

std::size_t LabelTally::labeled() const {
  std::size_t n = 0;
  for (const auto& [_, c] : counts) n += c;
  return n;
}

std::size_t LabelTally::count(const std::string& label) const {
  const auto it = counts.find(label);
  return it == counts.end() ? 0 : it->second;
}

double LabelTally::proportion(const std::string& label) const {
  const auto n = labeled();
  return n == 0 ? 0.0 : static_cast<double>(count(label)) / static_cast<double>(n);
}

const std::vector<std::string>& default_keywords() {
  static const std::vector<std::string> kKeywords = {"bill gates", "fertility", "pregnancy", "pregnant",
                                                     "gene",       "dna",       "gene therapy", "microchip"};
  return kKeywords;
}

Topic keyword_topic(std::string_view keyword) {
  const auto k = text::ascii_lower(keyword);
  if (k == "bill gates") return Topic::bill_gates;
  if (k == "fertility" || k == "pregnancy" || k == "pregnant") return Topic::infertility;
  if (k == "gene" || k == "dna" || k == "gene therapy") return Topic::dna_gene;
  if (k == "microchip") return Topic::microchip;
  return Topic::unknown;
}

namespace {

std::string require_text(const nlohmann::json& rec, const char* key) {
  if (!rec.contains(key) || !rec[key].is_string()) {
    throw ValidationError(std::string("field '") + key + "' must be a string");
  }
  auto s = rec[key].get<std::string>();
  text::decode_utf8(s);  // rejects malformed UTF-8
  if (s.empty()) throw ValidationError(std::string("field '") + key + "' must not be empty");
  return s;
}

std::optional<bool> optional_bool(const nlohmann::json& rec, const char* key) {
  if (!rec.contains(key) || rec[key].is_null()) return std::nullopt;
  if (!rec[key].is_boolean()) throw ValidationError(std::string("field '") + key + "' must be a boolean or null");
  return rec[key].get<bool>();
}

}  // namespace

AnnotatedPair pair_from_json(const nlohmann::json& rec) {
  if (!rec.is_object()) throw ValidationError("record is not a JSON object");
  AnnotatedPair p;
  p.post.id = rec.contains("post_id") && rec["post_id"].is_string() ? rec["post_id"].get<std::string>() : "";
  if (rec.contains("post_id") && rec["post_id"].is_number_integer()) {
    p.post.id = std::to_string(rec["post_id"].get<long long>());
  }
  p.post.text = truncate_to_limit(require_text(rec, "post_text"));
  if (rec.contains("topic") && !rec["topic"].is_null()) {
    if (!rec["topic"].is_string()) throw ValidationError("field 'topic' must be a string");
    p.post.topic = parse_topic(rec["topic"].get<std::string>());
  }
  if (rec.contains("post_origin") && rec["post_origin"].is_string() &&
      rec["post_origin"].get<std::string>() == "synthetic_fixture") {
    p.post.origin = PostOrigin::synthetic_fixture;
  }
  p.response.text = truncate_to_limit(require_text(rec, "response_text"));
  if (rec.contains("politeness") && !rec["politeness"].is_null()) {
    if (!rec["politeness"].is_string()) throw ValidationError("field 'politeness' must be a string or null");
    p.response.politeness = parse_politeness(rec["politeness"].get<std::string>());
  }
  p.response.evidence = optional_bool(rec, "evidence");
  p.response.refuting = optional_bool(rec, "refuting");
  if (!rec.contains("origin") || !rec["origin"].is_string()) throw ValidationError("field 'origin' must be a string");
  p.response.origin = parse_response_origin(rec["origin"].get<std::string>());
  if (p.response.origin == ResponseOrigin::crowdsourced) {
    if (!p.response.fully_labeled()) throw ValidationError("crowdsourced responses must carry all three labels");
    const bool desirable = p.response.politeness != Politeness::rude || *p.response.evidence || *p.response.refuting;
    if (!desirable) throw ValidationError("crowdsourced response has no desirable property");
  }
  return p;
}

nlohmann::json to_json(const AnnotatedPair& p) {
  nlohmann::json j;
  j["post_id"] = p.post.id;
  j["post_text"] = p.post.text;
  j["topic"] = to_string(p.post.topic);
  j["response_text"] = p.response.text;
  j["politeness"] = p.response.politeness ? nlohmann::json(to_string(*p.response.politeness)) : nlohmann::json();
  j["evidence"] = p.response.evidence ? nlohmann::json(*p.response.evidence) : nlohmann::json();
  j["refuting"] = p.response.refuting ? nlohmann::json(*p.response.refuting) : nlohmann::json();
  j["origin"] = to_string(p.response.origin);
  if (p.post.origin == PostOrigin::synthetic_fixture) j["post_origin"] = "synthetic_fixture";
  return j;
}

std::vector<AnnotatedPair> parse_pairs(std::string_view jsonl) {
  std::vector<AnnotatedPair> out;
  io::for_each_jsonl(jsonl, [&](const nlohmann::json& rec) { out.push_back(pair_from_json(rec)); });
  return out;
}

std::vector<AnnotatedPair> load_pairs(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("no such file: " + path.string());
  return parse_pairs(io::read_text_file(path));
}

void save_pairs(const std::filesystem::path& path, std::span<const AnnotatedPair> pairs) {
  std::string out;
  for (const auto& p : pairs) out += to_json(p).dump() + "\n";
  io::write_text_file(path, out);
}

std::vector<MisinfoPost> keyword_filter(std::span<const MisinfoPost> posts, std::span<const std::string> keywords) {
  if (keywords.empty()) throw ArgumentError("keyword list must not be empty");
  std::vector<std::string> lowered;
  for (const auto& k : keywords) lowered.push_back(text::ascii_lower(k));
  std::vector<MisinfoPost> out;
  for (const auto& post : posts) {
    const auto text = text::ascii_lower(post.text);
    bool matched = false;
    Topic topic = Topic::unknown;
    for (const auto& k : lowered) {
      if (k.empty() || text.find(k) == std::string::npos) continue;
      matched = true;
      if (topic == Topic::unknown) topic = keyword_topic(k);
    }
    if (!matched) continue;
    auto kept = post;
    if (kept.topic == Topic::unknown) kept.topic = topic;
    out.push_back(std::move(kept));
  }
  return out;
}

std::vector<AnnotatedPair> filter_clean(std::span<const AnnotatedPair> pairs) {
  std::vector<AnnotatedPair> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& r = pairs[i].response;
    if (r.origin == ResponseOrigin::crowdsourced) {
      out.push_back(pairs[i]);
      continue;
    }
    if (!r.fully_labeled()) {
      if (r.origin == ResponseOrigin::generated) continue;
      throw ValidationError("pair " + std::to_string(i) + " (" + pairs[i].post.id + ") is missing labels");
    }
    if (*r.politeness != Politeness::rude || *r.evidence || *r.refuting) out.push_back(pairs[i]);
  }
  return out;
}

std::string truncate_to_limit(std::string_view text, std::size_t limit) {
  if (limit == 0) throw ArgumentError("limit must be positive");
  return text::truncate_codepoints(text, limit);
}

CorpusStats compute_stats(std::span<const AnnotatedPair> pairs) {
  CorpusStats s;
  s.n_pairs = pairs.size();
  for (const char* k : {"polite", "neutral", "rude"}) s.politeness.counts[k] = 0;
  for (auto* tally : {&s.evidence, &s.refuting}) {
    tally->counts["yes"] = 0;
    tally->counts["no"] = 0;
  }
  for (const auto& p : pairs) {
    const auto& r = p.response;
    if (r.politeness) ++s.politeness.counts[to_string(*r.politeness)];
    if (r.evidence) ++s.evidence.counts[*r.evidence ? "yes" : "no"];
    if (r.refuting) ++s.refuting.counts[*r.refuting ? "yes" : "no"];
  }
  return s;
}

nlohmann::json to_json(const CorpusStats& s) {
  auto tally = [](const LabelTally& t) {
    nlohmann::json counts = nlohmann::json::object();
    nlohmann::json props = nlohmann::json::object();
    for (const auto& [k, v] : t.counts) {
      counts[k] = v;
      props[k] = t.proportion(k);
    }
    return nlohmann::json{{"counts", counts}, {"proportions", props}, {"labeled", t.labeled()}};
  };
  return {{"n_pairs", s.n_pairs},
          {"politeness", tally(s.politeness)},
          {"evidence", tally(s.evidence)},
          {"refuting", tally(s.refuting)}};
}

DatasetSplit split(std::span<const AnnotatedPair> pairs, const std::array<double, 3>& ratios, std::uint64_t seed) {
  for (double r : ratios) {
    if (!(r > 0.0)) throw ArgumentError("split ratios must be positive");
  }
  if (std::abs(ratios[0] + ratios[1] + ratios[2] - 1.0) > 1e-9) throw ArgumentError("split ratios must sum to 1");
  if (pairs.size() < 3) throw ArgumentError("need at least 3 pairs to split");

  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  nn::Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  const auto n = static_cast<double>(pairs.size());
  // The small slack keeps products such as 10 * 0.1 from flooring to 0.
  const auto n_val = static_cast<std::size_t>(std::floor(n * ratios[1] + 1e-9));
  const auto n_test = static_cast<std::size_t>(std::floor(n * ratios[2] + 1e-9));
  const auto n_train = pairs.size() - n_val - n_test;

  DatasetSplit out;
  out.seed = seed;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& p = pairs[order[i]];
    if (i < n_train) {
      out.train.push_back(p);
    } else if (i < n_train + n_val) {
      out.validation.push_back(p);
    } else {
      out.test.push_back(p);
    }
  }
  return out;
}

}  // namespace cc::corpus
