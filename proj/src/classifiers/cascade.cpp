// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include "classifiers/cascade.hpp"

#include "common/binary_io.hpp"
#include "common/error.hpp"
#include "common/jsonl.hpp"

namespace cc::classifiers {

std::vector<CascadeCandidate> cascade_identify_counters(const ClassifierModel& misinfo,
                                                        const ClassifierModel& disbelief,
                                                        std::span<const PostThread> threads, double threshold) {
  if (misinfo.task() != Task::misinfo) throw ArgumentError("first cascade stage must be a misinfo classifier");
  if (disbelief.task() != Task::disbelief) throw ArgumentError("second cascade stage must be a disbelief classifier");
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw ArgumentError("threshold must lie in [0, 1]");
  std::vector<CascadeCandidate> out;
  for (const auto& thread : threads) {
    if (thread.replies.empty()) continue;
    const double m = score(misinfo, std::nullopt, thread.post.text);
    if (!(m > threshold)) continue;
    for (const auto& reply : thread.replies) {
      const double d = score(disbelief, std::nullopt, reply);
      if (!(d > threshold)) continue;
      CascadeCandidate c;
      c.pair.post = thread.post;
      c.pair.response.text = reply;
      c.pair.response.origin = corpus::ResponseOrigin::in_the_wild;
      c.misinfo_score = m;
      c.disbelief_score = d;
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<PostThread> load_threads(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("no such file: " + path.string());
  std::vector<PostThread> out;
  io::for_each_jsonl(io::read_text_file(path), [&](const nlohmann::json& j) {
    PostThread t;
    t.post.id = j.value("post_id", std::string());
    t.post.text = corpus::truncate_to_limit(j.at("post_text").get<std::string>());
    if (t.post.text.empty()) throw ValidationError("empty post text");
    if (j.contains("topic") && j["topic"].is_string()) t.post.topic = corpus::parse_topic(j["topic"].get<std::string>());
    for (const auto& r : j.value("replies", nlohmann::json::array())) {
      t.replies.push_back(corpus::truncate_to_limit(r.get<std::string>()));
    }
    out.push_back(std::move(t));
  });
  return out;
}

nlohmann::json to_json(const CascadeCandidate& c) {
  return {{"post_id", c.pair.post.id},
          {"post_text", c.pair.post.text},
          {"response_text", c.pair.response.text},
          {"misinfo_score", c.misinfo_score},
          {"disbelief_score", c.disbelief_score},
          {"pending_verification", c.pending_verification}};
}

}  // namespace cc::classifiers
