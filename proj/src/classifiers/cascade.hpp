// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "classifiers/classifier.hpp"
#include "corpus/corpus.hpp"

namespace cc::classifiers {

struct PostThread {
  corpus::MisinfoPost post;
  std::vector<std::string> replies;
};

struct CascadeCandidate {
  corpus::AnnotatedPair pair;
  double misinfo_score = 0.0;
  double disbelief_score = 0.0;
  // Machine-labeled; a person still has to confirm the pair.
  bool pending_verification = true;
};

// Keeps (post, reply) when the misinfo model scores the post above
// `threshold` and the disbelief model scores the reply above it too.
std::vector<CascadeCandidate> cascade_identify_counters(const ClassifierModel& misinfo,
                                                        const ClassifierModel& disbelief,
                                                        std::span<const PostThread> threads, double threshold = 0.5);

// {"post_id", "post_text", "topic"?, "replies": [..]} per line.
std::vector<PostThread> load_threads(const std::filesystem::path& path);
nlohmann::json to_json(const CascadeCandidate& c);

}  // namespace cc::classifiers
