// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "classifiers/classifier.hpp"
#include "corpus/corpus.hpp"
#include "policy/policy.hpp"
#include "rewards/rewards.hpp"

namespace cctest {

std::filesystem::path data_file(const std::string& name);

// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& tag);

// Model sizes shared by tests that need a working decoder.
cc::policy::ModelDims desk_dims();

// Lazily built, process-wide fixtures. Built with fixed seeds, so every
// call returns the same models.
const std::vector<cc::corpus::AnnotatedPair>& fixture_pairs();
const std::vector<cc::corpus::AnnotatedPair>& classifier_pairs();
std::vector<std::string> fixture_posts();
std::vector<cc::policy::TextPair> fixture_text_pairs();

std::shared_ptr<const cc::classifiers::ClassifierModel> classifier(cc::classifiers::Task task);
std::shared_ptr<const cc::policy::PolicyModel> reference_model();
std::shared_ptr<const cc::policy::PolicyModel> warm_policy();
const cc::rewards::RewardContext& reward_context();

// Directory holding the models above on disk: policy.ccp, misinfo.clf and
// context/{politeness,refutation,evidence}.clf plus context/reference.lm.
// Written once per process.
std::filesystem::path model_bundle();

}  // namespace cctest
