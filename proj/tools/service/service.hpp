// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "countercorrect/countercorrect.h"

namespace ccsvc {

// Handles loaded once at startup and shared by every request.
class Service {
 public:
  // Takes ownership of the handles; `misinfo` may be null.
  Service(cc_policy* policy, cc_reward_context* context, cc_classifier* misinfo, nlohmann::json config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // `config` is the JSON produced by cc_service_config.
  static std::unique_ptr<Service> from_config(const nlohmann::json& config);

  void install(httplib::Server& server) const;
  const std::string& checkpoint_id() const { return checkpoint_id_; }
  const nlohmann::json& config() const { return config_; }

 private:
  void generate(const httplib::Request& req, httplib::Response& res) const;
  void score(const httplib::Request& req, httplib::Response& res) const;
  void health(httplib::Response& res) const;

  cc_policy* policy_;
  cc_reward_context* context_;
  cc_classifier* misinfo_;
  nlohmann::json config_;
  std::string checkpoint_id_;
};

// Blocks until the server stops.
int serve(const Service& service, const std::string& host, int port);

}  // namespace ccsvc
