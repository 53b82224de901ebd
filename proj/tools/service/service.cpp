// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include "service.hpp"

#include <iostream>
#include <stdexcept>

namespace ccsvc {

namespace {

using nlohmann::json;

constexpr const char* kJson = "application/json; charset=utf-8";

int http_status(cc_status s) {
  switch (s) {
    case CC_OK:
      return 200;
    case CC_ERR_ARGUMENT:
    case CC_ERR_VALIDATION:
      return 400;
    case CC_ERR_STATE:
      return 422;
    default:
      return 500;
  }
}

void send_error(httplib::Response& res, int status, const std::string& message, json extra = json::object()) {
  extra["error"] = message;
  res.status = status;
  res.set_content(extra.dump(), kJson);
}

void send_owned(httplib::Response& res, cc_status status, char* body) {
  if (status != CC_OK) {
    send_error(res, http_status(status), cc_last_error());
    return;
  }
  res.status = 200;
  res.set_content(body, kJson);
  cc_string_free(body);
}

std::string take(char* s) {
  std::string out(s);
  cc_string_free(s);
  return out;
}

}  // namespace

Service::Service(cc_policy* policy, cc_reward_context* context, cc_classifier* misinfo, json config)
    : policy_(policy), context_(context), misinfo_(misinfo), config_(std::move(config)) {
  char* info = nullptr;
  if (cc_policy_info(policy_, &info) != CC_OK) {
    const std::string msg = cc_last_error();
    cc_policy_free(policy_);
    cc_reward_context_free(context_);
    cc_classifier_free(misinfo_);
    throw std::runtime_error(msg);
  }
  checkpoint_id_ = json::parse(take(info)).at("id").get<std::string>();
}

Service::~Service() {
  cc_policy_free(policy_);
  cc_reward_context_free(context_);
  cc_classifier_free(misinfo_);
}

std::unique_ptr<Service> Service::from_config(const json& config) {
  const auto policy_path = config.value("policy_checkpoint", std::string());
  const auto context_dir = config.value("context_dir", std::string());
  if (policy_path.empty()) throw std::runtime_error("policy_checkpoint is not configured");
  if (context_dir.empty()) throw std::runtime_error("context_dir is not configured");
  cc_policy* policy = nullptr;
  if (cc_policy_load(policy_path.c_str(), &policy) != CC_OK) throw std::runtime_error(cc_last_error());
  cc_reward_context* ctx = nullptr;
  if (cc_reward_context_load(context_dir.c_str(), &ctx) != CC_OK) {
    const std::string msg = cc_last_error();
    cc_policy_free(policy);
    throw std::runtime_error(msg);
  }
  cc_classifier* misinfo = nullptr;
  if (config.value("misinfo_gate", false)) {
    const auto path = config.at("misinfo_checkpoint").get<std::string>();
    if (cc_classifier_load(path.c_str(), &misinfo) != CC_OK) {
      const std::string msg = cc_last_error();
      cc_policy_free(policy);
      cc_reward_context_free(ctx);
      throw std::runtime_error(msg);
    }
  }
  return std::make_unique<Service>(policy, ctx, misinfo, config);
}

void Service::install(httplib::Server& server) const {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  server.Post("/generate", [this](const httplib::Request& req, httplib::Response& res) { generate(req, res); });
  server.Post("/score", [this](const httplib::Request& req, httplib::Response& res) { score(req, res); });
  server.Get("/health", [this](const httplib::Request&, httplib::Response& res) { health(res); });
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

void Service::generate(const httplib::Request& req, httplib::Response& res) const {
  const auto body = json::parse(req.body, nullptr, false);
  if (!body.is_object()) return send_error(res, 400, "request body must be a JSON object");
  if (!body.contains("post_text") || !body["post_text"].is_string()) {
    return send_error(res, 400, "post_text must be a string");
  }
  json call = {{"post_text", body["post_text"]},
               {"n", body.value("n", json(1))},
               {"seed", body.value("seed", json(0))},
               {"top_p", body.value("top_p", config_.at("top_p"))},
               {"max_new_tokens", config_.at("max_new_tokens")},
               {"temperature", config_.at("temperature")},
               {"weights", config_.at("weights")},
               {"max_candidates", config_.at("max_candidates")}};
  if (misinfo_ != nullptr) {
    const auto post = body["post_text"].get<std::string>();
    double p = 0.0;
    if (cc_classifier_score(misinfo_, nullptr, post.c_str(), &p) != CC_OK) {
      return send_error(res, 400, cc_last_error());
    }
    if (p < 0.5) {
      return send_error(res, 422, "post does not look like misinformation; no response generated",
                        {{"misinfo_score", p}});
    }
  }
  char* out = nullptr;
  const auto s = cc_generate_candidates(policy_, context_, call.dump().c_str(), &out);
  send_owned(res, s, out);
}

void Service::score(const httplib::Request& req, httplib::Response& res) const {
  const auto body = json::parse(req.body, nullptr, false);
  if (!body.is_object()) return send_error(res, 400, "request body must be a JSON object");
  json call = {{"post_text", body.value("post_text", json())},
               {"draft_text", body.value("draft_text", json())},
               {"weights", config_.at("weights")}};
  char* out = nullptr;
  const auto s = cc_score_draft(context_, call.dump().c_str(), &out);
  send_owned(res, s, out);
}

void Service::health(httplib::Response& res) const {
  res.status = 200;
  res.set_content(json{{"status", "ok"}, {"checkpoint_id", checkpoint_id_}}.dump(), kJson);
}

int serve(const Service& service, const std::string& host, int port) {
  httplib::Server server;
  service.install(server);
  std::clog << "listening on " << host << ":" << port << "\n";
  if (!server.listen(host, port)) {
    std::cerr << "cannot bind " << host << ":" << port << "\n";
    return 1;
  }
  return 0;
}

}  // namespace ccsvc
