// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include "common/jsonl.hpp"

#include <string>

#include "common/error.hpp"

namespace cc::io {

void for_each_jsonl(std::string_view content, const std::function<void(const nlohmann::json&)>& fn) {
  std::size_t line_no = 0;
  while (!content.empty()) {
    const auto nl = content.find('\n');
    const auto line = content.substr(0, nl);
    content = nl == std::string_view::npos ? std::string_view{} : content.substr(nl + 1);
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      fn(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

}  // namespace cc::io
