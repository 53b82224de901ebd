// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <string_view>

#include <json.hpp>

namespace cc::io {

// Calls `fn` with each non-blank line parsed as JSON. Parse failures and
// ValidationErrors thrown by `fn` are rethrown as ValidationError prefixed
// with the 1-based line number.
void for_each_jsonl(std::string_view content, const std::function<void(const nlohmann::json&)>& fn);

}  // namespace cc::io
