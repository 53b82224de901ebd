// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cc::text {

// Decodes UTF-8 into code points. Malformed sequences throw ValidationError.
std::vector<char32_t> decode_utf8(std::string_view s);
std::string encode_utf8(char32_t cp);
std::string encode_utf8(const std::vector<char32_t>& cps);

// Length in code points. Assumes valid UTF-8.
std::size_t codepoint_length(std::string_view s);

// First `limit` code points of `s`, or `s` itself when it already fits.
std::string truncate_codepoints(std::string_view s, std::size_t limit);

bool is_space(char32_t cp);

// ASCII case folding; non-ASCII bytes pass through unchanged.
std::string ascii_lower(std::string_view s);

}  // namespace cc::text
