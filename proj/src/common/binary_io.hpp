// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace cc::io {

// Little-endian primitives for checkpoint payloads. Readers throw IoError on
// truncated input.
void write_u32(std::ostream& out, std::uint32_t v);
void write_u64(std::ostream& out, std::uint64_t v);
void write_f64(std::ostream& out, double v);
void write_string(std::ostream& out, std::string_view s);

std::uint32_t read_u32(std::istream& in);
std::uint64_t read_u64(std::istream& in);
double read_f64(std::istream& in);
std::string read_string(std::istream& in);

// Every checkpoint starts with a four-byte magic and a format version.
void write_header(std::ostream& out, std::string_view magic, std::uint32_t version);
std::uint32_t read_header(std::istream& in, std::string_view magic);

// Checkpoint metadata lives next to the binary as "<path>.json".
std::filesystem::path sidecar_path(const std::filesystem::path& checkpoint);
void write_sidecar(const std::filesystem::path& checkpoint, const nlohmann::json& meta);
nlohmann::json read_sidecar(const std::filesystem::path& checkpoint);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

}  // namespace cc::io
