// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cc::text {

// Reserved token ids shared by every model in the project.
inline constexpr int kBos = 0;
inline constexpr int kEos = 1;
inline constexpr int kSep = 2;
inline constexpr int kUnk = 3;
inline constexpr int kNumSpecial = 4;

// Subword tokenizer: a code-point alphabet plus learned byte-pair merges.
// Merges never cross chunk boundaries, where a chunk is a whitespace run
// followed by a non-whitespace run (" hello", " world").
class Tokenizer {
 public:
  // Alphabet-free tokenizer holding only the reserved tokens.
  Tokenizer();

  // Learns merges until the vocabulary reaches `vocab_size` or no pair occurs
  // at least twice. Ties between equally frequent pairs go to the smallest
  // (left, right) id pair so training is deterministic.
  static Tokenizer train(std::span<const std::string> texts, std::size_t vocab_size);

  // Unknown code points map to kUnk.
  std::vector<int> encode(std::string_view text) const;
  // Unknown code points throw ValidationError.
  std::vector<int> encode_strict(std::string_view text) const;
  // Special tokens decode to nothing.
  std::string decode(std::span<const int> ids) const;

  std::size_t vocab_size() const { return pieces_.size(); }
  const std::string& piece(int id) const { return pieces_.at(static_cast<std::size_t>(id)); }
  // Number of code points a token contributes to decoded text.
  std::size_t piece_length(int id) const { return piece_lengths_.at(static_cast<std::size_t>(id)); }
  bool is_special(int id) const { return id >= 0 && id < kNumSpecial; }

  std::size_t merge_count() const { return merges_.size(); }
  std::string hash() const;

  void write(std::ostream& out) const;
  static Tokenizer read(std::istream& in);

  friend bool operator==(const Tokenizer& a, const Tokenizer& b) {
    return a.alphabet_ == b.alphabet_ && a.merges_ == b.merges_;
  }

 private:
  void rebuild();
  std::vector<int> encode_impl(std::string_view text, bool strict) const;
  void encode_chunk(std::vector<int>& symbols) const;

  std::vector<char32_t> alphabet_;
  std::vector<std::pair<int, int>> merges_;
  std::map<char32_t, int> char_ids_;
  std::map<std::pair<int, int>, int> merge_rank_;
  std::vector<std::string> pieces_;
  std::vector<std::size_t> piece_lengths_;
};

// Splits text into merge chunks; concatenating the chunks restores the text.
std::vector<std::vector<char32_t>> split_chunks(const std::vector<char32_t>& cps);

}  // namespace cc::text
