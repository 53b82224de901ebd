// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include "text/tokenizer.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "common/binary_io.hpp"
#include "common/error.hpp"
#include "text/utf8.hpp"

namespace cc::text {
namespace {

constexpr const char* kSpecialPieces[kNumSpecial] = {"<bos>", "<eos>", "<sep>", "<unk>"};
constexpr std::string_view kMagic = "CCTK";
constexpr std::uint32_t kVersion = 1;

}  // namespace

Tokenizer::Tokenizer() { rebuild(); }

std::vector<std::vector<char32_t>> split_chunks(const std::vector<char32_t>& cps) {
  std::vector<std::vector<char32_t>> chunks;
  std::vector<char32_t> current;
  bool prev_space = false;
  for (char32_t cp : cps) {
    const bool space = is_space(cp);
    if (space && !prev_space && !current.empty()) {
      chunks.push_back(std::move(current));
      current.clear();
    }
    current.push_back(cp);
    prev_space = space;
  }
  if (!current.empty()) chunks.push_back(std::move(current));
  return chunks;
}

Tokenizer Tokenizer::train(std::span<const std::string> texts, std::size_t vocab_size) {
  std::map<std::vector<char32_t>, std::size_t> chunk_counts;
  std::set<char32_t> alphabet;
  for (const auto& t : texts) {
    const auto cps = decode_utf8(t);
    alphabet.insert(cps.begin(), cps.end());
    for (auto& chunk : split_chunks(cps)) ++chunk_counts[std::move(chunk)];
  }

  Tokenizer tok;
  tok.alphabet_.assign(alphabet.begin(), alphabet.end());
  tok.rebuild();

  std::vector<std::vector<int>> words;
  std::vector<std::size_t> freq;
  for (const auto& [chunk, count] : chunk_counts) {
    std::vector<int> ids;
    ids.reserve(chunk.size());
    for (char32_t cp : chunk) ids.push_back(tok.char_ids_.at(cp));
    words.push_back(std::move(ids));
    freq.push_back(count);
  }

  while (tok.pieces_.size() < vocab_size) {
    std::map<std::pair<int, int>, std::size_t> pair_counts;
    for (std::size_t w = 0; w < words.size(); ++w) {
      const auto& ids = words[w];
      for (std::size_t i = 0; i + 1 < ids.size(); ++i) pair_counts[{ids[i], ids[i + 1]}] += freq[w];
    }
    std::pair<int, int> best{-1, -1};
    std::size_t best_count = 1;
    for (const auto& [pair, count] : pair_counts) {
      if (count > best_count) {  // map order breaks ties toward the smallest pair
        best = pair;
        best_count = count;
      }
    }
    if (best.first < 0) break;

    const int new_id = static_cast<int>(tok.pieces_.size());
    tok.merges_.push_back(best);
    tok.merge_rank_[best] = static_cast<int>(tok.merges_.size() - 1);
    tok.pieces_.push_back(tok.pieces_[static_cast<std::size_t>(best.first)] +
                          tok.pieces_[static_cast<std::size_t>(best.second)]);
    tok.piece_lengths_.push_back(tok.piece_lengths_[static_cast<std::size_t>(best.first)] +
                                 tok.piece_lengths_[static_cast<std::size_t>(best.second)]);
    for (auto& ids : words) {
      std::vector<int> merged;
      merged.reserve(ids.size());
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i + 1 < ids.size() && ids[i] == best.first && ids[i + 1] == best.second) {
          merged.push_back(new_id);
          ++i;
        } else {
          merged.push_back(ids[i]);
        }
      }
      ids = std::move(merged);
    }
  }
  return tok;
}

void Tokenizer::rebuild() {
  pieces_.clear();
  piece_lengths_.clear();
  char_ids_.clear();
  merge_rank_.clear();
  for (const char* s : kSpecialPieces) {
    pieces_.emplace_back(s);
    piece_lengths_.push_back(0);
  }
  for (char32_t cp : alphabet_) {
    char_ids_[cp] = static_cast<int>(pieces_.size());
    pieces_.push_back(encode_utf8(cp));
    piece_lengths_.push_back(1);
  }
  for (std::size_t r = 0; r < merges_.size(); ++r) {
    const auto [a, b] = merges_[r];
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= pieces_.size() ||
        static_cast<std::size_t>(b) >= pieces_.size()) {
      throw IoError("tokenizer merge references unknown token");
    }
    merge_rank_[merges_[r]] = static_cast<int>(r);
    pieces_.push_back(pieces_[static_cast<std::size_t>(a)] + pieces_[static_cast<std::size_t>(b)]);
    piece_lengths_.push_back(piece_lengths_[static_cast<std::size_t>(a)] +
                             piece_lengths_[static_cast<std::size_t>(b)]);
  }
}

void Tokenizer::encode_chunk(std::vector<int>& symbols) const {
  const int first_merge_id = kNumSpecial + static_cast<int>(alphabet_.size());
  while (symbols.size() > 1) {
    int best_rank = -1;
    std::size_t best_pos = 0;
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
      const auto it = merge_rank_.find({symbols[i], symbols[i + 1]});
      if (it != merge_rank_.end() && (best_rank < 0 || it->second < best_rank)) {
        best_rank = it->second;
        best_pos = i;
      }
    }
    if (best_rank < 0) break;
    symbols[best_pos] = first_merge_id + best_rank;
    symbols.erase(symbols.begin() + static_cast<std::ptrdiff_t>(best_pos) + 1);
  }
}

std::vector<int> Tokenizer::encode_impl(std::string_view text, bool strict) const {
  const auto cps = decode_utf8(text);
  std::vector<int> out;
  out.reserve(cps.size());
  for (const auto& chunk : split_chunks(cps)) {
    std::vector<int> symbols;
    symbols.reserve(chunk.size());
    for (char32_t cp : chunk) {
      const auto it = char_ids_.find(cp);
      if (it != char_ids_.end()) {
        symbols.push_back(it->second);
      } else if (strict) {
        throw ValidationError("character U+" + io::hex64(cp).substr(10) + " is not in the vocabulary");
      } else {
        symbols.push_back(kUnk);
      }
    }
    encode_chunk(symbols);
    out.insert(out.end(), symbols.begin(), symbols.end());
  }
  return out;
}

std::vector<int> Tokenizer::encode(std::string_view text) const { return encode_impl(text, false); }

std::vector<int> Tokenizer::encode_strict(std::string_view text) const { return encode_impl(text, true); }

std::string Tokenizer::decode(std::span<const int> ids) const {
  std::string out;
  for (int id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= pieces_.size()) {
      throw ArgumentError("token id out of range: " + std::to_string(id));
    }
    if (!is_special(id)) out += pieces_[static_cast<std::size_t>(id)];
  }
  return out;
}

std::string Tokenizer::hash() const {
  std::ostringstream ss;
  write(ss);
  return io::hex64(io::fnv1a64(ss.str()));
}

void Tokenizer::write(std::ostream& out) const {
  io::write_header(out, kMagic, kVersion);
  io::write_u64(out, alphabet_.size());
  for (char32_t cp : alphabet_) io::write_u32(out, static_cast<std::uint32_t>(cp));
  io::write_u64(out, merges_.size());
  for (const auto& [a, b] : merges_) {
    io::write_u32(out, static_cast<std::uint32_t>(a));
    io::write_u32(out, static_cast<std::uint32_t>(b));
  }
}

Tokenizer Tokenizer::read(std::istream& in) {
  const auto version = io::read_header(in, kMagic);
  if (version != kVersion) throw IoError("unsupported tokenizer version " + std::to_string(version));
  Tokenizer tok;
  const auto n_chars = io::read_u64(in);
  if (n_chars > 2'000'000) throw IoError("corrupt tokenizer alphabet size");
  tok.alphabet_.resize(n_chars);
  for (auto& cp : tok.alphabet_) cp = static_cast<char32_t>(io::read_u32(in));
  const auto n_merges = io::read_u64(in);
  if (n_merges > 2'000'000) throw IoError("corrupt tokenizer merge count");
  tok.merges_.resize(n_merges);
  for (auto& m : tok.merges_) {
    m.first = static_cast<int>(io::read_u32(in));
    m.second = static_cast<int>(io::read_u32(in));
  }
  tok.rebuild();
  return tok;
}

}  // namespace cc::text
