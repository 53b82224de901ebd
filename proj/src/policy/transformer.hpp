// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "nn/graph.hpp"
#include "nn/parameters.hpp"

namespace cc::policy {

struct ModelDims {
  int vocab_size = 0;
  int context_window = 256;
  int d_model = 64;
  int n_layers = 2;
  int n_heads = 4;
  int mlp_hidden = 256;

  void validate() const;
  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

// Autoregressive decoder: token + learned position embeddings, pre-norm
// blocks of masked multi-head self-attention and a GELU MLP, final norm and
// an untied projection to vocabulary logits.
class Transformer {
 public:
  Transformer() = default;
  Transformer(ModelDims dims, std::uint64_t seed);
  Transformer(ModelDims dims, nn::ParameterSet params);

  const ModelDims& dims() const { return dims_; }
  nn::ParameterSet& parameters() { return params_; }
  const nn::ParameterSet& parameters() const { return params_; }

  // Next-token log-probabilities for every position: row t is the
  // distribution of token t+1 given ids[0..t].
  nn::Var forward(nn::Graph& g, std::span<const int> ids) const;

  // Incremental decoding with cached keys and values.
  class Session {
   public:
    explicit Session(const Transformer& model);
    // Feeds one token and returns next-token log-probabilities.
    Eigen::RowVectorXd feed(int token);
    int length() const { return length_; }

   private:
    const Transformer* model_;
    std::vector<nn::Matrix> keys_;
    std::vector<nn::Matrix> values_;
    int length_ = 0;
  };

  void write(std::ostream& out) const;
  static Transformer read(std::istream& in);

 private:
  struct LayerIndex {
    std::size_t ln1_g, ln1_b, w_qkv, b_qkv, w_o, b_o, ln2_g, ln2_b, w_fc, b_fc, w_proj, b_proj;
  };
  void index_parameters();

  ModelDims dims_;
  nn::ParameterSet params_;
  std::size_t wte_ = 0, wpe_ = 0, lnf_g_ = 0, lnf_b_ = 0, w_head_ = 0;
  std::vector<LayerIndex> layers_;
};

}  // namespace cc::policy
