// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "nn/parameters.hpp"

namespace cc::nn {

struct Var {
  int id = -1;
};

// Reverse-mode tape over row-major matrices. Nodes are appended in evaluation
// order, so backward() is a single reverse sweep. A graph is single-use and
// single-threaded; parameter values are borrowed, never copied or mutated.
class Graph {
 public:
  explicit Graph(const ParameterSet* params = nullptr) : params_(params) {}

  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var constant(Matrix value);
  Var param(std::size_t index);

  const Matrix& value(Var v) const;
  double scalar(Var v) const;
  std::size_t size() const { return nodes_.size(); }

  // Seeds d(root)/d(root) = 1 and accumulates parameter gradients into
  // `grads`, which must be shaped like the bound ParameterSet.
  void backward(Var root, Gradients& grads);

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var add_row(Var x, Var row);
  Var scale(Var x, double c);
  Var rows(Var table, std::span<const int> ids);
  Var layer_norm(Var x, Var gain, Var bias, double eps = 1e-5);
  Var gelu(Var x);
  Var tanh(Var x);
  Var log_softmax(Var x);
  // Multi-head masked self-attention over a fused [Q | K | V] input of shape
  // T x 3d; position i attends to positions 0..i.
  Var causal_attention(Var qkv, int n_heads);
  // Weighted sum of selected (row, col) cells, returned as a 1x1 node.
  Var pick_sum(Var x, std::span<const std::pair<int, int>> cells, std::span<const double> weights);
  Var mean_rows(Var x, Eigen::Index begin, Eigen::Index end);
  Var sum(Var x);

 private:
  using Backward = std::function<void(Graph&, const Matrix&)>;

  struct Node {
    Matrix value;
    const Matrix* borrowed = nullptr;
    Matrix grad;
    Backward backward;
    long param = -1;
    bool requires_grad = false;
  };

  const Matrix& val(int id) const;
  bool needs(int id) const { return nodes_[static_cast<std::size_t>(id)].requires_grad; }
  Var push(Matrix value, bool requires_grad, Backward backward);
  void accumulate(int id, const Matrix& g);
  Matrix& grad_buffer(int id);

  const ParameterSet* params_;
  std::vector<Node> nodes_;
  std::vector<int> param_nodes_;
};

}  // namespace cc::nn
