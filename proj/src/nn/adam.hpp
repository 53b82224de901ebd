// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nn/parameters.hpp"

namespace cc::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adaptive-moment gradient descent with bias correction. A zero learning rate
// still advances the moment estimates but leaves weights bit-identical.
class Adam {
 public:
  Adam(const ParameterSet& params, AdamConfig config);

  void step(ParameterSet& params, const Gradients& grads);
  long long steps() const { return t_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  Gradients m_;
  Gradients v_;
  long long t_ = 0;
};

}  // namespace cc::nn
