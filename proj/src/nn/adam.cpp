// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include "nn/adam.hpp"

#include <cmath>

#include "common/error.hpp"

namespace cc::nn {

Adam::Adam(const ParameterSet& params, AdamConfig config)
    : config_(config), m_(params.zero_gradients()), v_(params.zero_gradients()) {
  if (config_.learning_rate < 0 || config_.beta1 < 0 || config_.beta1 >= 1 || config_.beta2 < 0 ||
      config_.beta2 >= 1 || config_.epsilon <= 0) {
    throw ArgumentError("invalid Adam hyperparameters");
  }
}

void Adam::step(ParameterSet& params, const Gradients& grads) {
  if (grads.size() != params.size() || m_.size() != params.size()) {
    throw ArgumentError("gradient set does not match parameters");
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * grads[i];
    v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * grads[i].cwiseProduct(grads[i]);
    if (config_.learning_rate == 0.0) continue;
    auto& p = params.value(i);
    const auto m_hat = m_[i].array() / bc1;
    const auto v_hat = v_[i].array() / bc2;
    p.array() -= config_.learning_rate * m_hat / (v_hat.sqrt() + config_.epsilon);
  }
}

}  // namespace cc::nn
