// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include "policy/transformer.hpp"

#include <cmath>
#include <string>

#include "common/binary_io.hpp"
#include "common/error.hpp"
#include "nn/random.hpp"

namespace cc::policy {
namespace {

using nn::Matrix;

Eigen::RowVectorXd layer_norm_row(const Eigen::RowVectorXd& x, const Matrix& g, const Matrix& b) {
  const double d = static_cast<double>(x.size());
  const double mu = x.sum() / d;
  const double var = (x.array() - mu).square().sum() / d;
  const double rstd = 1.0 / std::sqrt(var + 1e-5);
  return ((x.array() - mu) * rstd * g.row(0).array() + b.row(0).array()).matrix();
}

Eigen::RowVectorXd gelu_row(const Eigen::RowVectorXd& x) {
  constexpr double k = 0.7978845608028654;
  constexpr double c = 0.044715;
  const Eigen::ArrayXXd t = (k * (x.array() + c * x.array().cube())).tanh();
  return (0.5 * x.array() * (1.0 + t)).matrix();
}

}  // namespace

void ModelDims::validate() const {
  if (vocab_size < 2 || context_window < 2 || d_model < 1 || n_layers < 0 || n_heads < 1 || mlp_hidden < 1) {
    throw ArgumentError("invalid model dimensions");
  }
  if (d_model % n_heads != 0) throw ArgumentError("d_model must be divisible by n_heads");
}

Transformer::Transformer(ModelDims dims, std::uint64_t seed) : dims_(dims) {
  dims_.validate();
  nn::Rng rng(seed);
  const auto V = dims_.vocab_size, C = dims_.context_window, d = dims_.d_model, h = dims_.mlp_hidden;
  const double std_embed = 0.1;
  const double std_in = 1.0 / std::sqrt(static_cast<double>(d));
  const double std_out = std_in / std::sqrt(2.0 * std::max(1, dims_.n_layers));
  params_.add("wte", nn::gaussian(V, d, std_embed, rng));
  params_.add("wpe", nn::gaussian(C, d, std_embed, rng));
  for (int l = 0; l < dims_.n_layers; ++l) {
    const auto p = "h" + std::to_string(l) + ".";
    params_.add(p + "ln1.g", Matrix::Ones(1, d));
    params_.add(p + "ln1.b", Matrix::Zero(1, d));
    params_.add(p + "attn.w_qkv", nn::gaussian(d, 3 * d, std_in, rng));
    params_.add(p + "attn.b_qkv", Matrix::Zero(1, 3 * d));
    params_.add(p + "attn.w_o", nn::gaussian(d, d, std_out, rng));
    params_.add(p + "attn.b_o", Matrix::Zero(1, d));
    params_.add(p + "ln2.g", Matrix::Ones(1, d));
    params_.add(p + "ln2.b", Matrix::Zero(1, d));
    params_.add(p + "mlp.w_fc", nn::gaussian(d, h, std_in, rng));
    params_.add(p + "mlp.b_fc", Matrix::Zero(1, h));
    params_.add(p + "mlp.w_proj", nn::gaussian(h, d, std_out * std::sqrt(static_cast<double>(d) / h), rng));
    params_.add(p + "mlp.b_proj", Matrix::Zero(1, d));
  }
  params_.add("lnf.g", Matrix::Ones(1, d));
  params_.add("lnf.b", Matrix::Zero(1, d));
  params_.add("w_head", nn::gaussian(d, V, std_in, rng));
  index_parameters();
}

Transformer::Transformer(ModelDims dims, nn::ParameterSet params) : dims_(dims), params_(std::move(params)) {
  dims_.validate();
  index_parameters();
}

void Transformer::index_parameters() {
  wte_ = params_.index_of("wte");
  wpe_ = params_.index_of("wpe");
  lnf_g_ = params_.index_of("lnf.g");
  lnf_b_ = params_.index_of("lnf.b");
  w_head_ = params_.index_of("w_head");
  layers_.clear();
  for (int l = 0; l < dims_.n_layers; ++l) {
    const auto p = "h" + std::to_string(l) + ".";
    layers_.push_back(LayerIndex{params_.index_of(p + "ln1.g"), params_.index_of(p + "ln1.b"),
                                 params_.index_of(p + "attn.w_qkv"), params_.index_of(p + "attn.b_qkv"),
                                 params_.index_of(p + "attn.w_o"), params_.index_of(p + "attn.b_o"),
                                 params_.index_of(p + "ln2.g"), params_.index_of(p + "ln2.b"),
                                 params_.index_of(p + "mlp.w_fc"), params_.index_of(p + "mlp.b_fc"),
                                 params_.index_of(p + "mlp.w_proj"), params_.index_of(p + "mlp.b_proj")});
  }
  const auto& wte = params_.value(wte_);
  if (wte.rows() != dims_.vocab_size || wte.cols() != dims_.d_model ||
      params_.value(wpe_).rows() != dims_.context_window || params_.value(w_head_).cols() != dims_.vocab_size) {
    throw IoError("parameter shapes do not match model dimensions");
  }
}

nn::Var Transformer::forward(nn::Graph& g, std::span<const int> ids) const {
  const auto T = static_cast<int>(ids.size());
  if (T == 0) throw ArgumentError("empty token sequence");
  if (T > dims_.context_window) {
    throw ArgumentError("sequence of " + std::to_string(T) + " tokens exceeds context window " +
                        std::to_string(dims_.context_window));
  }
  std::vector<int> positions(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) positions[static_cast<std::size_t>(t)] = t;

  nn::Var x = g.add(g.rows(g.param(wte_), ids), g.rows(g.param(wpe_), positions));
  for (const auto& L : layers_) {
    nn::Var h = g.layer_norm(x, g.param(L.ln1_g), g.param(L.ln1_b));
    nn::Var qkv = g.add_row(g.matmul(h, g.param(L.w_qkv)), g.param(L.b_qkv));
    nn::Var att = g.causal_attention(qkv, dims_.n_heads);
    x = g.add(x, g.add_row(g.matmul(att, g.param(L.w_o)), g.param(L.b_o)));
    nn::Var h2 = g.layer_norm(x, g.param(L.ln2_g), g.param(L.ln2_b));
    nn::Var m = g.gelu(g.add_row(g.matmul(h2, g.param(L.w_fc)), g.param(L.b_fc)));
    x = g.add(x, g.add_row(g.matmul(m, g.param(L.w_proj)), g.param(L.b_proj)));
  }
  nn::Var hf = g.layer_norm(x, g.param(lnf_g_), g.param(lnf_b_));
  return g.log_softmax(g.matmul(hf, g.param(w_head_)));
}

Transformer::Session::Session(const Transformer& model) : model_(&model) {
  const auto C = model.dims_.context_window, d = model.dims_.d_model;
  keys_.assign(static_cast<std::size_t>(model.dims_.n_layers), Matrix(C, d));
  values_.assign(static_cast<std::size_t>(model.dims_.n_layers), Matrix(C, d));
}

Eigen::RowVectorXd Transformer::Session::feed(int token) {
  const auto& m = *model_;
  const auto& dims = m.dims_;
  if (length_ >= dims.context_window) throw ArgumentError("context window exhausted");
  if (token < 0 || token >= dims.vocab_size) throw ArgumentError("token id out of range");
  const auto& P = m.params_;
  const int t = length_;
  const int d = dims.d_model;
  const int dh = d / dims.n_heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));

  Eigen::RowVectorXd x = P.value(m.wte_).row(token) + P.value(m.wpe_).row(t);
  for (std::size_t l = 0; l < m.layers_.size(); ++l) {
    const auto& L = m.layers_[l];
    const Eigen::RowVectorXd h = layer_norm_row(x, P.value(L.ln1_g), P.value(L.ln1_b));
    const Eigen::RowVectorXd qkv = h * P.value(L.w_qkv) + P.value(L.b_qkv);
    auto& K = keys_[l];
    auto& V = values_[l];
    K.row(t) = qkv.segment(d, d);
    V.row(t) = qkv.segment(2 * d, d);
    Eigen::RowVectorXd att(d);
    for (int hd = 0; hd < dims.n_heads; ++hd) {
      const auto q = qkv.segment(hd * dh, dh);
      Eigen::VectorXd s = K.block(0, hd * dh, t + 1, dh) * q.transpose();
      s *= inv_sqrt;
      const double mx = s.maxCoeff();
      Eigen::VectorXd p = (s.array() - mx).exp();
      p /= p.sum();
      att.segment(hd * dh, dh) = p.transpose() * V.block(0, hd * dh, t + 1, dh);
    }
    x += att * P.value(L.w_o) + P.value(L.b_o);
    const Eigen::RowVectorXd h2 = layer_norm_row(x, P.value(L.ln2_g), P.value(L.ln2_b));
    const Eigen::RowVectorXd fc = gelu_row(h2 * P.value(L.w_fc) + P.value(L.b_fc));
    x += fc * P.value(L.w_proj) + P.value(L.b_proj);
  }
  const Eigen::RowVectorXd hf = layer_norm_row(x, P.value(m.lnf_g_), P.value(m.lnf_b_));
  Eigen::RowVectorXd logits = hf * P.value(m.w_head_);
  const double mx = logits.maxCoeff();
  const double lse = mx + std::log((logits.array() - mx).exp().sum());
  ++length_;
  return (logits.array() - lse).matrix();
}

void Transformer::write(std::ostream& out) const {
  io::write_u32(out, static_cast<std::uint32_t>(dims_.vocab_size));
  io::write_u32(out, static_cast<std::uint32_t>(dims_.context_window));
  io::write_u32(out, static_cast<std::uint32_t>(dims_.d_model));
  io::write_u32(out, static_cast<std::uint32_t>(dims_.n_layers));
  io::write_u32(out, static_cast<std::uint32_t>(dims_.n_heads));
  io::write_u32(out, static_cast<std::uint32_t>(dims_.mlp_hidden));
  params_.write(out);
}

Transformer Transformer::read(std::istream& in) {
  ModelDims dims;
  dims.vocab_size = static_cast<int>(io::read_u32(in));
  dims.context_window = static_cast<int>(io::read_u32(in));
  dims.d_model = static_cast<int>(io::read_u32(in));
  dims.n_layers = static_cast<int>(io::read_u32(in));
  dims.n_heads = static_cast<int>(io::read_u32(in));
  dims.mlp_hidden = static_cast<int>(io::read_u32(in));
  return Transformer(dims, nn::ParameterSet::read(in));
}

}  // namespace cc::policy
