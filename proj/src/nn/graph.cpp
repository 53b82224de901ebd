// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include "nn/graph.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "common/error.hpp"

namespace cc::nn {
namespace {

void check_shape(bool ok, const char* op) {
  if (!ok) throw ArgumentError(std::string("shape mismatch in ") + op);
}

}  // namespace

const Matrix& Graph::val(int id) const {
  const auto& n = nodes_[static_cast<std::size_t>(id)];
  return n.borrowed ? *n.borrowed : n.value;
}

const Matrix& Graph::value(Var v) const {
  if (v.id < 0 || static_cast<std::size_t>(v.id) >= nodes_.size()) throw ArgumentError("invalid graph variable");
  return val(v.id);
}

double Graph::scalar(Var v) const {
  const auto& m = value(v);
  check_shape(m.rows() == 1 && m.cols() == 1, "scalar");
  return m(0, 0);
}

Var Graph::push(Matrix value, bool requires_grad, Backward backward) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  if (requires_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size() - 1)};
}

Var Graph::constant(Matrix value) { return push(std::move(value), false, nullptr); }

Var Graph::param(std::size_t index) {
  if (!params_ || index >= params_->size()) throw ArgumentError("parameter index out of range");
  if (param_nodes_.size() < params_->size()) param_nodes_.resize(params_->size(), -1);
  if (param_nodes_[index] >= 0) return Var{param_nodes_[index]};
  Node n;
  n.borrowed = &params_->value(index);
  n.param = static_cast<long>(index);
  n.requires_grad = true;
  nodes_.push_back(std::move(n));
  param_nodes_[index] = static_cast<int>(nodes_.size() - 1);
  return Var{param_nodes_[index]};
}

Matrix& Graph::grad_buffer(int id) {
  auto& n = nodes_[static_cast<std::size_t>(id)];
  if (n.grad.size() == 0) {
    const auto& v = val(id);
    n.grad = Matrix::Zero(v.rows(), v.cols());
  }
  return n.grad;
}

void Graph::accumulate(int id, const Matrix& g) {
  if (!needs(id)) return;
  auto& n = nodes_[static_cast<std::size_t>(id)];
  if (n.grad.size() == 0) {
    n.grad = g;
  } else {
    n.grad += g;
  }
}

void Graph::backward(Var root, Gradients& grads) {
  const auto& r = value(root);
  check_shape(r.rows() == 1 && r.cols() == 1, "backward root");
  if (params_ && grads.size() != params_->size()) throw ArgumentError("gradient buffer does not match parameters");
  if (!needs(root.id)) return;
  nodes_[static_cast<std::size_t>(root.id)].grad = Matrix::Constant(1, 1, 1.0);
  for (int i = root.id; i >= 0; --i) {
    auto& n = nodes_[static_cast<std::size_t>(i)];
    if (n.grad.size() == 0) continue;
    if (n.param >= 0) {
      grads[static_cast<std::size_t>(n.param)] += n.grad;
    } else if (n.backward) {
      const Matrix g = std::move(n.grad);
      n.backward(*this, g);
    }
    n.grad = Matrix();
  }
}

Var Graph::matmul(Var a, Var b) {
  const auto& A = value(a);
  const auto& B = value(b);
  check_shape(A.cols() == B.rows(), "matmul");
  Matrix out;
  out.noalias() = A * B;
  return push(std::move(out), needs(a.id) || needs(b.id), [a, b](Graph& g, const Matrix& grad) {
    if (g.needs(a.id)) {
      Matrix ga;
      ga.noalias() = grad * g.val(b.id).transpose();
      g.accumulate(a.id, ga);
    }
    if (g.needs(b.id)) {
      Matrix gb;
      gb.noalias() = g.val(a.id).transpose() * grad;
      g.accumulate(b.id, gb);
    }
  });
}

Var Graph::add(Var a, Var b) {
  const auto& A = value(a);
  const auto& B = value(b);
  check_shape(A.rows() == B.rows() && A.cols() == B.cols(), "add");
  return push(A + B, needs(a.id) || needs(b.id), [a, b](Graph& g, const Matrix& grad) {
    g.accumulate(a.id, grad);
    g.accumulate(b.id, grad);
  });
}

Var Graph::add_row(Var x, Var row) {
  const auto& X = value(x);
  const auto& R = value(row);
  check_shape(R.rows() == 1 && R.cols() == X.cols(), "add_row");
  Matrix out = X.rowwise() + R.row(0);
  return push(std::move(out), needs(x.id) || needs(row.id), [x, row](Graph& g, const Matrix& grad) {
    g.accumulate(x.id, grad);
    if (g.needs(row.id)) g.accumulate(row.id, grad.colwise().sum());
  });
}

Var Graph::scale(Var x, double c) {
  return push(c * value(x), needs(x.id), [x, c](Graph& g, const Matrix& grad) { g.accumulate(x.id, c * grad); });
}

Var Graph::rows(Var table, std::span<const int> ids) {
  const auto& T = value(table);
  Matrix out(static_cast<Eigen::Index>(ids.size()), T.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || ids[i] >= T.rows()) throw ArgumentError("row index out of range: " + std::to_string(ids[i]));
    out.row(static_cast<Eigen::Index>(i)) = T.row(ids[i]);
  }
  std::vector<int> idx(ids.begin(), ids.end());
  return push(std::move(out), needs(table.id), [table, idx = std::move(idx)](Graph& g, const Matrix& grad) {
    auto& gt = g.grad_buffer(table.id);
    for (std::size_t i = 0; i < idx.size(); ++i) gt.row(idx[i]) += grad.row(static_cast<Eigen::Index>(i));
  });
}

Var Graph::layer_norm(Var x, Var gain, Var bias, double eps) {
  const auto& X = value(x);
  const auto& G = value(gain);
  const auto& B = value(bias);
  check_shape(G.rows() == 1 && B.rows() == 1 && G.cols() == X.cols() && B.cols() == X.cols(), "layer_norm");
  const auto d = static_cast<double>(X.cols());
  Matrix xhat(X.rows(), X.cols());
  Eigen::VectorXd rstd(X.rows());
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    const double mu = X.row(r).sum() / d;
    const double var = (X.row(r).array() - mu).square().sum() / d;
    rstd(r) = 1.0 / std::sqrt(var + eps);
    xhat.row(r) = (X.row(r).array() - mu) * rstd(r);
  }
  Matrix out = (xhat.array().rowwise() * G.row(0).array()).rowwise() + B.row(0).array();
  const bool rg = needs(x.id) || needs(gain.id) || needs(bias.id);
  return push(std::move(out), rg,
              [x, gain, bias, xhat = std::move(xhat), rstd = std::move(rstd), d](Graph& g, const Matrix& grad) {
                if (g.needs(gain.id)) g.accumulate(gain.id, grad.cwiseProduct(xhat).colwise().sum());
                if (g.needs(bias.id)) g.accumulate(bias.id, grad.colwise().sum());
                if (!g.needs(x.id)) return;
                const auto& G = g.val(gain.id);
                Matrix dxhat = grad.array().rowwise() * G.row(0).array();
                Matrix dx(dxhat.rows(), dxhat.cols());
                for (Eigen::Index r = 0; r < dxhat.rows(); ++r) {
                  const double m1 = dxhat.row(r).sum() / d;
                  const double m2 = dxhat.row(r).dot(xhat.row(r)) / d;
                  dx.row(r) = rstd(r) * (dxhat.row(r).array() - m1 - xhat.row(r).array() * m2);
                }
                g.accumulate(x.id, dx);
              });
}

namespace {
constexpr double kGeluK = 0.7978845608028654;  // sqrt(2 / pi)
constexpr double kGeluC = 0.044715;
}  // namespace

Var Graph::gelu(Var x) {
  constexpr double k = kGeluK;
  constexpr double c = kGeluC;
  const auto& X = value(x);
  Matrix t = (k * (X.array() + c * X.array().cube())).tanh();
  Matrix out = 0.5 * X.array() * (1.0 + t.array());
  return push(std::move(out), needs(x.id), [x, t = std::move(t)](Graph& g, const Matrix& grad) {
    const auto& X = g.val(x.id);
    const auto dt = (1.0 - t.array().square()) * kGeluK * (1.0 + 3.0 * kGeluC * X.array().square());
    Matrix local = 0.5 * (1.0 + t.array()) + 0.5 * X.array() * dt;
    g.accumulate(x.id, grad.cwiseProduct(local));
  });
}

Var Graph::tanh(Var x) {
  Matrix out = value(x).array().tanh();
  Matrix y = out;
  return push(std::move(out), needs(x.id), [x, y = std::move(y)](Graph& g, const Matrix& grad) {
    g.accumulate(x.id, grad.cwiseProduct((1.0 - y.array().square()).matrix()));
  });
}

Var Graph::log_softmax(Var x) {
  const auto& X = value(x);
  Matrix out(X.rows(), X.cols());
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    const double m = X.row(r).maxCoeff();
    const double lse = m + std::log((X.row(r).array() - m).exp().sum());
    out.row(r) = X.row(r).array() - lse;
  }
  Matrix probs = out.array().exp();
  return push(std::move(out), needs(x.id), [x, probs = std::move(probs)](Graph& g, const Matrix& grad) {
    Matrix dx = grad - (probs.array().colwise() * grad.rowwise().sum().array()).matrix();
    g.accumulate(x.id, dx);
  });
}

Var Graph::causal_attention(Var qkv, int n_heads) {
  const auto& X = value(qkv);
  check_shape(n_heads > 0 && X.cols() % (3 * n_heads) == 0, "causal_attention");
  const Eigen::Index T = X.rows();
  const Eigen::Index d = X.cols() / 3;
  const Eigen::Index dh = d / n_heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));
  Matrix out(T, d);
  std::vector<Matrix> probs(static_cast<std::size_t>(n_heads));
  for (int h = 0; h < n_heads; ++h) {
    const auto Q = X.block(0, h * dh, T, dh);
    const auto K = X.block(0, d + h * dh, T, dh);
    const auto V = X.block(0, 2 * d + h * dh, T, dh);
    Matrix S;
    S.noalias() = Q * K.transpose();
    S *= inv_sqrt;
    Matrix P = Matrix::Zero(T, T);
    for (Eigen::Index i = 0; i < T; ++i) {
      const auto row = S.row(i).head(i + 1);
      const double m = row.maxCoeff();
      P.row(i).head(i + 1) = (row.array() - m).exp();
      P.row(i).head(i + 1) /= P.row(i).head(i + 1).sum();
    }
    out.block(0, h * dh, T, dh).noalias() = P * V;
    probs[static_cast<std::size_t>(h)] = std::move(P);
  }
  return push(std::move(out), needs(qkv.id),
              [qkv, n_heads, d, dh, inv_sqrt, probs = std::move(probs)](Graph& g, const Matrix& grad) {
                const auto& X = g.val(qkv.id);
                const Eigen::Index T = X.rows();
                Matrix dX = Matrix::Zero(T, 3 * d);
                for (int h = 0; h < n_heads; ++h) {
                  const auto& P = probs[static_cast<std::size_t>(h)];
                  const auto Q = X.block(0, h * dh, T, dh);
                  const auto K = X.block(0, d + h * dh, T, dh);
                  const auto V = X.block(0, 2 * d + h * dh, T, dh);
                  const auto dO = grad.block(0, h * dh, T, dh);
                  dX.block(0, 2 * d + h * dh, T, dh).noalias() = P.transpose() * dO;
                  Matrix dP;
                  dP.noalias() = dO * V.transpose();
                  const Eigen::VectorXd inner = dP.cwiseProduct(P).rowwise().sum();
                  Matrix dS = P.array() * (dP.array().colwise() - inner.array());
                  dS *= inv_sqrt;
                  dX.block(0, h * dh, T, dh).noalias() = dS * K;
                  dX.block(0, d + h * dh, T, dh).noalias() = dS.transpose() * Q;
                }
                g.accumulate(qkv.id, dX);
              });
}

Var Graph::pick_sum(Var x, std::span<const std::pair<int, int>> cells, std::span<const double> weights) {
  const auto& X = value(x);
  check_shape(cells.size() == weights.size(), "pick_sum");
  double total = 0.0;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto [r, c] = cells[k];
    if (r < 0 || r >= X.rows() || c < 0 || c >= X.cols()) throw ArgumentError("pick_sum cell out of range");
    total += weights[k] * X(r, c);
  }
  std::vector<std::pair<int, int>> cs(cells.begin(), cells.end());
  std::vector<double> ws(weights.begin(), weights.end());
  return push(Matrix::Constant(1, 1, total), needs(x.id),
              [x, cs = std::move(cs), ws = std::move(ws)](Graph& g, const Matrix& grad) {
                auto& gx = g.grad_buffer(x.id);
                const double s = grad(0, 0);
                for (std::size_t k = 0; k < cs.size(); ++k) gx(cs[k].first, cs[k].second) += s * ws[k];
              });
}

Var Graph::mean_rows(Var x, Eigen::Index begin, Eigen::Index end) {
  const auto& X = value(x);
  check_shape(begin >= 0 && begin < end && end <= X.rows(), "mean_rows");
  const double n = static_cast<double>(end - begin);
  Matrix out = X.middleRows(begin, end - begin).colwise().sum() / n;
  return push(std::move(out), needs(x.id), [x, begin, end, n](Graph& g, const Matrix& grad) {
    auto& gx = g.grad_buffer(x.id);
    for (Eigen::Index r = begin; r < end; ++r) gx.row(r) += grad.row(0) / n;
  });
}

Var Graph::sum(Var x) {
  const auto& X = value(x);
  return push(Matrix::Constant(1, 1, X.sum()), needs(x.id), [x](Graph& g, const Matrix& grad) {
    const auto& X = g.val(x.id);
    g.accumulate(x.id, Matrix::Constant(X.rows(), X.cols(), grad(0, 0)));
  });
}

}  // namespace cc::nn
