// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include "nn/parameters.hpp"

#include <cmath>
#include <cstring>

#include "common/binary_io.hpp"
#include "common/error.hpp"
#include "nn/random.hpp"

namespace cc::nn {

std::size_t ParameterSet::add(std::string name, Matrix init) {
  names_.push_back(std::move(name));
  values_.push_back(std::move(init));
  return values_.size() - 1;
}

std::size_t ParameterSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& v : values_) n += static_cast<std::size_t>(v.size());
  return n;
}

std::size_t ParameterSet::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  throw ArgumentError("no parameter named '" + name + "'");
}

Gradients ParameterSet::zero_gradients() const {
  Gradients g;
  g.reserve(values_.size());
  for (const auto& v : values_) g.push_back(Matrix::Zero(v.rows(), v.cols()));
  return g;
}

std::vector<double> ParameterSet::flatten() const {
  std::vector<double> flat;
  flat.reserve(scalar_count());
  for (const auto& v : values_) flat.insert(flat.end(), v.data(), v.data() + v.size());
  return flat;
}

void ParameterSet::assign_flat(const std::vector<double>& flat) {
  if (flat.size() != scalar_count()) throw ArgumentError("flat parameter vector has wrong length");
  std::size_t k = 0;
  for (auto& v : values_) {
    std::memcpy(v.data(), flat.data() + k, sizeof(double) * static_cast<std::size_t>(v.size()));
    k += static_cast<std::size_t>(v.size());
  }
}

void ParameterSet::write(std::ostream& out) const {
  io::write_u64(out, values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    io::write_string(out, names_[i]);
    io::write_u64(out, static_cast<std::uint64_t>(values_[i].rows()));
    io::write_u64(out, static_cast<std::uint64_t>(values_[i].cols()));
    for (Eigen::Index k = 0; k < values_[i].size(); ++k) io::write_f64(out, values_[i].data()[k]);
  }
}

ParameterSet ParameterSet::read(std::istream& in) {
  ParameterSet set;
  const auto n = io::read_u64(in);
  if (n > 100'000) throw IoError("corrupt parameter count");
  for (std::uint64_t i = 0; i < n; ++i) {
    auto name = io::read_string(in);
    const auto rows = io::read_u64(in);
    const auto cols = io::read_u64(in);
    if (rows * cols > (1ULL << 31)) throw IoError("corrupt parameter shape for " + name);
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = io::read_f64(in);
    set.add(std::move(name), std::move(m));
  }
  return set;
}

bool operator==(const ParameterSet& a, const ParameterSet& b) {
  if (a.names_ != b.names_) return false;
  for (std::size_t i = 0; i < a.values_.size(); ++i) {
    const auto& x = a.values_[i];
    const auto& y = b.values_[i];
    if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
    if (std::memcmp(x.data(), y.data(), sizeof(double) * static_cast<std::size_t>(x.size())) != 0) return false;
  }
  return true;
}

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, double stddev, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = stddev * rng.normal();
  return m;
}

double global_norm(const Gradients& grads) {
  double sq = 0.0;
  for (const auto& g : grads) sq += g.squaredNorm();
  return std::sqrt(sq);
}

void accumulate(Gradients& into, const Gradients& from, double scale) {
  if (into.size() != from.size()) throw ArgumentError("gradient sets differ in size");
  for (std::size_t i = 0; i < into.size(); ++i) into[i] += scale * from[i];
}

}  // namespace cc::nn
