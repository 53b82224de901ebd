// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cc::nn {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Gradients = std::vector<Matrix>;

class Rng;

// Ordered collection of named weight matrices. Gradients are kept outside the
// set so several graphs can differentiate the same frozen weights.
class ParameterSet {
 public:
  std::size_t add(std::string name, Matrix init);

  std::size_t size() const { return values_.size(); }
  std::size_t scalar_count() const;
  Matrix& value(std::size_t i) { return values_.at(i); }
  const Matrix& value(std::size_t i) const { return values_.at(i); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::size_t index_of(const std::string& name) const;

  Gradients zero_gradients() const;

  // Flat views used by gradient checks.
  std::vector<double> flatten() const;
  void assign_flat(const std::vector<double>& flat);

  void write(std::ostream& out) const;
  static ParameterSet read(std::istream& in);

  friend bool operator==(const ParameterSet& a, const ParameterSet& b);

 private:
  std::vector<std::string> names_;
  std::vector<Matrix> values_;
};

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, double stddev, Rng& rng);

double global_norm(const Gradients& grads);
void accumulate(Gradients& into, const Gradients& from, double scale = 1.0);

}  // namespace cc::nn
