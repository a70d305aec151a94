// Copyright 2026 The fesrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FESRL_NN_TENSOR_HPP_
#define FESRL_NN_TENSOR_HPP_

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fesrl/rng.hpp"

namespace fesrl::nn {

// Dense row-major float64 tensor. Shapes are 1-D or 2-D everywhere in this
// project.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> s) : shape(std::move(s)) {
    data.assign(count(shape), 0.0);
  }
  Tensor(std::initializer_list<std::size_t> s)
      : Tensor(std::vector<std::size_t>(s)) {}

  static std::size_t count(const std::vector<std::size_t>& s) {
    return std::accumulate(s.begin(), s.end(), std::size_t{1},
                           std::multiplies<>());
  }

  std::size_t size() const { return data.size(); }
  std::size_t rows() const { return shape.empty() ? 0 : shape[0]; }
  std::size_t cols() const { return shape.size() < 2 ? 1 : shape[1]; }

  double* ptr() { return data.data(); }
  const double* ptr() const { return data.data(); }
  double* row(std::size_t i) { return data.data() + i * cols(); }
  const double* row(std::size_t i) const { return data.data() + i * cols(); }

  double& at(std::size_t i) { return data[i]; }
  double at(std::size_t i) const { return data[i]; }
  double& at(std::size_t i, std::size_t j) { return data[i * cols() + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols() + j]; }

  void fill(double v) { std::fill(data.begin(), data.end(), v); }
  void zero() { fill(0.0); }

  bool all_finite() const {
    for (double v : data) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  std::string shape_str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < shape.size(); ++i) {
      if (i) os << 'x';
      os << shape[i];
    }
    os << ']';
    return os.str();
  }
};

inline void require_same_shape(const Tensor& a, const Tensor& b,
                               const char* what) {
  if (a.shape != b.shape) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch " +
                                a.shape_str() + " vs " + b.shape_str());
  }
}

inline void require_finite(const Tensor& t, const char* what) {
  if (!t.all_finite()) {
    throw std::invalid_argument(std::string(what) +
                                ": non-finite values rejected");
  }
}

// Glorot-style uniform init in +-sqrt(6/(fan_in+fan_out)).
inline void glorot_init(Tensor& w, Philox& rng) {
  const double fan_out = static_cast<double>(w.rows());
  const double fan_in = static_cast<double>(w.cols());
  const double bound = std::sqrt(6.0 / (fan_in + fan_out));
  for (double& v : w.data) v = rng.uniform(-bound, bound);
}

}  // namespace fesrl::nn

#endif  // FESRL_NN_TENSOR_HPP_
