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

// Scalar reference kernels. These define the semantics the SIMD variants are
// equivalence-tested against.

#include <cmath>
#include <cstring>

#include "fesrl/kern/kernels.hpp"

namespace fesrl::kern {
namespace {

double s_dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void s_axpy(std::size_t n, double alpha, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void s_scal(std::size_t n, double alpha, double* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void s_gemm_nt(std::size_t m, std::size_t k, std::size_t n, const double* a,
               const double* b, double* c, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * n;
    double* ci = c + i * k;
    for (std::size_t j = 0; j < k; ++j) {
      const double v = s_dot(ai, b + j * n, n);
      ci[j] = accumulate ? ci[j] + v : v;
    }
  }
}

void s_gemm_nn(std::size_t m, std::size_t k, std::size_t n, const double* a,
               const double* b, double* c, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * k;
    if (!accumulate) std::memset(ci, 0, k * sizeof(double));
    const double* ai = a + i * n;
    for (std::size_t l = 0; l < n; ++l) {
      s_axpy(k, ai[l], b + l * k, ci);
    }
  }
}

void s_gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a,
               const double* b, double* c, bool accumulate) {
  if (!accumulate) std::memset(c, 0, n * k * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * n;
    const double* bi = b + i * k;
    for (std::size_t l = 0; l < n; ++l) {
      s_axpy(k, ai[l], bi, c + l * k);
    }
  }
}

void s_adam(std::size_t n, double* p, const double* g, double* m, double* v,
            double lr, double beta1, double beta2, double eps, double bc1,
            double bc2) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

void s_lerp(std::size_t n, double* target, const double* online, double tau) {
  for (std::size_t i = 0; i < n; ++i) {
    target[i] = (1.0 - tau) * target[i] + tau * online[i];
  }
}

const Backend kScalar = {
    "scalar", s_dot,     s_axpy, s_scal, s_gemm_nt,
    s_gemm_nn, s_gemm_tn, s_adam, s_lerp,
};

}  // namespace

const Backend& scalar_backend() { return kScalar; }

}  // namespace fesrl::kern
