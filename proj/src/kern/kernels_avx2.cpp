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

// AVX2+FMA kernel variants. This translation unit is the only one compiled
// with -mavx2 -mfma; it is reached exclusively through the dispatch table
// after a CPUID check.

#include "fesrl/kern/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>
#include <cstring>

namespace fesrl::kern {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double v_dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void v_axpy(std::size_t n, double alpha, const double* x, double* y) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void v_scal(std::size_t n, double alpha, double* x) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] *= alpha;
}

// c[m x k] (+)= a[m x n] * b[k x n]^T. Four output columns share one pass
// over the a row.
void v_gemm_nt(std::size_t m, std::size_t k, std::size_t n, const double* a,
               const double* b, double* c, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * n;
    double* ci = c + i * k;
    std::size_t j = 0;
    for (; j + 4 <= k; j += 4) {
      const double* b0 = b + (j + 0) * n;
      const double* b1 = b + (j + 1) * n;
      const double* b2 = b + (j + 2) * n;
      const double* b3 = b + (j + 3) * n;
      __m256d acc0 = _mm256_setzero_pd();
      __m256d acc1 = _mm256_setzero_pd();
      __m256d acc2 = _mm256_setzero_pd();
      __m256d acc3 = _mm256_setzero_pd();
      std::size_t l = 0;
      for (; l + 4 <= n; l += 4) {
        const __m256d va = _mm256_loadu_pd(ai + l);
        acc0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(b0 + l), acc0);
        acc1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(b1 + l), acc1);
        acc2 = _mm256_fmadd_pd(va, _mm256_loadu_pd(b2 + l), acc2);
        acc3 = _mm256_fmadd_pd(va, _mm256_loadu_pd(b3 + l), acc3);
      }
      double s0 = hsum(acc0), s1 = hsum(acc1), s2 = hsum(acc2), s3 = hsum(acc3);
      for (; l < n; ++l) {
        const double av = ai[l];
        s0 += av * b0[l];
        s1 += av * b1[l];
        s2 += av * b2[l];
        s3 += av * b3[l];
      }
      if (accumulate) {
        ci[j + 0] += s0;
        ci[j + 1] += s1;
        ci[j + 2] += s2;
        ci[j + 3] += s3;
      } else {
        ci[j + 0] = s0;
        ci[j + 1] = s1;
        ci[j + 2] = s2;
        ci[j + 3] = s3;
      }
    }
    for (; j < k; ++j) {
      const double v = v_dot(ai, b + j * n, n);
      ci[j] = accumulate ? ci[j] + v : v;
    }
  }
}

// c[m x k] (+)= a[m x n] * b[n x k]. Four b rows are folded per pass over
// the c row.
void v_gemm_nn(std::size_t m, std::size_t k, std::size_t n, const double* a,
               const double* b, double* c, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * k;
    if (!accumulate) std::memset(ci, 0, k * sizeof(double));
    const double* ai = a + i * n;
    std::size_t l = 0;
    for (; l + 4 <= n; l += 4) {
      const __m256d a0 = _mm256_set1_pd(ai[l + 0]);
      const __m256d a1 = _mm256_set1_pd(ai[l + 1]);
      const __m256d a2 = _mm256_set1_pd(ai[l + 2]);
      const __m256d a3 = _mm256_set1_pd(ai[l + 3]);
      const double* b0 = b + (l + 0) * k;
      const double* b1 = b + (l + 1) * k;
      const double* b2 = b + (l + 2) * k;
      const double* b3 = b + (l + 3) * k;
      std::size_t j = 0;
      for (; j + 4 <= k; j += 4) {
        __m256d vc = _mm256_loadu_pd(ci + j);
        vc = _mm256_fmadd_pd(a0, _mm256_loadu_pd(b0 + j), vc);
        vc = _mm256_fmadd_pd(a1, _mm256_loadu_pd(b1 + j), vc);
        vc = _mm256_fmadd_pd(a2, _mm256_loadu_pd(b2 + j), vc);
        vc = _mm256_fmadd_pd(a3, _mm256_loadu_pd(b3 + j), vc);
        _mm256_storeu_pd(ci + j, vc);
      }
      for (; j < k; ++j) {
        ci[j] += ai[l] * b0[j] + ai[l + 1] * b1[j] + ai[l + 2] * b2[j] +
                 ai[l + 3] * b3[j];
      }
    }
    for (; l < n; ++l) {
      v_axpy(k, ai[l], b + l * k, ci);
    }
  }
}

// c[n x k] (+)= a[m x n]^T * b[m x k]. One pass over each b row feeds four
// c rows.
void v_gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a,
               const double* b, double* c, bool accumulate) {
  if (!accumulate) std::memset(c, 0, n * k * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * n;
    const double* bi = b + i * k;
    std::size_t l = 0;
    for (; l + 4 <= n; l += 4) {
      const __m256d a0 = _mm256_set1_pd(ai[l + 0]);
      const __m256d a1 = _mm256_set1_pd(ai[l + 1]);
      const __m256d a2 = _mm256_set1_pd(ai[l + 2]);
      const __m256d a3 = _mm256_set1_pd(ai[l + 3]);
      double* c0 = c + (l + 0) * k;
      double* c1 = c + (l + 1) * k;
      double* c2 = c + (l + 2) * k;
      double* c3 = c + (l + 3) * k;
      std::size_t j = 0;
      for (; j + 4 <= k; j += 4) {
        const __m256d vb = _mm256_loadu_pd(bi + j);
        _mm256_storeu_pd(c0 + j, _mm256_fmadd_pd(a0, vb, _mm256_loadu_pd(c0 + j)));
        _mm256_storeu_pd(c1 + j, _mm256_fmadd_pd(a1, vb, _mm256_loadu_pd(c1 + j)));
        _mm256_storeu_pd(c2 + j, _mm256_fmadd_pd(a2, vb, _mm256_loadu_pd(c2 + j)));
        _mm256_storeu_pd(c3 + j, _mm256_fmadd_pd(a3, vb, _mm256_loadu_pd(c3 + j)));
      }
      for (; j < k; ++j) {
        const double bv = bi[j];
        c0[j] += ai[l + 0] * bv;
        c1[j] += ai[l + 1] * bv;
        c2[j] += ai[l + 2] * bv;
        c3[j] += ai[l + 3] * bv;
      }
    }
    for (; l < n; ++l) {
      v_axpy(k, ai[l], bi, c + l * k);
    }
  }
}

void v_adam(std::size_t n, double* p, const double* g, double* m, double* v,
            double lr, double beta1, double beta2, double eps, double bc1,
            double bc2) {
  const __m256d vb1 = _mm256_set1_pd(beta1);
  const __m256d vb1c = _mm256_set1_pd(1.0 - beta1);
  const __m256d vb2 = _mm256_set1_pd(beta2);
  const __m256d vb2c = _mm256_set1_pd(1.0 - beta2);
  const __m256d vlr = _mm256_set1_pd(lr);
  const __m256d veps = _mm256_set1_pd(eps);
  const __m256d vibc1 = _mm256_set1_pd(1.0 / bc1);
  const __m256d vibc2 = _mm256_set1_pd(1.0 / bc2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vg = _mm256_loadu_pd(g + i);
    __m256d vm = _mm256_loadu_pd(m + i);
    __m256d vv = _mm256_loadu_pd(v + i);
    vm = _mm256_fmadd_pd(vb1c, vg, _mm256_mul_pd(vb1, vm));
    vv = _mm256_fmadd_pd(vb2c, _mm256_mul_pd(vg, vg), _mm256_mul_pd(vb2, vv));
    _mm256_storeu_pd(m + i, vm);
    _mm256_storeu_pd(v + i, vv);
    const __m256d mhat = _mm256_mul_pd(vm, vibc1);
    const __m256d vhat = _mm256_mul_pd(vv, vibc2);
    const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), veps);
    __m256d vp = _mm256_loadu_pd(p + i);
    vp = _mm256_sub_pd(vp, _mm256_div_pd(_mm256_mul_pd(vlr, mhat), denom));
    _mm256_storeu_pd(p + i, vp);
  }
  for (; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    p[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
  }
}

void v_lerp(std::size_t n, double* target, const double* online, double tau) {
  const __m256d vt = _mm256_set1_pd(tau);
  const __m256d vtc = _mm256_set1_pd(1.0 - tau);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_mul_pd(vtc, _mm256_loadu_pd(target + i));
    _mm256_storeu_pd(target + i,
                     _mm256_fmadd_pd(vt, _mm256_loadu_pd(online + i), vy));
  }
  for (; i < n; ++i) {
    target[i] = (1.0 - tau) * target[i] + tau * online[i];
  }
}

const Backend kAvx2 = {
    "avx2",    v_dot,     v_axpy, v_scal, v_gemm_nt,
    v_gemm_nn, v_gemm_tn, v_adam, v_lerp,
};

}  // namespace

const Backend* avx2_backend_impl() { return &kAvx2; }

}  // namespace fesrl::kern

#else

namespace fesrl::kern {
const Backend* avx2_backend_impl() { return nullptr; }
}  // namespace fesrl::kern

#endif  // __AVX2__ && __FMA__
