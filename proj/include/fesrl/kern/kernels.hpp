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

#ifndef FESRL_KERN_KERNELS_HPP_
#define FESRL_KERN_KERNELS_HPP_

#include <cstddef>
#include <string_view>

// Double-precision inner-loop kernels behind the network engine. Every entry
// point has a scalar reference implementation and an AVX2+FMA variant; the
// active one is chosen once at startup from CPUID, or forced through
// force_backend() / the FESRL_KERNEL environment variable. All matrices are
// row-major.
namespace fesrl::kern {

struct Backend {
  const char* name;
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(std::size_t, double, const double*, double*);
  void (*scal)(std::size_t, double, double*);
  // c[m x k] (+)= a[m x n] * b[k x n]^T
  void (*gemm_nt)(std::size_t m, std::size_t k, std::size_t n, const double* a,
                  const double* b, double* c, bool accumulate);
  // c[m x k] (+)= a[m x n] * b[n x k]
  void (*gemm_nn)(std::size_t m, std::size_t k, std::size_t n, const double* a,
                  const double* b, double* c, bool accumulate);
  // c[n x k] (+)= a[m x n]^T * b[m x k]
  void (*gemm_tn)(std::size_t m, std::size_t n, std::size_t k, const double* a,
                  const double* b, double* c, bool accumulate);
  // In-place Adam with precomputed bias corrections bc1 = 1-beta1^t,
  // bc2 = 1-beta2^t.
  void (*adam_step)(std::size_t n, double* p, const double* g, double* m,
                    double* v, double lr, double beta1, double beta2,
                    double eps, double bc1, double bc2);
  // target <- (1-tau)*target + tau*online
  void (*lerp_toward)(std::size_t n, double* target, const double* online,
                      double tau);
};

const Backend& scalar_backend();
bool avx2_available();
const Backend* avx2_backend();  // nullptr when not compiled in / unsupported

// Active backend; resolved on first use (honours FESRL_KERNEL=scalar|avx2).
const Backend& active();
// Force a backend by name ("scalar", "avx2", "auto"). Returns false if the
// request cannot be satisfied on this machine.
bool force_backend(std::string_view name);

inline double dot(const double* a, const double* b, std::size_t n) {
  return active().dot(a, b, n);
}
inline void axpy(std::size_t n, double alpha, const double* x, double* y) {
  active().axpy(n, alpha, x, y);
}
inline void scal(std::size_t n, double alpha, double* x) {
  active().scal(n, alpha, x);
}
inline void gemm_nt(std::size_t m, std::size_t k, std::size_t n,
                    const double* a, const double* b, double* c,
                    bool accumulate = false) {
  active().gemm_nt(m, k, n, a, b, c, accumulate);
}
inline void gemm_nn(std::size_t m, std::size_t k, std::size_t n,
                    const double* a, const double* b, double* c,
                    bool accumulate = false) {
  active().gemm_nn(m, k, n, a, b, c, accumulate);
}
inline void gemm_tn(std::size_t m, std::size_t n, std::size_t k,
                    const double* a, const double* b, double* c,
                    bool accumulate = true) {
  active().gemm_tn(m, n, k, a, b, c, accumulate);
}
inline void adam_step(std::size_t n, double* p, const double* g, double* m,
                      double* v, double lr, double beta1, double beta2,
                      double eps, double bc1, double bc2) {
  active().adam_step(n, p, g, m, v, lr, beta1, beta2, eps, bc1, bc2);
}
inline void lerp_toward(std::size_t n, double* target, const double* online,
                        double tau) {
  active().lerp_toward(n, target, online, tau);
}

inline double sumsq(const double* x, std::size_t n) {
  return active().dot(x, x, n);
}

}  // namespace fesrl::kern

#endif  // FESRL_KERN_KERNELS_HPP_
