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

#include <atomic>
#include <cstdlib>

#include "fesrl/kern/kernels.hpp"

namespace fesrl::kern {

const Backend* avx2_backend_impl();  // defined in kernels_avx2.cpp

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return avx2_backend_impl() != nullptr && __builtin_cpu_supports("avx2") &&
         __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Backend* avx2_backend() {
  return avx2_available() ? avx2_backend_impl() : nullptr;
}

namespace {

std::atomic<const Backend*> g_active{nullptr};

const Backend* resolve_auto() {
  if (const Backend* v = avx2_backend()) return v;
  return &scalar_backend();
}

const Backend* resolve_initial() {
  if (const char* env = std::getenv("FESRL_KERNEL")) {
    std::string_view want(env);
    if (want == "scalar") return &scalar_backend();
    if (want == "avx2") {
      if (const Backend* v = avx2_backend()) return v;
    }
  }
  return resolve_auto();
}

}  // namespace

const Backend& active() {
  const Backend* b = g_active.load(std::memory_order_acquire);
  if (!b) {
    b = resolve_initial();
    g_active.store(b, std::memory_order_release);
  }
  return *b;
}

bool force_backend(std::string_view name) {
  if (name == "scalar") {
    g_active.store(&scalar_backend(), std::memory_order_release);
    return true;
  }
  if (name == "avx2") {
    if (const Backend* v = avx2_backend()) {
      g_active.store(v, std::memory_order_release);
      return true;
    }
    return false;
  }
  if (name == "auto" || name.empty()) {
    g_active.store(resolve_auto(), std::memory_order_release);
    return true;
  }
  return false;
}

}  // namespace fesrl::kern
