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

#ifndef FESRL_NN_GRU_HPP_
#define FESRL_NN_GRU_HPP_

#include <string>
#include <utility>
#include <vector>

#include "fesrl/nn/tensor.hpp"
#include "fesrl/rng.hpp"

namespace fesrl::nn {

// Gated recurrent unit with a linear readout head:
//   z = sigmoid(Wz [x;h] + bz)          update gate
//   r = sigmoid(Wr [x;h] + br)          reset gate
//   c = tanh(Wc [x; r.h] + bc)          candidate
//   h' = (1-z).h + z.c
// The readout maps hidden states to the predicted next observation.
struct GruParams {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  std::size_t readout_dim = 0;
  Tensor wz, wr, wc;  // each [hidden x (input+hidden)]
  Tensor bz, br, bc;  // each [hidden]
  Tensor ro_w;        // [readout x hidden]
  Tensor ro_b;        // [readout]
};

struct GruGrads {
  Tensor wz, wr, wc, bz, br, bc, ro_w, ro_b;
  void zero();
};

// Per-step cache. h_prev and x stay with the caller; only the gate values
// are stored so long unrolls stay cheap in memory.
struct GruStepCache {
  Tensor z, r, c;  // each [B x hidden]
};

// Reusable scratch for batched cell steps.
struct GruWorkspace {
  Tensor u;     // [B x (input+hidden)]
  Tensor uc;    // [B x (input+hidden)]
  Tensor dz, dc, dac, daz, dar, du, duc, dr;
  void resize(std::size_t batch, std::size_t input, std::size_t hidden);
};

GruParams make_gru(std::size_t input, std::size_t hidden, std::size_t readout,
                   Philox& rng);
GruGrads make_grads(const GruParams& p);

// h_prev and x are [B x hidden] and [B x input]; h_out gets [B x hidden].
void gru_cell_forward(const GruParams& p, const Tensor& h_prev,
                      const Tensor& x, Tensor& h_out, GruStepCache* cache,
                      GruWorkspace& ws);

// Single-vector convenience wrapper.
Tensor gru_cell_step(const GruParams& p, const Tensor& h, const Tensor& x);

// dh is the gradient wrt h_out. Accumulates into grads, adds into dh_prev and
// (if non-null) dx.
void gru_cell_backward(const GruParams& p, const Tensor& h_prev,
                       const Tensor& x, const GruStepCache& cache,
                       const Tensor& dh, GruGrads& grads, Tensor& dh_prev,
                       Tensor* dx, GruWorkspace& ws);

// readout(h) = ro_w h + ro_b, batched.
void gru_readout(const GruParams& p, const Tensor& h, Tensor& y);
void gru_readout_backward(const GruParams& p, const Tensor& h,
                          const Tensor& dy, GruGrads& grads, Tensor& dh);

std::vector<std::pair<std::string, Tensor*>> named_params(
    GruParams& p, const std::string& gru_prefix,
    const std::string& readout_prefix);
std::vector<Tensor*> param_list(GruParams& p);
std::vector<Tensor*> param_list(GruGrads& g);
std::vector<const Tensor*> param_list(const GruGrads& g);

}  // namespace fesrl::nn

#endif  // FESRL_NN_GRU_HPP_
