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

#ifndef FESRL_NN_MLP_HPP_
#define FESRL_NN_MLP_HPP_

#include <string>
#include <utility>
#include <vector>

#include "fesrl/nn/tensor.hpp"
#include "fesrl/rng.hpp"

namespace fesrl::nn {

enum class Act { identity, relu, tanh, sigmoid };

double apply_act(Act a, double x);

struct Affine {
  Tensor w;  // [out x in]
  Tensor b;  // [out]
};

struct MlpParams {
  std::vector<Affine> layers;
  Act hidden = Act::relu;
  Act output = Act::identity;

  std::size_t input_dim() const { return layers.front().w.cols(); }
  std::size_t output_dim() const { return layers.back().w.rows(); }
};

struct MlpGrads {
  std::vector<Affine> layers;
  void zero();
};

// Forward cache: the input batch plus each layer's post-activation batch.
struct MlpCache {
  Tensor input;
  std::vector<Tensor> post;
};

MlpParams make_mlp(std::size_t in, const std::vector<std::size_t>& hidden,
                   std::size_t out, Act hidden_act, Act output_act,
                   Philox& rng);
MlpGrads make_grads(const MlpParams& p);

// y = W x + b for a single layer and input vector.
Tensor affine_apply(const Affine& layer, const Tensor& x);

// x is [B x in] (or a bare [in] vector, treated as B=1). Returns [B x out].
Tensor mlp_forward(const MlpParams& p, const Tensor& x,
                   MlpCache* cache = nullptr);

// dy is [B x out]; accumulates parameter gradients into `grads` (if non-null)
// and writes d(loss)/d(input) into `dx` (if non-null). The cache must come
// from the matching forward call.
void mlp_backward(const MlpParams& p, const MlpCache& cache, const Tensor& dy,
                  MlpGrads* grads, Tensor* dx = nullptr);

std::vector<std::pair<std::string, Tensor*>> named_params(
    MlpParams& p, const std::string& prefix);
std::vector<Tensor*> param_list(MlpParams& p);
std::vector<Tensor*> param_list(MlpGrads& g);
std::vector<const Tensor*> param_list(const MlpGrads& g);

}  // namespace fesrl::nn

#endif  // FESRL_NN_MLP_HPP_
