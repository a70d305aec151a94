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

#include "fesrl/nn/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "fesrl/kern/kernels.hpp"

namespace fesrl::nn {
namespace {

void apply_act_inplace(Act a, Tensor& t) {
  switch (a) {
    case Act::identity:
      break;
    case Act::relu:
      for (double& v : t.data) v = v > 0.0 ? v : 0.0;
      break;
    case Act::tanh:
      for (double& v : t.data) v = std::tanh(v);
      break;
    case Act::sigmoid:
      for (double& v : t.data) v = 1.0 / (1.0 + std::exp(-v));
      break;
  }
}

// Derivative expressed through the post-activation value.
void act_backward_inplace(Act a, const Tensor& post, Tensor& d) {
  switch (a) {
    case Act::identity:
      break;
    case Act::relu:
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (post.at(i) <= 0.0) d.at(i) = 0.0;
      }
      break;
    case Act::tanh:
      for (std::size_t i = 0; i < d.size(); ++i) {
        const double y = post.at(i);
        d.at(i) *= 1.0 - y * y;
      }
      break;
    case Act::sigmoid:
      for (std::size_t i = 0; i < d.size(); ++i) {
        const double y = post.at(i);
        d.at(i) *= y * (1.0 - y);
      }
      break;
  }
}

Tensor as_batch(const Tensor& x) {
  if (x.shape.size() == 2) return x;
  Tensor b({1, x.size()});
  b.data = x.data;
  return b;
}

}  // namespace

double apply_act(Act a, double x) {
  switch (a) {
    case Act::identity:
      return x;
    case Act::relu:
      return x > 0.0 ? x : 0.0;
    case Act::tanh:
      return std::tanh(x);
    case Act::sigmoid:
      return 1.0 / (1.0 + std::exp(-x));
  }
  return x;
}

void MlpGrads::zero() {
  for (auto& l : layers) {
    l.w.zero();
    l.b.zero();
  }
}

MlpParams make_mlp(std::size_t in, const std::vector<std::size_t>& hidden,
                   std::size_t out, Act hidden_act, Act output_act,
                   Philox& rng) {
  MlpParams p;
  p.hidden = hidden_act;
  p.output = output_act;
  std::size_t prev = in;
  for (std::size_t h : hidden) {
    Affine l{Tensor({h, prev}), Tensor({h})};
    glorot_init(l.w, rng);
    p.layers.push_back(std::move(l));
    prev = h;
  }
  Affine l{Tensor({out, prev}), Tensor({out})};
  glorot_init(l.w, rng);
  p.layers.push_back(std::move(l));
  return p;
}

MlpGrads make_grads(const MlpParams& p) {
  MlpGrads g;
  for (const auto& l : p.layers) {
    g.layers.push_back({Tensor(l.w.shape), Tensor(l.b.shape)});
  }
  return g;
}

Tensor affine_apply(const Affine& layer, const Tensor& x) {
  if (x.size() != layer.w.cols()) {
    throw std::invalid_argument("affine_apply: input length " +
                                x.shape_str() + " does not match weight " +
                                layer.w.shape_str());
  }
  require_finite(x, "affine_apply");
  Tensor y({layer.w.rows()});
  kern::gemm_nt(1, layer.w.rows(), layer.w.cols(), x.ptr(), layer.w.ptr(),
                y.ptr(), false);
  kern::axpy(y.size(), 1.0, layer.b.ptr(), y.ptr());
  return y;
}

Tensor mlp_forward(const MlpParams& p, const Tensor& x, MlpCache* cache) {
  Tensor cur = as_batch(x);
  if (cur.cols() != p.input_dim()) {
    throw std::invalid_argument("mlp_forward: input " + cur.shape_str() +
                                " does not match first layer " +
                                p.layers.front().w.shape_str());
  }
  require_finite(cur, "mlp_forward");
  if (cache) {
    cache->input = cur;
    cache->post.clear();
  }
  const std::size_t batch = cur.rows();
  for (std::size_t li = 0; li < p.layers.size(); ++li) {
    const Affine& l = p.layers[li];
    Tensor next({batch, l.w.rows()});
    kern::gemm_nt(batch, l.w.rows(), l.w.cols(), cur.ptr(), l.w.ptr(),
                  next.ptr(), false);
    for (std::size_t r = 0; r < batch; ++r) {
      kern::axpy(l.w.rows(), 1.0, l.b.ptr(), next.row(r));
    }
    apply_act_inplace(li + 1 == p.layers.size() ? p.output : p.hidden, next);
    cur = std::move(next);
    if (cache) cache->post.push_back(cur);
  }
  if (x.shape.size() == 1) cur.shape = {cur.size()};
  return cur;
}

void mlp_backward(const MlpParams& p, const MlpCache& cache, const Tensor& dy,
                  MlpGrads* grads, Tensor* dx) {
  if (cache.post.size() != p.layers.size()) {
    throw std::invalid_argument("mlp_backward: cache does not match network");
  }
  Tensor d = as_batch(dy);
  if (d.rows() != cache.input.rows() ||
      d.cols() != p.layers.back().w.rows()) {
    throw std::invalid_argument("mlp_backward: dy " + d.shape_str() +
                                " does not match cached forward batch");
  }
  const std::size_t batch = d.rows();
  for (std::size_t li = p.layers.size(); li-- > 0;) {
    const Affine& l = p.layers[li];
    act_backward_inplace(li + 1 == p.layers.size() ? p.output : p.hidden,
                         cache.post[li], d);
    const Tensor& in = li == 0 ? cache.input : cache.post[li - 1];
    if (grads) {
      kern::gemm_tn(batch, l.w.rows(), l.w.cols(), d.ptr(), in.ptr(),
                    grads->layers[li].w.ptr(), true);
      for (std::size_t r = 0; r < batch; ++r) {
        kern::axpy(l.w.rows(), 1.0, d.row(r), grads->layers[li].b.ptr());
      }
    }
    if (li == 0 && !dx) break;
    Tensor dprev({batch, l.w.cols()});
    kern::gemm_nn(batch, l.w.cols(), l.w.rows(), d.ptr(), l.w.ptr(),
                  dprev.ptr(), false);
    d = std::move(dprev);
  }
  if (dx) {
    if (dy.shape.size() == 1) d.shape = {d.size()};
    *dx = std::move(d);
  }
}

std::vector<std::pair<std::string, Tensor*>> named_params(
    MlpParams& p, const std::string& prefix) {
  std::vector<std::pair<std::string, Tensor*>> out;
  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    out.emplace_back(prefix + ".l" + std::to_string(i) + ".w",
                     &p.layers[i].w);
    out.emplace_back(prefix + ".l" + std::to_string(i) + ".b",
                     &p.layers[i].b);
  }
  return out;
}

std::vector<Tensor*> param_list(MlpParams& p) {
  std::vector<Tensor*> out;
  for (auto& l : p.layers) {
    out.push_back(&l.w);
    out.push_back(&l.b);
  }
  return out;
}

std::vector<Tensor*> param_list(MlpGrads& g) {
  std::vector<Tensor*> out;
  for (auto& l : g.layers) {
    out.push_back(&l.w);
    out.push_back(&l.b);
  }
  return out;
}

std::vector<const Tensor*> param_list(const MlpGrads& g) {
  std::vector<const Tensor*> out;
  for (const auto& l : g.layers) {
    out.push_back(&l.w);
    out.push_back(&l.b);
  }
  return out;
}

}  // namespace fesrl::nn
