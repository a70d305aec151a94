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

#include "fesrl/nn/gru.hpp"

#include <cmath>
#include <stdexcept>

#include "fesrl/kern/kernels.hpp"

namespace fesrl::nn {
namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_dims(const GruParams& p, const Tensor& h, const Tensor& x) {
  if (h.cols() != p.hidden_dim || x.cols() != p.input_dim ||
      h.rows() != x.rows()) {
    throw std::invalid_argument("gru: input " + x.shape_str() + " / hidden " +
                                h.shape_str() + " do not match params (in=" +
                                std::to_string(p.input_dim) + ", hidden=" +
                                std::to_string(p.hidden_dim) + ")");
  }
}

// u = [x ; h] rows side by side.
void concat_rows(const Tensor& x, const Tensor& h, Tensor& u) {
  const std::size_t b = x.rows(), nx = x.cols(), nh = h.cols();
  for (std::size_t i = 0; i < b; ++i) {
    double* ur = u.row(i);
    const double* xr = x.row(i);
    const double* hr = h.row(i);
    for (std::size_t j = 0; j < nx; ++j) ur[j] = xr[j];
    for (std::size_t j = 0; j < nh; ++j) ur[nx + j] = hr[j];
  }
}

// gate = act(u Wg^T + bg)
void gate_forward(const Tensor& u, const Tensor& w, const Tensor& bias,
                  Tensor& gate, bool use_tanh) {
  const std::size_t b = u.rows(), nh = w.rows();
  kern::gemm_nt(b, nh, w.cols(), u.ptr(), w.ptr(), gate.ptr(), false);
  for (std::size_t i = 0; i < b; ++i) {
    double* g = gate.row(i);
    const double* bp = bias.ptr();
    if (use_tanh) {
      for (std::size_t j = 0; j < nh; ++j) g[j] = std::tanh(g[j] + bp[j]);
    } else {
      for (std::size_t j = 0; j < nh; ++j) g[j] = sigmoid(g[j] + bp[j]);
    }
  }
}

}  // namespace

void GruGrads::zero() {
  wz.zero();
  wr.zero();
  wc.zero();
  bz.zero();
  br.zero();
  bc.zero();
  ro_w.zero();
  ro_b.zero();
}

void GruWorkspace::resize(std::size_t batch, std::size_t input,
                          std::size_t hidden) {
  const std::size_t nu = input + hidden;
  auto need = [batch](Tensor& t, std::size_t c) {
    if (t.rows() != batch || t.cols() != c) t = Tensor({batch, c});
  };
  need(u, nu);
  need(uc, nu);
  need(dz, hidden);
  need(dc, hidden);
  need(dac, hidden);
  need(daz, hidden);
  need(dar, hidden);
  need(dr, hidden);
  need(du, nu);
  need(duc, nu);
}

GruParams make_gru(std::size_t input, std::size_t hidden, std::size_t readout,
                   Philox& rng) {
  GruParams p;
  p.input_dim = input;
  p.hidden_dim = hidden;
  p.readout_dim = readout;
  const std::size_t nu = input + hidden;
  p.wz = Tensor({hidden, nu});
  p.wr = Tensor({hidden, nu});
  p.wc = Tensor({hidden, nu});
  glorot_init(p.wz, rng);
  glorot_init(p.wr, rng);
  glorot_init(p.wc, rng);
  p.bz = Tensor({hidden});
  p.br = Tensor({hidden});
  p.bc = Tensor({hidden});
  // Update-gate bias starts at -1 so fresh hidden state decays slowly.
  p.bz.fill(-1.0);
  p.ro_w = Tensor({readout, hidden});
  glorot_init(p.ro_w, rng);
  p.ro_b = Tensor({readout});
  return p;
}

GruGrads make_grads(const GruParams& p) {
  GruGrads g;
  g.wz = Tensor(p.wz.shape);
  g.wr = Tensor(p.wr.shape);
  g.wc = Tensor(p.wc.shape);
  g.bz = Tensor(p.bz.shape);
  g.br = Tensor(p.br.shape);
  g.bc = Tensor(p.bc.shape);
  g.ro_w = Tensor(p.ro_w.shape);
  g.ro_b = Tensor(p.ro_b.shape);
  return g;
}

void gru_cell_forward(const GruParams& p, const Tensor& h_prev,
                      const Tensor& x, Tensor& h_out, GruStepCache* cache,
                      GruWorkspace& ws) {
  check_dims(p, h_prev, x);
  require_finite(x, "gru_cell_forward");
  require_finite(h_prev, "gru_cell_forward");
  const std::size_t b = x.rows(), nh = p.hidden_dim, nx = p.input_dim;
  ws.resize(b, nx, nh);
  concat_rows(x, h_prev, ws.u);

  Tensor* z = cache ? &cache->z : &ws.dz;
  Tensor* r = cache ? &cache->r : &ws.dr;
  Tensor* c = cache ? &cache->c : &ws.dc;
  if (cache) {
    if (z->rows() != b || z->cols() != nh) {
      *z = Tensor({b, nh});
      *r = Tensor({b, nh});
      *c = Tensor({b, nh});
    }
  }
  gate_forward(ws.u, p.wz, p.bz, *z, false);
  gate_forward(ws.u, p.wr, p.br, *r, false);

  // uc = [x ; r.h]
  for (std::size_t i = 0; i < b; ++i) {
    double* ucr = ws.uc.row(i);
    const double* xr = x.row(i);
    const double* hr = h_prev.row(i);
    const double* rr = r->row(i);
    for (std::size_t j = 0; j < nx; ++j) ucr[j] = xr[j];
    for (std::size_t j = 0; j < nh; ++j) ucr[nx + j] = rr[j] * hr[j];
  }
  gate_forward(ws.uc, p.wc, p.bc, *c, true);

  if (h_out.rows() != b || h_out.cols() != nh) h_out = Tensor({b, nh});
  for (std::size_t i = 0; i < b; ++i) {
    double* ho = h_out.row(i);
    const double* hp = h_prev.row(i);
    const double* zr = z->row(i);
    const double* cr = c->row(i);
    for (std::size_t j = 0; j < nh; ++j) {
      ho[j] = (1.0 - zr[j]) * hp[j] + zr[j] * cr[j];
    }
  }
}

Tensor gru_cell_step(const GruParams& p, const Tensor& h, const Tensor& x) {
  Tensor hb({1, h.size()});
  hb.data = h.data;
  Tensor xb({1, x.size()});
  xb.data = x.data;
  Tensor out;
  GruWorkspace ws;
  gru_cell_forward(p, hb, xb, out, nullptr, ws);
  out.shape = {out.size()};
  return out;
}

void gru_cell_backward(const GruParams& p, const Tensor& h_prev,
                       const Tensor& x, const GruStepCache& cache,
                       const Tensor& dh, GruGrads& grads, Tensor& dh_prev,
                       Tensor* dx, GruWorkspace& ws) {
  const std::size_t b = x.rows(), nh = p.hidden_dim, nx = p.input_dim;
  ws.resize(b, nx, nh);
  concat_rows(x, h_prev, ws.u);
  // uc = [x ; r.h]
  for (std::size_t i = 0; i < b; ++i) {
    double* ucr = ws.uc.row(i);
    const double* xr = x.row(i);
    const double* hr = h_prev.row(i);
    const double* rr = cache.r.row(i);
    for (std::size_t j = 0; j < nx; ++j) ucr[j] = xr[j];
    for (std::size_t j = 0; j < nh; ++j) ucr[nx + j] = rr[j] * hr[j];
  }

  // h' = (1-z).h + z.c
  for (std::size_t i = 0; i < b; ++i) {
    const double* dhr = dh.row(i);
    const double* hp = h_prev.row(i);
    const double* zr = cache.z.row(i);
    const double* cr = cache.c.row(i);
    double* dzr = ws.dz.row(i);
    double* dcr = ws.dc.row(i);
    double* dhp = dh_prev.row(i);
    for (std::size_t j = 0; j < nh; ++j) {
      dzr[j] = dhr[j] * (cr[j] - hp[j]);
      dcr[j] = dhr[j] * zr[j];
      dhp[j] += dhr[j] * (1.0 - zr[j]);
    }
  }

  // candidate pre-activation
  for (std::size_t i = 0; i < b; ++i) {
    const double* cr = cache.c.row(i);
    const double* dcr = ws.dc.row(i);
    double* dacr = ws.dac.row(i);
    for (std::size_t j = 0; j < nh; ++j) {
      dacr[j] = dcr[j] * (1.0 - cr[j] * cr[j]);
    }
  }
  kern::gemm_tn(b, nh, nx + nh, ws.dac.ptr(), ws.uc.ptr(), grads.wc.ptr(),
                true);
  for (std::size_t i = 0; i < b; ++i) {
    kern::axpy(nh, 1.0, ws.dac.row(i), grads.bc.ptr());
  }
  kern::gemm_nn(b, nx + nh, nh, ws.dac.ptr(), p.wc.ptr(), ws.duc.ptr(), false);

  // split duc into dx part and d(r.h) part
  for (std::size_t i = 0; i < b; ++i) {
    const double* ducr = ws.duc.row(i);
    const double* hp = h_prev.row(i);
    const double* rr = cache.r.row(i);
    double* drr = ws.dr.row(i);
    double* dhp = dh_prev.row(i);
    for (std::size_t j = 0; j < nh; ++j) {
      drr[j] = ducr[nx + j] * hp[j];
      dhp[j] += ducr[nx + j] * rr[j];
    }
  }

  // gate pre-activations
  for (std::size_t i = 0; i < b; ++i) {
    const double* zr = cache.z.row(i);
    const double* rr = cache.r.row(i);
    const double* dzr = ws.dz.row(i);
    const double* drr = ws.dr.row(i);
    double* dazr = ws.daz.row(i);
    double* darr = ws.dar.row(i);
    for (std::size_t j = 0; j < nh; ++j) {
      dazr[j] = dzr[j] * zr[j] * (1.0 - zr[j]);
      darr[j] = drr[j] * rr[j] * (1.0 - rr[j]);
    }
  }
  kern::gemm_tn(b, nh, nx + nh, ws.daz.ptr(), ws.u.ptr(), grads.wz.ptr(),
                true);
  kern::gemm_tn(b, nh, nx + nh, ws.dar.ptr(), ws.u.ptr(), grads.wr.ptr(),
                true);
  for (std::size_t i = 0; i < b; ++i) {
    kern::axpy(nh, 1.0, ws.daz.row(i), grads.bz.ptr());
    kern::axpy(nh, 1.0, ws.dar.row(i), grads.br.ptr());
  }
  kern::gemm_nn(b, nx + nh, nh, ws.daz.ptr(), p.wz.ptr(), ws.du.ptr(), false);
  kern::gemm_nn(b, nx + nh, nh, ws.dar.ptr(), p.wr.ptr(), ws.du.ptr(), true);

  for (std::size_t i = 0; i < b; ++i) {
    const double* dur = ws.du.row(i);
    const double* ducr = ws.duc.row(i);
    double* dhp = dh_prev.row(i);
    for (std::size_t j = 0; j < nh; ++j) dhp[j] += dur[nx + j];
    if (dx) {
      double* dxr = dx->row(i);
      for (std::size_t j = 0; j < nx; ++j) dxr[j] += dur[j] + ducr[j];
    }
  }
}

void gru_readout(const GruParams& p, const Tensor& h, Tensor& y) {
  const std::size_t b = h.rows();
  if (y.rows() != b || y.cols() != p.readout_dim) {
    y = Tensor({b, p.readout_dim});
  }
  kern::gemm_nt(b, p.readout_dim, p.hidden_dim, h.ptr(), p.ro_w.ptr(), y.ptr(),
                false);
  for (std::size_t i = 0; i < b; ++i) {
    kern::axpy(p.readout_dim, 1.0, p.ro_b.ptr(), y.row(i));
  }
}

void gru_readout_backward(const GruParams& p, const Tensor& h,
                          const Tensor& dy, GruGrads& grads, Tensor& dh) {
  const std::size_t b = h.rows();
  kern::gemm_tn(b, p.readout_dim, p.hidden_dim, dy.ptr(), h.ptr(),
                grads.ro_w.ptr(), true);
  for (std::size_t i = 0; i < b; ++i) {
    kern::axpy(p.readout_dim, 1.0, dy.row(i), grads.ro_b.ptr());
  }
  kern::gemm_nn(b, p.hidden_dim, p.readout_dim, dy.ptr(), p.ro_w.ptr(),
                dh.ptr(), true);
}

std::vector<std::pair<std::string, Tensor*>> named_params(
    GruParams& p, const std::string& gru_prefix,
    const std::string& readout_prefix) {
  return {
      {gru_prefix + ".wz", &p.wz}, {gru_prefix + ".wr", &p.wr},
      {gru_prefix + ".wc", &p.wc}, {gru_prefix + ".bz", &p.bz},
      {gru_prefix + ".br", &p.br}, {gru_prefix + ".bc", &p.bc},
      {readout_prefix + ".w", &p.ro_w}, {readout_prefix + ".b", &p.ro_b},
  };
}

std::vector<Tensor*> param_list(GruParams& p) {
  return {&p.wz, &p.wr, &p.wc, &p.bz, &p.br, &p.bc, &p.ro_w, &p.ro_b};
}

std::vector<Tensor*> param_list(GruGrads& g) {
  return {&g.wz, &g.wr, &g.wc, &g.bz, &g.br, &g.bc, &g.ro_w, &g.ro_b};
}

std::vector<const Tensor*> param_list(const GruGrads& g) {
  return {&g.wz, &g.wr, &g.wc, &g.bz, &g.br, &g.bc, &g.ro_w, &g.ro_b};
}

}  // namespace fesrl::nn
