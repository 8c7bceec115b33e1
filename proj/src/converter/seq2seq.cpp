// Copyright (c) 2026.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tfmt/converter.hpp"
#include "tfmt/kernels.hpp"

namespace tfmt {

namespace {

// Layout conventions: activations are time-major, row (t * B + b). Weights
// are row-major [out][in], so y = x W^T is gemm_nt(rows, out, in, x, W, y).

template <typename T>
void fill_rows(T* dst, std::size_t rows, const std::vector<T>& bias) {
  for (std::size_t r = 0; r < rows; ++r) std::copy(bias.begin(), bias.end(), dst + r * bias.size());
}

template <typename T>
void add_colsum(const T* src, std::size_t rows, std::size_t cols, std::vector<T>& acc) {
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) acc[c] += src[r * cols + c];
}

template <typename T>
void init_uniform(std::vector<T>& v, std::size_t n, double a, Rng& rng) {
  v.resize(n);
  for (auto& x : v) x = static_cast<T>(rng.uniform(-a, a));
}

template <typename T>
GruParams<T> make_gru(std::size_t in, std::size_t hid, double scale, Rng& rng) {
  GruParams<T> g;
  g.in = in;
  g.hid = hid;
  const double a = scale / std::sqrt(static_cast<double>(hid));
  init_uniform(g.wx, 3 * hid * in, a, rng);
  init_uniform(g.wh, 3 * hid * hid, a, rng);
  init_uniform(g.bx, 3 * hid, a, rng);
  init_uniform(g.bh, 3 * hid, a, rng);
  return g;
}

// One GRU step over B rows. gx already holds x W_x^T + b_x. Rows with
// mask 0 copy h_prev through.
template <typename T>
struct GruStepCache {
  std::vector<T> rz;   // B x 2H, post-sigmoid
  std::vector<T> n;    // B x H
  std::vector<T> ghn;  // B x H, candidate part of h W_h^T + b_h
};

template <typename T>
void gru_forward(const GruParams<T>& p, std::size_t B, const T* gx, const T* h_prev, T* h,
                 const unsigned char* mask, GruStepCache<T>& cache) {
  const auto& k = simd::kernels<T>();
  const std::size_t H = p.hid;
  std::vector<T> gh(B * 3 * H);
  fill_rows(gh.data(), B, p.bh);
  k.gemm_nt(B, 3 * H, H, h_prev, p.wh.data(), gh.data());
  cache.rz.resize(B * 2 * H);
  cache.n.resize(B * H);
  cache.ghn.resize(B * H);
  for (std::size_t b = 0; b < B; ++b) {
    const T* gxr = gx + b * 3 * H;
    const T* ghr = gh.data() + b * 3 * H;
    T* rz = cache.rz.data() + b * 2 * H;
    T* n = cache.n.data() + b * H;
    T* ghn = cache.ghn.data() + b * H;
    for (std::size_t j = 0; j < 2 * H; ++j) rz[j] = gxr[j] + ghr[j];
    k.sigmoid(rz, rz, 2 * H);
    for (std::size_t j = 0; j < H; ++j) {
      ghn[j] = ghr[2 * H + j];
      n[j] = gxr[2 * H + j] + rz[j] * ghn[j];
    }
    k.tanh(n, n, H);
    const T* hp = h_prev + b * H;
    T* ho = h + b * H;
    if (mask && !mask[b]) {
      std::copy(hp, hp + H, ho);
      continue;
    }
    for (std::size_t j = 0; j < H; ++j) {
      const T z = rz[H + j];
      ho[j] = (T(1) - z) * n[j] + z * hp[j];
    }
  }
}

// dh: gradient on this step's output. Writes dgx (B x 3H), replaces dh with
// the gradient on h_prev, and accumulates weight gradients.
template <typename T>
void gru_backward(const GruParams<T>& p, GruParams<T>& g, std::size_t B, const T* h_prev,
                  const unsigned char* mask, const GruStepCache<T>& cache, T* dh, T* dgx) {
  const auto& k = simd::kernels<T>();
  const std::size_t H = p.hid;
  std::vector<T> dgh(B * 3 * H, T(0));
  std::fill(dgx, dgx + B * 3 * H, T(0));
  for (std::size_t b = 0; b < B; ++b) {
    if (mask && !mask[b]) continue;  // dh passes through unchanged
    const T* rz = cache.rz.data() + b * 2 * H;
    const T* n = cache.n.data() + b * H;
    const T* ghn = cache.ghn.data() + b * H;
    const T* hp = h_prev + b * H;
    T* d = dh + b * H;
    T* dx = dgx + b * 3 * H;
    T* dg = dgh.data() + b * 3 * H;
    for (std::size_t j = 0; j < H; ++j) {
      const T r = rz[j];
      const T z = rz[H + j];
      const T dz = d[j] * (hp[j] - n[j]);
      const T dn = d[j] * (T(1) - z) * (T(1) - n[j] * n[j]);
      const T dr = dn * ghn[j] * r * (T(1) - r);
      const T dzp = dz * z * (T(1) - z);
      dx[j] = dr;
      dx[H + j] = dzp;
      dx[2 * H + j] = dn;
      dg[j] = dr;
      dg[H + j] = dzp;
      dg[2 * H + j] = dn * r;
      d[j] = d[j] * z;
    }
  }
  k.gemm_tn(3 * H, H, B, dgh.data(), h_prev, g.wh.data());
  add_colsum(dgh.data(), B, 3 * H, g.bh);
  k.gemm_nn(B, H, 3 * H, dgh.data(), p.wh.data(), dh);
}

template <typename T>
struct EncState {
  std::size_t B = 0;
  std::size_t len = 0;  // padded input length
  std::vector<std::size_t> lens;
  std::vector<int> ids;              // len x B
  std::vector<unsigned char> mask;   // len x B
  std::vector<T> x;                  // len*B x E
  std::vector<T> hf;                 // (len+1)*B x He, hf[0] = 0
  std::vector<T> hb;                 // (len+1)*B x He, hb[len] = 0
  std::vector<GruStepCache<T>> cf, cb;
  std::vector<T> hcat;               // len*B x 2He
  std::vector<T> keys;               // len*B x Hd
  std::vector<T> init_in;            // B x 2He
  std::vector<T> h0;                 // B x Hd
};

template <typename T>
struct DecStep {
  std::vector<T> uin;    // B x (E + Hd)
  std::vector<T> h;      // B x Hd, output state
  GruStepCache<T> gru;
  std::vector<T> alpha;  // B x len
  std::vector<T> q;      // B x (Hd + 2He)
  std::vector<T> o;      // B x Hd
  std::vector<T> probs;  // B x V
};

template <typename T>
EncState<T> encode(const Seq2Seq<T>& m, std::span<const std::vector<int>* const> inputs, bool keep_cache) {
  const auto& k = simd::kernels<T>();
  EncState<T> e;
  const std::size_t B = inputs.size();
  const std::size_t E = m.config.embed_dim, He = m.config.enc_hidden, Hd = m.config.dec_hidden;
  e.B = B;
  for (const auto* in : inputs) {
    if (in->empty()) throw std::invalid_argument("Seq2Seq: empty input sequence");
    e.lens.push_back(in->size());
    e.len = std::max(e.len, in->size());
  }
  const std::size_t L = e.len;
  e.ids.assign(L * B, 0);
  e.mask.assign(L * B, 0);
  e.x.assign(L * B * E, T(0));
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t t = 0; t < e.lens[b]; ++t) {
      const int id = (*inputs[b])[t];
      if (id < 0 || static_cast<std::size_t>(id) >= m.vocab) throw std::out_of_range("Seq2Seq: input id");
      e.ids[t * B + b] = id;
      e.mask[t * B + b] = 1;
      std::copy_n(m.emb_in.begin() + id * E, E, e.x.begin() + (t * B + b) * E);
    }
  std::vector<T> gxf(L * B * 3 * He), gxb(L * B * 3 * He);
  fill_rows(gxf.data(), L * B, m.enc_f.bx);
  fill_rows(gxb.data(), L * B, m.enc_b.bx);
  k.gemm_nt(L * B, 3 * He, E, e.x.data(), m.enc_f.wx.data(), gxf.data());
  k.gemm_nt(L * B, 3 * He, E, e.x.data(), m.enc_b.wx.data(), gxb.data());

  e.hf.assign((L + 1) * B * He, T(0));
  e.hb.assign((L + 1) * B * He, T(0));
  e.cf.resize(keep_cache ? L : 1);
  e.cb.resize(keep_cache ? L : 1);
  for (std::size_t t = 0; t < L; ++t)
    gru_forward(m.enc_f, B, gxf.data() + t * B * 3 * He, e.hf.data() + t * B * He, e.hf.data() + (t + 1) * B * He,
                e.mask.data() + t * B, e.cf[keep_cache ? t : 0]);
  for (std::size_t t = L; t-- > 0;)
    gru_forward(m.enc_b, B, gxb.data() + t * B * 3 * He, e.hb.data() + (t + 1) * B * He, e.hb.data() + t * B * He,
                e.mask.data() + t * B, e.cb[keep_cache ? t : 0]);

  e.hcat.resize(L * B * 2 * He);
  for (std::size_t t = 0; t < L; ++t)
    for (std::size_t b = 0; b < B; ++b) {
      T* dst = e.hcat.data() + (t * B + b) * 2 * He;
      std::copy_n(e.hf.data() + ((t + 1) * B + b) * He, He, dst);
      std::copy_n(e.hb.data() + (t * B + b) * He, He, dst + He);
    }
  e.keys.assign(L * B * Hd, T(0));
  k.gemm_nt(L * B, Hd, 2 * He, e.hcat.data(), m.w_att.data(), e.keys.data());

  e.init_in.resize(B * 2 * He);
  for (std::size_t b = 0; b < B; ++b) {
    std::copy_n(e.hf.data() + (L * B + b) * He, He, e.init_in.data() + b * 2 * He);
    std::copy_n(e.hb.data() + b * He, He, e.init_in.data() + b * 2 * He + He);
  }
  e.h0.resize(B * Hd);
  fill_rows(e.h0.data(), B, m.b_init);
  k.gemm_nt(B, Hd, 2 * He, e.init_in.data(), m.w_init.data(), e.h0.data());
  k.tanh(e.h0.data(), e.h0.data(), B * Hd);
  return e;
}

template <typename T>
void decoder_step(const Seq2Seq<T>& m, const EncState<T>& e, const int* tokens, const T* o_prev, const T* h_prev,
                  DecStep<T>& s) {
  const auto& k = simd::kernels<T>();
  const std::size_t B = e.B, L = e.len, V = m.vocab;
  const std::size_t E = m.config.embed_dim, He = m.config.enc_hidden, Hd = m.config.dec_hidden;
  const std::size_t U = E + Hd, Q = Hd + 2 * He;
  s.uin.resize(B * U);
  for (std::size_t b = 0; b < B; ++b) {
    std::copy_n(m.emb_out.begin() + tokens[b] * E, E, s.uin.begin() + b * U);
    std::copy_n(o_prev + b * Hd, Hd, s.uin.begin() + b * U + E);
  }
  std::vector<T> gx(B * 3 * Hd);
  fill_rows(gx.data(), B, m.dec.bx);
  k.gemm_nt(B, 3 * Hd, U, s.uin.data(), m.dec.wx.data(), gx.data());
  s.h.resize(B * Hd);
  gru_forward(m.dec, B, gx.data(), h_prev, s.h.data(), nullptr, s.gru);

  s.alpha.assign(B * L, T(0));
  s.q.assign(B * Q, T(0));
  for (std::size_t b = 0; b < B; ++b) {
    const T* h = s.h.data() + b * Hd;
    T* a = s.alpha.data() + b * L;
    const std::size_t n = e.lens[b];
    T mx = -std::numeric_limits<T>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      a[t] = k.dot(h, e.keys.data() + (t * B + b) * Hd, Hd);
      mx = std::max(mx, a[t]);
    }
    T sum = 0;
    for (std::size_t t = 0; t < n; ++t) sum += (a[t] = std::exp(a[t] - mx));
    T* q = s.q.data() + b * Q;
    std::copy_n(h, Hd, q);
    for (std::size_t t = 0; t < n; ++t) {
      a[t] /= sum;
      k.axpy(a[t], e.hcat.data() + (t * B + b) * 2 * He, q + Hd, 2 * He);
    }
  }
  s.o.resize(B * Hd);
  fill_rows(s.o.data(), B, m.b_comb);
  k.gemm_nt(B, Hd, Q, s.q.data(), m.w_comb.data(), s.o.data());
  k.tanh(s.o.data(), s.o.data(), B * Hd);
  s.probs.resize(B * V);
  fill_rows(s.probs.data(), B, m.b_out);
  k.gemm_nt(B, V, Hd, s.o.data(), m.w_out.data(), s.probs.data());
}

// Logits to probabilities in place, row-wise.
template <typename T>
void softmax_rows(T* x, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    T* row = x + r * cols;
    const T mx = *std::max_element(row, row + cols);
    T sum = 0;
    for (std::size_t c = 0; c < cols; ++c) sum += (row[c] = std::exp(row[c] - mx));
    for (std::size_t c = 0; c < cols; ++c) row[c] /= sum;
  }
}

template <typename T>
T run(const Seq2Seq<T>& m, std::span<const Seq2SeqExample> batch, Seq2Seq<T>* grad) {
  if (batch.empty()) throw std::invalid_argument("Seq2Seq: empty batch");
  const auto& k = simd::kernels<T>();
  const std::size_t B = batch.size(), V = m.vocab;
  const std::size_t E = m.config.embed_dim, He = m.config.enc_hidden, Hd = m.config.dec_hidden;
  const std::size_t Uw = E + Hd, Q = Hd + 2 * He;

  std::vector<const std::vector<int>*> inputs;
  std::size_t steps = 0, ntok = 0;
  for (const auto& ex : batch) {
    if (ex.target.empty()) throw std::invalid_argument("Seq2Seq: empty target sequence");
    for (int id : ex.target)
      if (id < 0 || static_cast<std::size_t>(id) >= V) throw std::out_of_range("Seq2Seq: target id");
    inputs.push_back(&ex.input);
    steps = std::max(steps, ex.target.size());
    ntok += ex.target.size();
  }
  const EncState<T> e = encode(m, std::span<const std::vector<int>* const>(inputs), grad != nullptr);
  const std::size_t L = e.len;

  std::vector<int> dec_in(steps * B, 0), dec_tgt(steps * B, -1);
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t u = 0; u < steps; ++u) {
      const auto& tg = batch[b].target;
      dec_in[u * B + b] = u == 0 ? CharVocab::kBos : (u - 1 < tg.size() ? tg[u - 1] : 0);
      if (u < tg.size()) dec_tgt[u * B + b] = tg[u];
    }

  std::vector<DecStep<T>> st(steps);
  std::vector<T> zero_o(B * Hd, T(0));
  T total = 0;
  for (std::size_t u = 0; u < steps; ++u) {
    const T* o_prev = u == 0 ? zero_o.data() : st[u - 1].o.data();
    const T* h_prev = u == 0 ? e.h0.data() : st[u - 1].h.data();
    decoder_step(m, e, dec_in.data() + u * B, o_prev, h_prev, st[u]);
    softmax_rows(st[u].probs.data(), B, V);
    for (std::size_t b = 0; b < B; ++b) {
      const int tg = dec_tgt[u * B + b];
      if (tg >= 0) total -= std::log(std::max(st[u].probs[b * V + tg], std::numeric_limits<T>::min()));
    }
  }
  const T loss = total / static_cast<T>(ntok);
  if (!grad) return loss;

  Seq2Seq<T>& g = *grad;
  const T inv = T(1) / static_cast<T>(ntok);
  std::vector<T> dhcat(L * B * 2 * He, T(0)), dkeys(L * B * Hd, T(0));
  std::vector<T> do_next(B * Hd, T(0)), dh(B * Hd, T(0));
  std::vector<T> dl(B * V), da(B * Hd), dq(B * Q), dgx(B * 3 * Hd), duin(B * Uw);
  std::vector<T> dalpha(L);
  for (std::size_t u = steps; u-- > 0;) {
    const DecStep<T>& s = st[u];
    for (std::size_t b = 0; b < B; ++b) {
      const int tg = dec_tgt[u * B + b];
      T* row = dl.data() + b * V;
      if (tg < 0) {
        std::fill(row, row + V, T(0));
        continue;
      }
      for (std::size_t c = 0; c < V; ++c) row[c] = s.probs[b * V + c] * inv;
      row[tg] -= inv;
    }
    k.gemm_tn(V, Hd, B, dl.data(), s.o.data(), g.w_out.data());
    add_colsum(dl.data(), B, V, g.b_out);
    std::vector<T>& dob = do_next;  // gains the output-layer term
    k.gemm_nn(B, Hd, V, dl.data(), m.w_out.data(), dob.data());
    for (std::size_t i = 0; i < B * Hd; ++i) da[i] = dob[i] * (T(1) - s.o[i] * s.o[i]);
    k.gemm_tn(Hd, Q, B, da.data(), s.q.data(), g.w_comb.data());
    add_colsum(da.data(), B, Hd, g.b_comb);
    std::fill(dq.begin(), dq.end(), T(0));
    k.gemm_nn(B, Q, Hd, da.data(), m.w_comb.data(), dq.data());

    for (std::size_t b = 0; b < B; ++b) {
      T* d = dh.data() + b * Hd;
      const T* dqr = dq.data() + b * Q;
      for (std::size_t j = 0; j < Hd; ++j) d[j] += dqr[j];
      const T* dc = dqr + Hd;
      const T* a = s.alpha.data() + b * L;
      const T* h = s.h.data() + b * Hd;
      const std::size_t n = e.lens[b];
      T dot_sum = 0;
      for (std::size_t t = 0; t < n; ++t) {
        dalpha[t] = k.dot(dc, e.hcat.data() + (t * B + b) * 2 * He, 2 * He);
        dot_sum += a[t] * dalpha[t];
        k.axpy(a[t], dc, dhcat.data() + (t * B + b) * 2 * He, 2 * He);
      }
      for (std::size_t t = 0; t < n; ++t) {
        const T ds = a[t] * (dalpha[t] - dot_sum);
        k.axpy(ds, e.keys.data() + (t * B + b) * Hd, d, Hd);
        k.axpy(ds, h, dkeys.data() + (t * B + b) * Hd, Hd);
      }
    }
    const T* h_prev = u == 0 ? e.h0.data() : st[u - 1].h.data();
    gru_backward(m.dec, g.dec, B, h_prev, nullptr, s.gru, dh.data(), dgx.data());
    k.gemm_tn(3 * Hd, Uw, B, dgx.data(), s.uin.data(), g.dec.wx.data());
    add_colsum(dgx.data(), B, 3 * Hd, g.dec.bx);
    std::fill(duin.begin(), duin.end(), T(0));
    k.gemm_nn(B, Uw, 3 * Hd, dgx.data(), m.dec.wx.data(), duin.data());
    for (std::size_t b = 0; b < B; ++b) {
      const int tok = dec_in[u * B + b];
      k.axpy(T(1), duin.data() + b * Uw, g.emb_out.data() + tok * E, E);
      std::copy_n(duin.data() + b * Uw + E, Hd, do_next.data() + b * Hd);
    }
  }

  // Initial decoder state.
  std::vector<T> dinit(B * 2 * He, T(0));
  for (std::size_t i = 0; i < B * Hd; ++i) da[i] = dh[i] * (T(1) - e.h0[i] * e.h0[i]);
  k.gemm_tn(Hd, 2 * He, B, da.data(), e.init_in.data(), g.w_init.data());
  add_colsum(da.data(), B, Hd, g.b_init);
  k.gemm_nn(B, 2 * He, Hd, da.data(), m.w_init.data(), dinit.data());

  k.gemm_tn(Hd, 2 * He, L * B, dkeys.data(), e.hcat.data(), g.w_att.data());
  k.gemm_nn(L * B, 2 * He, Hd, dkeys.data(), m.w_att.data(), dhcat.data());

  std::vector<T> dgxf(L * B * 3 * He), dgxb(L * B * 3 * He), dhe(B * He);
  for (std::size_t b = 0; b < B; ++b) std::copy_n(dinit.data() + b * 2 * He, He, dhe.data() + b * He);
  for (std::size_t t = L; t-- > 0;) {
    for (std::size_t b = 0; b < B; ++b)
      k.axpy(T(1), dhcat.data() + (t * B + b) * 2 * He, dhe.data() + b * He, He);
    gru_backward(m.enc_f, g.enc_f, B, e.hf.data() + t * B * He, e.mask.data() + t * B, e.cf[t], dhe.data(),
                 dgxf.data() + t * B * 3 * He);
  }
  for (std::size_t b = 0; b < B; ++b) std::copy_n(dinit.data() + b * 2 * He + He, He, dhe.data() + b * He);
  for (std::size_t t = 0; t < L; ++t) {
    for (std::size_t b = 0; b < B; ++b)
      k.axpy(T(1), dhcat.data() + (t * B + b) * 2 * He + He, dhe.data() + b * He, He);
    gru_backward(m.enc_b, g.enc_b, B, e.hb.data() + (t + 1) * B * He, e.mask.data() + t * B, e.cb[t], dhe.data(),
                 dgxb.data() + t * B * 3 * He);
  }
  k.gemm_tn(3 * He, E, L * B, dgxf.data(), e.x.data(), g.enc_f.wx.data());
  k.gemm_tn(3 * He, E, L * B, dgxb.data(), e.x.data(), g.enc_b.wx.data());
  add_colsum(dgxf.data(), L * B, 3 * He, g.enc_f.bx);
  add_colsum(dgxb.data(), L * B, 3 * He, g.enc_b.bx);
  std::vector<T> dx(L * B * E, T(0));
  k.gemm_nn(L * B, E, 3 * He, dgxf.data(), m.enc_f.wx.data(), dx.data());
  k.gemm_nn(L * B, E, 3 * He, dgxb.data(), m.enc_b.wx.data(), dx.data());
  for (std::size_t i = 0; i < L * B; ++i)
    if (e.mask[i]) k.axpy(T(1), dx.data() + i * E, g.emb_in.data() + e.ids[i] * E, E);
  return loss;
}

template <typename T, typename F>
void for_each_tensor(Seq2Seq<T>& m, F&& f) {
  f(m.emb_in);
  f(m.emb_out);
  for (GruParams<T>* g : {&m.enc_f, &m.enc_b, &m.dec}) {
    f(g->wx);
    f(g->wh);
    f(g->bx);
    f(g->bh);
  }
  f(m.w_init);
  f(m.b_init);
  f(m.w_att);
  f(m.w_comb);
  f(m.b_comb);
  f(m.w_out);
  f(m.b_out);
}

}  // namespace

template <typename T>
Seq2Seq<T> Seq2Seq<T>::create(const Seq2SeqConfig& cfg, std::size_t vocab_size) {
  if (cfg.embed_dim == 0 || cfg.enc_hidden == 0 || cfg.dec_hidden == 0 || vocab_size < 4)
    throw std::invalid_argument("Seq2Seq::create: zero dimension");
  Rng rng(cfg.seed);
  Seq2Seq m;
  m.config = cfg;
  m.vocab = vocab_size;
  const std::size_t E = cfg.embed_dim, He = cfg.enc_hidden, Hd = cfg.dec_hidden, V = vocab_size;
  const double s = cfg.init_scale;
  init_uniform(m.emb_in, V * E, 0.5 * s, rng);
  init_uniform(m.emb_out, V * E, 0.5 * s, rng);
  m.enc_f = make_gru<T>(E, He, s, rng);
  m.enc_b = make_gru<T>(E, He, s, rng);
  m.dec = make_gru<T>(E + Hd, Hd, s, rng);
  const double a2 = s / std::sqrt(static_cast<double>(2 * He));
  init_uniform(m.w_init, Hd * 2 * He, a2, rng);
  init_uniform(m.b_init, Hd, a2, rng);
  init_uniform(m.w_att, Hd * 2 * He, a2, rng);
  const double ac = s / std::sqrt(static_cast<double>(Hd + 2 * He));
  init_uniform(m.w_comb, Hd * (Hd + 2 * He), ac, rng);
  init_uniform(m.b_comb, Hd, ac, rng);
  const double ao = s / std::sqrt(static_cast<double>(Hd));
  init_uniform(m.w_out, V * Hd, ao, rng);
  init_uniform(m.b_out, V, ao, rng);
  return m;
}

template <typename T>
Seq2Seq<T> Seq2Seq<T>::zeros_like() const {
  Seq2Seq z = *this;
  for_each_tensor(z, [](std::vector<T>& v) { std::fill(v.begin(), v.end(), T(0)); });
  return z;
}

template <typename T>
template <typename U>
Seq2Seq<U> Seq2Seq<T>::cast() const {
  Seq2Seq<U> out;
  out.config = config;
  out.vocab = vocab;
  auto conv = [](const std::vector<T>& v) { return std::vector<U>(v.begin(), v.end()); };
  auto conv_gru = [&](const GruParams<T>& g) {
    return GruParams<U>{g.in, g.hid, conv(g.wx), conv(g.wh), conv(g.bx), conv(g.bh)};
  };
  out.emb_in = conv(emb_in);
  out.emb_out = conv(emb_out);
  out.enc_f = conv_gru(enc_f);
  out.enc_b = conv_gru(enc_b);
  out.dec = conv_gru(dec);
  out.w_init = conv(w_init);
  out.b_init = conv(b_init);
  out.w_att = conv(w_att);
  out.w_comb = conv(w_comb);
  out.b_comb = conv(b_comb);
  out.w_out = conv(w_out);
  out.b_out = conv(b_out);
  return out;
}

template <typename T>
std::vector<std::span<T>> Seq2Seq<T>::tensors() {
  std::vector<std::span<T>> out;
  for_each_tensor(*this, [&](std::vector<T>& v) { out.emplace_back(v); });
  return out;
}

template <typename T>
std::vector<std::span<const T>> Seq2Seq<T>::tensors() const {
  std::vector<std::span<const T>> out;
  for_each_tensor(const_cast<Seq2Seq&>(*this), [&](std::vector<T>& v) { out.emplace_back(v); });
  return out;
}

template <typename T>
std::vector<std::string> Seq2Seq<T>::tensor_names() {
  std::vector<std::string> names = {"emb_in", "emb_out"};
  for (const char* g : {"enc_f", "enc_b", "dec"})
    for (const char* w : {"wx", "wh", "bx", "bh"}) names.push_back(std::string(g) + "." + w);
  for (const char* n : {"w_init", "b_init", "w_att", "w_comb", "b_comb", "w_out", "b_out"}) names.emplace_back(n);
  return names;
}

template <typename T>
std::optional<std::string> Seq2Seq<T>::validate() const {
  const std::size_t E = config.embed_dim, He = config.enc_hidden, Hd = config.dec_hidden, V = vocab;
  const std::vector<std::size_t> sizes = {
      V * E, V * E,
      3 * He * E, 3 * He * He, 3 * He, 3 * He,
      3 * He * E, 3 * He * He, 3 * He, 3 * He,
      3 * Hd * (E + Hd), 3 * Hd * Hd, 3 * Hd, 3 * Hd,
      Hd * 2 * He, Hd, Hd * 2 * He, Hd * (Hd + 2 * He), Hd, V * Hd, V};
  const auto ts = tensors();
  const auto names = tensor_names();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i].size() != sizes[i]) {
      std::ostringstream os;
      os << "tensor " << names[i] << " has " << ts[i].size() << " values, expected " << sizes[i];
      return os.str();
    }
    for (T x : ts[i])
      if (!std::isfinite(x)) return "tensor " + names[i] + " has a non-finite value";
  }
  if (enc_f.in != E || enc_b.in != E || dec.in != E + Hd || enc_f.hid != He || enc_b.hid != He || dec.hid != Hd)
    return std::string("recurrent layer dimensions disagree with the config");
  return std::nullopt;
}

template <typename T>
T Seq2Seq<T>::loss(std::span<const Seq2SeqExample> batch) const {
  return run<T>(*this, batch, nullptr);
}

template <typename T>
T Seq2Seq<T>::loss_and_gradient(std::span<const Seq2SeqExample> batch, Seq2Seq& grad) const {
  return run(*this, batch, &grad);
}

template <typename T>
std::size_t Seq2Seq<T>::length_cap(std::size_t input_length) const {
  return static_cast<std::size_t>(config.max_output_factor * static_cast<double>(input_length)) +
         config.max_output_constant;
}

template <typename T>
DecodeResult Seq2Seq<T>::greedy_decode(std::span<const int> input) const {
  if (input.empty()) throw std::invalid_argument("greedy_decode: empty input");
  const std::vector<int> in(input.begin(), input.end());
  const std::vector<int>* ptr = &in;
  const EncState<T> e = encode(*this, std::span<const std::vector<int>* const>(&ptr, 1), false);
  DecodeResult out;
  out.cap = length_cap(input.size());
  std::vector<T> o(config.dec_hidden, T(0));
  std::vector<T> h = e.h0;
  int tok = CharVocab::kBos;
  DecStep<T> s;
  while (true) {
    decoder_step(*this, e, &tok, o.data(), h.data(), s);
    // Argmax over logits equals argmax over probabilities; first max wins.
    const auto it = std::max_element(s.probs.begin(), s.probs.end());
    tok = static_cast<int>(it - s.probs.begin());
    if (tok == CharVocab::kEos) break;
    if (out.ids.size() == out.cap) {
      out.truncated = true;
      break;
    }
    out.ids.push_back(tok);
    o = s.o;
    h = s.h;
  }
  return out;
}

template class Seq2Seq<float>;
template class Seq2Seq<double>;
template Seq2Seq<double> Seq2Seq<float>::cast<double>() const;
template Seq2Seq<float> Seq2Seq<double>::cast<float>() const;
template Seq2Seq<float> Seq2Seq<float>::cast<float>() const;
template Seq2Seq<double> Seq2Seq<double>::cast<double>() const;

}  // namespace tfmt
