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

// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma
// and must only be entered after a CPUID check (see dispatch.cpp).

#include <immintrin.h>

#include <cmath>

#include "tfmt/kernels.hpp"

namespace tfmt::simd::avx2 {
namespace {

inline float hsum(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  lo = _mm_add_ps(lo, hi);
  __m128 shuf = _mm_movehdup_ps(lo);
  __m128 sums = _mm_add_ps(lo, shuf);
  shuf = _mm_movehl_ps(shuf, sums);
  sums = _mm_add_ss(sums, shuf);
  return _mm_cvtss_f32(sums);
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d high64 = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, high64));
}

// ---- float -----------------------------------------------------------------

float dot_f(const float* a, const float* b, std::size_t n) {
  __m256 acc0 = _mm256_setzero_ps();
  __m256 acc1 = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
    acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 8), _mm256_loadu_ps(b + i + 8), acc1);
  }
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
  }
  float acc = hsum(_mm256_add_ps(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_f(float alpha, const float* x, float* y, std::size_t n) {
  const __m256 va = _mm256_set1_ps(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(y + i, _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

// Four rows per pass so each x chunk is loaded once per group.
void gemv_f(const float* w, std::size_t rows, std::size_t cols, const float* x, float* y) {
  std::size_t r = 0;
  for (; r + 4 <= rows; r += 4) {
    const float* w0 = w + r * cols;
    const float* w1 = w0 + cols;
    const float* w2 = w1 + cols;
    const float* w3 = w2 + cols;
    __m256 a0 = _mm256_setzero_ps(), a1 = _mm256_setzero_ps();
    __m256 a2 = _mm256_setzero_ps(), a3 = _mm256_setzero_ps();
    std::size_t c = 0;
    for (; c + 8 <= cols; c += 8) {
      const __m256 xv = _mm256_loadu_ps(x + c);
      a0 = _mm256_fmadd_ps(_mm256_loadu_ps(w0 + c), xv, a0);
      a1 = _mm256_fmadd_ps(_mm256_loadu_ps(w1 + c), xv, a1);
      a2 = _mm256_fmadd_ps(_mm256_loadu_ps(w2 + c), xv, a2);
      a3 = _mm256_fmadd_ps(_mm256_loadu_ps(w3 + c), xv, a3);
    }
    float s0 = hsum(a0), s1 = hsum(a1), s2 = hsum(a2), s3 = hsum(a3);
    for (; c < cols; ++c) {
      s0 += w0[c] * x[c];
      s1 += w1[c] * x[c];
      s2 += w2[c] * x[c];
      s3 += w3[c] * x[c];
    }
    y[r] += s0;
    y[r + 1] += s1;
    y[r + 2] += s2;
    y[r + 3] += s3;
  }
  for (; r < rows; ++r) y[r] += dot_f(w + r * cols, x, cols);
}

void gemv_t_f(const float* w, std::size_t rows, std::size_t cols, const float* v, float* x) {
  for (std::size_t r = 0; r < rows; ++r) {
    if (v[r] != 0.0f) axpy_f(v[r], w + r * cols, x, cols);
  }
}

void ger_f(float alpha, const float* u, std::size_t rows, const float* v, std::size_t cols,
           float* w) {
  for (std::size_t r = 0; r < rows; ++r) {
    const float a = alpha * u[r];
    if (a != 0.0f) axpy_f(a, v, w + r * cols, cols);
  }
}

// Cephes-style expf: range reduction to [-ln2/2, ln2/2] plus a degree-6
// polynomial. Max relative error is a few ulp over the clamped range.
inline __m256 exp_ps(__m256 x) {
  const __m256 hi = _mm256_set1_ps(88.3762626647949f);
  const __m256 lo = _mm256_set1_ps(-88.3762626647949f);
  x = _mm256_min_ps(_mm256_max_ps(x, lo), hi);
  __m256 fx = _mm256_fmadd_ps(x, _mm256_set1_ps(1.44269504088896341f), _mm256_set1_ps(0.5f));
  fx = _mm256_floor_ps(fx);
  x = _mm256_fnmadd_ps(fx, _mm256_set1_ps(0.693359375f), x);
  x = _mm256_fnmadd_ps(fx, _mm256_set1_ps(-2.12194440e-4f), x);
  __m256 y = _mm256_set1_ps(1.9875691500e-4f);
  y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(1.3981999507e-3f));
  y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(8.3334519073e-3f));
  y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(4.1665795894e-2f));
  y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(1.6666665459e-1f));
  y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(5.0000001201e-1f));
  const __m256 x2 = _mm256_mul_ps(x, x);
  y = _mm256_fmadd_ps(y, x2, _mm256_add_ps(x, _mm256_set1_ps(1.0f)));
  __m256i n = _mm256_cvttps_epi32(fx);
  n = _mm256_slli_epi32(_mm256_add_epi32(n, _mm256_set1_epi32(127)), 23);
  return _mm256_mul_ps(y, _mm256_castsi256_ps(n));
}

inline __m256 tanh_ps(__m256 x) {
  const __m256 sign_mask = _mm256_set1_ps(-0.0f);
  const __m256 ax = _mm256_andnot_ps(sign_mask, x);
  // Small |x|: odd polynomial avoids cancellation in 1 - 2/(e^2x + 1).
  const __m256 z = _mm256_mul_ps(x, x);
  __m256 p = _mm256_set1_ps(-5.70498872745e-3f);
  p = _mm256_fmadd_ps(p, z, _mm256_set1_ps(2.06390887954e-2f));
  p = _mm256_fmadd_ps(p, z, _mm256_set1_ps(-5.37397155531e-2f));
  p = _mm256_fmadd_ps(p, z, _mm256_set1_ps(1.33314422036e-1f));
  p = _mm256_fmadd_ps(p, z, _mm256_set1_ps(-3.33332819422e-1f));
  const __m256 small = _mm256_fmadd_ps(_mm256_mul_ps(p, z), x, x);
  const __m256 e = exp_ps(_mm256_add_ps(ax, ax));
  __m256 large = _mm256_sub_ps(_mm256_set1_ps(1.0f),
                               _mm256_div_ps(_mm256_set1_ps(2.0f), _mm256_add_ps(e, _mm256_set1_ps(1.0f))));
  large = _mm256_or_ps(large, _mm256_and_ps(x, sign_mask));
  const __m256 use_small = _mm256_cmp_ps(ax, _mm256_set1_ps(0.625f), _CMP_LT_OQ);
  return _mm256_blendv_ps(large, small, use_small);
}

void tanh_f(const float* in, float* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) _mm256_storeu_ps(out + i, tanh_ps(_mm256_loadu_ps(in + i)));
  for (; i < n; ++i) out[i] = std::tanh(in[i]);
}

void sigmoid_f(const float* in, float* out, std::size_t n) {
  const __m256 one = _mm256_set1_ps(1.0f);
  const __m256 sign_mask = _mm256_set1_ps(-0.0f);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 x = _mm256_loadu_ps(in + i);
    // e = exp(-|x|) keeps the division well conditioned for both signs.
    const __m256 e = exp_ps(_mm256_or_ps(x, sign_mask));
    const __m256 pos = _mm256_div_ps(one, _mm256_add_ps(one, e));
    const __m256 neg = _mm256_div_ps(e, _mm256_add_ps(one, e));
    const __m256 is_neg = _mm256_cmp_ps(x, _mm256_setzero_ps(), _CMP_LT_OQ);
    _mm256_storeu_ps(out + i, _mm256_blendv_ps(pos, neg, is_neg));
  }
  for (; i < n; ++i) {
    const float x = in[i];
    out[i] = x >= 0 ? 1.0f / (1.0f + std::exp(-x)) : std::exp(x) / (1.0f + std::exp(x));
  }
}

// ---- double ----------------------------------------------------------------

double dot_d(const double* a, const double* b, std::size_t n) {
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

void axpy_d(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void gemv_d(const double* w, std::size_t rows, std::size_t cols, const double* x, double* y) {
  std::size_t r = 0;
  for (; r + 4 <= rows; r += 4) {
    const double* w0 = w + r * cols;
    const double* w1 = w0 + cols;
    const double* w2 = w1 + cols;
    const double* w3 = w2 + cols;
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    __m256d a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) {
      const __m256d xv = _mm256_loadu_pd(x + c);
      a0 = _mm256_fmadd_pd(_mm256_loadu_pd(w0 + c), xv, a0);
      a1 = _mm256_fmadd_pd(_mm256_loadu_pd(w1 + c), xv, a1);
      a2 = _mm256_fmadd_pd(_mm256_loadu_pd(w2 + c), xv, a2);
      a3 = _mm256_fmadd_pd(_mm256_loadu_pd(w3 + c), xv, a3);
    }
    double s0 = hsum(a0), s1 = hsum(a1), s2 = hsum(a2), s3 = hsum(a3);
    for (; c < cols; ++c) {
      s0 += w0[c] * x[c];
      s1 += w1[c] * x[c];
      s2 += w2[c] * x[c];
      s3 += w3[c] * x[c];
    }
    y[r] += s0;
    y[r + 1] += s1;
    y[r + 2] += s2;
    y[r + 3] += s3;
  }
  for (; r < rows; ++r) y[r] += dot_d(w + r * cols, x, cols);
}

void gemv_t_d(const double* w, std::size_t rows, std::size_t cols, const double* v, double* x) {
  for (std::size_t r = 0; r < rows; ++r) {
    if (v[r] != 0.0) axpy_d(v[r], w + r * cols, x, cols);
  }
}

void ger_d(double alpha, const double* u, std::size_t rows, const double* v, std::size_t cols,
           double* w) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double a = alpha * u[r];
    if (a != 0.0) axpy_d(a, v, w + r * cols, cols);
  }
}

// Range reduction with a split ln2 and a degree-12 Taylor polynomial; the
// remainder term is below 1e-14 relative on [-ln2/2, ln2/2].
inline __m256d exp_pd(__m256d x) {
  x = _mm256_min_pd(_mm256_max_pd(x, _mm256_set1_pd(-708.0)), _mm256_set1_pd(708.0));
  const __m256d fx = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634)),
                                     _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(fx, _mm256_set1_pd(6.93145751953125e-1), x);
  r = _mm256_fnmadd_pd(fx, _mm256_set1_pd(1.42860682030941723212e-6), r);
  static constexpr double kInvFact[] = {1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
                                        1.0 / 362880.0,    1.0 / 40320.0,    1.0 / 5040.0,
                                        1.0 / 720.0,       1.0 / 120.0,      1.0 / 24.0,
                                        1.0 / 6.0,         0.5,              1.0,
                                        1.0};
  __m256d y = _mm256_set1_pd(kInvFact[0]);
  for (int k = 1; k < 13; ++k) y = _mm256_fmadd_pd(y, r, _mm256_set1_pd(kInvFact[k]));
  __m128i n32 = _mm256_cvtpd_epi32(fx);
  __m256i n64 = _mm256_cvtepi32_epi64(n32);
  n64 = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(y, _mm256_castsi256_pd(n64));
}

void tanh_d(const double* in, double* out, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(in + i);
    const __m256d ax = _mm256_andnot_pd(sign_mask, x);
    // 1 - 2/(e^2|x| + 1) loses bits near zero; fall back per lane there.
    const __m256d e = exp_pd(_mm256_add_pd(ax, ax));
    __m256d t = _mm256_sub_pd(one, _mm256_div_pd(two, _mm256_add_pd(e, one)));
    t = _mm256_or_pd(t, _mm256_and_pd(x, sign_mask));
    _mm256_storeu_pd(out + i, t);
    const int small = _mm256_movemask_pd(_mm256_cmp_pd(ax, _mm256_set1_pd(1e-3), _CMP_LT_OQ));
    if (small) {
      for (int k = 0; k < 4; ++k) {
        if (small & (1 << k)) out[i + k] = std::tanh(in[i + k]);
      }
    }
  }
  for (; i < n; ++i) out[i] = std::tanh(in[i]);
}

void sigmoid_d(const double* in, double* out, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(in + i);
    const __m256d e = exp_pd(_mm256_or_pd(x, sign_mask));
    const __m256d pos = _mm256_div_pd(one, _mm256_add_pd(one, e));
    const __m256d neg = _mm256_div_pd(e, _mm256_add_pd(one, e));
    const __m256d is_neg = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_LT_OQ);
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(pos, neg, is_neg));
  }
  for (; i < n; ++i) {
    const double x = in[i];
    out[i] = x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  }
}

// ---- gemm ------------------------------------------------------------------

struct VecF {
  using T = float;
  using V = __m256;
  static constexpr std::size_t kLanes = 8;
  static V zero() { return _mm256_setzero_ps(); }
  static V load(const T* p) { return _mm256_loadu_ps(p); }
  static void store(T* p, V v) { _mm256_storeu_ps(p, v); }
  static V set1(T x) { return _mm256_set1_ps(x); }
  static V fma(V a, V b, V c) { return _mm256_fmadd_ps(a, b, c); }
  static V add(V a, V b) { return _mm256_add_ps(a, b); }
  static T sum(V v) { return hsum(v); }
};

struct VecD {
  using T = double;
  using V = __m256d;
  static constexpr std::size_t kLanes = 4;
  static V zero() { return _mm256_setzero_pd(); }
  static V load(const T* p) { return _mm256_loadu_pd(p); }
  static void store(T* p, V v) { _mm256_storeu_pd(p, v); }
  static V set1(T x) { return _mm256_set1_pd(x); }
  static V fma(V a, V b, V c) { return _mm256_fmadd_pd(a, b, c); }
  static V add(V a, V b) { return _mm256_add_pd(a, b); }
  static T sum(V v) { return hsum(v); }
};

// Dot-product form: 4 rows of A against 3 rows of B per block.
template <typename O>
void gemm_nt_t(std::size_t m, std::size_t n, std::size_t k, const typename O::T* a, const typename O::T* b,
               typename O::T* c) {
  using T = typename O::T;
  using V = typename O::V;
  constexpr std::size_t L = O::kLanes;
  const std::size_t kv = k - k % L;
  auto tail = [&](std::size_t i, std::size_t j) {
    T s = 0;
    for (std::size_t p = kv; p < k; ++p) s += a[i * k + p] * b[j * k + p];
    return s;
  };
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const T* a0 = a + i * k;
    const T* a1 = a0 + k;
    const T* a2 = a1 + k;
    const T* a3 = a2 + k;
    std::size_t j = 0;
    for (; j + 3 <= n; j += 3) {
      const T* b0 = b + j * k;
      const T* b1 = b0 + k;
      const T* b2 = b1 + k;
      V acc[4][3];
      for (auto& row : acc) {
        for (auto& v : row) v = O::zero();
      }
      for (std::size_t p = 0; p < kv; p += L) {
        const V bv0 = O::load(b0 + p), bv1 = O::load(b1 + p), bv2 = O::load(b2 + p);
        const V av[4] = {O::load(a0 + p), O::load(a1 + p), O::load(a2 + p), O::load(a3 + p)};
        for (int r = 0; r < 4; ++r) {
          acc[r][0] = O::fma(av[r], bv0, acc[r][0]);
          acc[r][1] = O::fma(av[r], bv1, acc[r][1]);
          acc[r][2] = O::fma(av[r], bv2, acc[r][2]);
        }
      }
      for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t q = 0; q < 3; ++q) c[(i + r) * n + j + q] += O::sum(acc[r][q]) + tail(i + r, j + q);
      }
    }
    for (; j < n; ++j) {
      for (std::size_t r = 0; r < 4; ++r) {
        V acc = O::zero();
        for (std::size_t p = 0; p < kv; p += L) acc = O::fma(O::load(a + (i + r) * k + p), O::load(b + j * k + p), acc);
        c[(i + r) * n + j] += O::sum(acc) + tail(i + r, j);
      }
    }
  }
  for (; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      V acc = O::zero();
      for (std::size_t p = 0; p < kv; p += L) acc = O::fma(O::load(a + i * k + p), O::load(b + j * k + p), acc);
      c[i * n + j] += O::sum(acc) + tail(i, j);
    }
  }
}

// Broadcast form shared by NN and TN: A(i, p) = a[i * ais + p * aps].
// Blocks of 4 rows of C by two vectors of columns stay in registers over p.
template <typename O>
void gemm_bcast(std::size_t m, std::size_t n, std::size_t k, const typename O::T* a, std::size_t ais,
                std::size_t aps, const typename O::T* b, typename O::T* c) {
  using T = typename O::T;
  using V = typename O::V;
  constexpr std::size_t L = O::kLanes;
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    std::size_t j = 0;
    for (; j + 2 * L <= n; j += 2 * L) {
      V acc[4][2];
      for (std::size_t r = 0; r < 4; ++r) {
        acc[r][0] = O::load(c + (i + r) * n + j);
        acc[r][1] = O::load(c + (i + r) * n + j + L);
      }
      for (std::size_t p = 0; p < k; ++p) {
        const V b0 = O::load(b + p * n + j);
        const V b1 = O::load(b + p * n + j + L);
        for (std::size_t r = 0; r < 4; ++r) {
          const V av = O::set1(a[(i + r) * ais + p * aps]);
          acc[r][0] = O::fma(av, b0, acc[r][0]);
          acc[r][1] = O::fma(av, b1, acc[r][1]);
        }
      }
      for (std::size_t r = 0; r < 4; ++r) {
        O::store(c + (i + r) * n + j, acc[r][0]);
        O::store(c + (i + r) * n + j + L, acc[r][1]);
      }
    }
    for (; j + L <= n; j += L) {
      V acc[4];
      for (std::size_t r = 0; r < 4; ++r) acc[r] = O::load(c + (i + r) * n + j);
      for (std::size_t p = 0; p < k; ++p) {
        const V b0 = O::load(b + p * n + j);
        for (std::size_t r = 0; r < 4; ++r) acc[r] = O::fma(O::set1(a[(i + r) * ais + p * aps]), b0, acc[r]);
      }
      for (std::size_t r = 0; r < 4; ++r) O::store(c + (i + r) * n + j, acc[r]);
    }
    for (; j < n; ++j) {
      for (std::size_t r = 0; r < 4; ++r) {
        T s = 0;
        for (std::size_t p = 0; p < k; ++p) s += a[(i + r) * ais + p * aps] * b[p * n + j];
        c[(i + r) * n + j] += s;
      }
    }
  }
  for (; i < m; ++i) {
    std::size_t j = 0;
    for (; j + L <= n; j += L) {
      V acc = O::load(c + i * n + j);
      for (std::size_t p = 0; p < k; ++p) acc = O::fma(O::set1(a[i * ais + p * aps]), O::load(b + p * n + j), acc);
      O::store(c + i * n + j, acc);
    }
    for (; j < n; ++j) {
      T s = 0;
      for (std::size_t p = 0; p < k; ++p) s += a[i * ais + p * aps] * b[p * n + j];
      c[i * n + j] += s;
    }
  }
}

template <typename O>
void gemm_nn_t(std::size_t m, std::size_t n, std::size_t k, const typename O::T* a, const typename O::T* b,
               typename O::T* c) {
  gemm_bcast<O>(m, n, k, a, k, 1, b, c);
}

template <typename O>
void gemm_tn_t(std::size_t m, std::size_t n, std::size_t k, const typename O::T* a, const typename O::T* b,
               typename O::T* c) {
  gemm_bcast<O>(m, n, k, a, 1, m, b, c);
}

constexpr KernelTable<float> kFloat{dot_f,   axpy_f,           gemv_f,           gemv_t_f,        ger_f,
                                    tanh_f,  sigmoid_f,        gemm_nt_t<VecF>,  gemm_nn_t<VecF>, gemm_tn_t<VecF>};
constexpr KernelTable<double> kDouble{dot_d,  axpy_d,           gemv_d,           gemv_t_d,        ger_d,
                                      tanh_d, sigmoid_d,        gemm_nt_t<VecD>,  gemm_nn_t<VecD>, gemm_tn_t<VecD>};

}  // namespace

template <>
const KernelTable<float>& table<float>() {
  return kFloat;
}
template <>
const KernelTable<double>& table<double>() {
  return kDouble;
}

}  // namespace tfmt::simd::avx2
