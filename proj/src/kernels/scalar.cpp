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

// Reference kernels. These define the semantics every SIMD variant is
// tested against.

#include <algorithm>
#include <cmath>

#include "tfmt/kernels.hpp"

namespace tfmt::simd::scalar {
namespace {

template <typename T>
T dot(const T* a, const T* b, std::size_t n) {
  T acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

template <typename T>
void axpy(T alpha, const T* x, T* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <typename T>
void gemv(const T* w, std::size_t rows, std::size_t cols, const T* x, T* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] += dot(w + r * cols, x, cols);
}

template <typename T>
void gemv_t(const T* w, std::size_t rows, std::size_t cols, const T* v, T* x) {
  for (std::size_t r = 0; r < rows; ++r) {
    if (v[r] != T(0)) axpy(v[r], w + r * cols, x, cols);
  }
}

template <typename T>
void ger(T alpha, const T* u, std::size_t rows, const T* v, std::size_t cols, T* w) {
  for (std::size_t r = 0; r < rows; ++r) {
    const T a = alpha * u[r];
    if (a != T(0)) axpy(a, v, w + r * cols, cols);
  }
}

template <typename T>
void tanh_k(const T* in, T* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::tanh(in[i]);
}

template <typename T>
void sigmoid(const T* in, T* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const T x = in[i];
    if (x >= 0) {
      out[i] = T(1) / (T(1) + std::exp(-x));
    } else {
      const T e = std::exp(x);
      out[i] = e / (T(1) + e);
    }
  }
}

template <typename T>
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const T* a, const T* b, T* c) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) c[i * n + j] += dot(a + i * k, b + j * k, k);
  }
}

template <typename T>
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const T* a, const T* b, T* c) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) axpy(a[i * k + p], b + p * n, c + i * n, n);
  }
}

template <typename T>
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const T* a, const T* b, T* c) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) axpy(a[p * m + i], b + p * n, c + i * n, n);
  }
}

template <typename T>
constexpr KernelTable<T> kTable{dot<T>,       axpy<T>,       gemv<T>,       gemv_t<T>,
                                ger<T>,       tanh_k<T>,     sigmoid<T>,    gemm_nt<T>,
                                gemm_nn<T>,   gemm_tn<T>};

}  // namespace

template <typename T>
const KernelTable<T>& table() {
  return kTable<T>;
}

template const KernelTable<float>& table<float>();
template const KernelTable<double>& table<double>();

}  // namespace tfmt::simd::scalar
