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

#pragma once

// Dense float/double kernels used by the tagger and converter inner loops.
//
// Every kernel has a portable scalar reference and, on x86-64, an AVX2+FMA
// variant. The variant is picked once at startup from CPUID; setting the
// environment variable TFMT_ISA=scalar forces the reference path.

#include <cstddef>
#include <span>

namespace tfmt::simd {

enum class Isa { kScalar, kAvx2 };

const char* isa_name(Isa isa);
bool isa_supported(Isa isa);

Isa active_isa();
// Throws std::invalid_argument if `isa` is not supported on this CPU.
void set_active_isa(Isa isa);

// Row-major matrices throughout: w[r * cols + c].
template <typename T>
struct KernelTable {
  T (*dot)(const T* a, const T* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(T alpha, const T* x, T* y, std::size_t n);
  // y += W x
  void (*gemv)(const T* w, std::size_t rows, std::size_t cols, const T* x, T* y);
  // x += W^T v
  void (*gemv_t)(const T* w, std::size_t rows, std::size_t cols, const T* v, T* x);
  // W += alpha * u v^T
  void (*ger)(T alpha, const T* u, std::size_t rows, const T* v, std::size_t cols, T* w);
  // out[i] = tanh(in[i]); in-place allowed.
  void (*tanh)(const T* in, T* out, std::size_t n);
  // out[i] = 1 / (1 + exp(-in[i])); in-place allowed.
  void (*sigmoid)(const T* in, T* out, std::size_t n);
  // C (m x n) += A (m x k) * B^T, B stored n x k.
  void (*gemm_nt)(std::size_t m, std::size_t n, std::size_t k, const T* a, const T* b, T* c);
  // C (m x n) += A (m x k) * B, B stored k x n.
  void (*gemm_nn)(std::size_t m, std::size_t n, std::size_t k, const T* a, const T* b, T* c);
  // C (m x n) += A^T * B, A stored k x m, B stored k x n.
  void (*gemm_tn)(std::size_t m, std::size_t n, std::size_t k, const T* a, const T* b, T* c);
};

template <typename T>
const KernelTable<T>& kernel_table(Isa isa);

template <typename T>
const KernelTable<T>& kernels() {
  return kernel_table<T>(active_isa());
}

namespace scalar {
template <typename T>
const KernelTable<T>& table();
}
namespace avx2 {
template <typename T>
const KernelTable<T>& table();
}

// Span conveniences over the active table.

template <typename T>
T dot(std::span<const T> a, std::span<const T> b) {
  return kernels<T>().dot(a.data(), b.data(), a.size());
}

template <typename T>
void axpy(T alpha, std::span<const T> x, std::span<T> y) {
  kernels<T>().axpy(alpha, x.data(), y.data(), x.size());
}

template <typename T>
void gemv(std::span<const T> w, std::size_t rows, std::size_t cols, std::span<const T> x,
          std::span<T> y) {
  kernels<T>().gemv(w.data(), rows, cols, x.data(), y.data());
}

template <typename T>
void gemv_t(std::span<const T> w, std::size_t rows, std::size_t cols, std::span<const T> v,
            std::span<T> x) {
  kernels<T>().gemv_t(w.data(), rows, cols, v.data(), x.data());
}

template <typename T>
void ger(T alpha, std::span<const T> u, std::span<const T> v, std::span<T> w) {
  kernels<T>().ger(alpha, u.data(), u.size(), v.data(), v.size(), w.data());
}

}  // namespace tfmt::simd
