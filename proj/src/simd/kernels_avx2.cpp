// Copyright 2026 The harbench Authors.
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

// Compiled with -mavx2 -mpopcnt. Nothing here may run before the dispatcher
// has confirmed CPU support.

#include <immintrin.h>

#include "harbench/simd/kernels.hpp"

namespace harbench::simd::detail {
namespace {

void accumulate_avx2(float* acc, const float* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 a = _mm256_loadu_ps(acc + i);
    _mm256_storeu_ps(acc + i, _mm256_add_ps(a, _mm256_loadu_ps(src + i)));
  }
  for (; i < n; ++i) acc[i] += src[i];
}

void combine3_avx2(const float* base, const float* a, const float* b, const float* c, float* out,
                   std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 s = _mm256_add_ps(_mm256_loadu_ps(base + i), _mm256_loadu_ps(a + i));
    s = _mm256_add_ps(s, _mm256_loadu_ps(b + i));
    s = _mm256_add_ps(s, _mm256_loadu_ps(c + i));
    _mm256_storeu_ps(out + i, s);
  }
  for (; i < n; ++i) out[i] = ((base[i] + a[i]) + b[i]) + c[i];
}

void ppv_avx2(const float* values, std::size_t n, const float* thresholds, std::size_t count,
              float* out) {
  for (std::size_t j = 0; j < count; ++j) {
    const float t = thresholds[j];
    const __m256 tv = _mm256_set1_ps(t);
    std::size_t hits = 0;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
      const int m0 = _mm256_movemask_ps(_mm256_cmp_ps(_mm256_loadu_ps(values + i), tv, _CMP_GT_OQ));
      const int m1 =
          _mm256_movemask_ps(_mm256_cmp_ps(_mm256_loadu_ps(values + i + 8), tv, _CMP_GT_OQ));
      const int m2 =
          _mm256_movemask_ps(_mm256_cmp_ps(_mm256_loadu_ps(values + i + 16), tv, _CMP_GT_OQ));
      const int m3 =
          _mm256_movemask_ps(_mm256_cmp_ps(_mm256_loadu_ps(values + i + 24), tv, _CMP_GT_OQ));
      const unsigned packed = static_cast<unsigned>(m0) | (static_cast<unsigned>(m1) << 8) |
                              (static_cast<unsigned>(m2) << 16) | (static_cast<unsigned>(m3) << 24);
      hits += static_cast<std::size_t>(_mm_popcnt_u32(packed));
    }
    for (; i + 8 <= n; i += 8) {
      const int m = _mm256_movemask_ps(_mm256_cmp_ps(_mm256_loadu_ps(values + i), tv, _CMP_GT_OQ));
      hits += static_cast<std::size_t>(_mm_popcnt_u32(static_cast<unsigned>(m)));
    }
    for (; i < n; ++i) hits += values[i] > t ? 1 : 0;
    out[j] = static_cast<float>(static_cast<double>(hits) / static_cast<double>(n));
  }
}

// Gradient and hessian travel as one 128-bit lane pair; the per-slot
// addition order is the row order, same as the scalar reference.
void histogram_avx2(const std::uint16_t* bins, const std::uint32_t* rows, std::size_t nrows,
                    const GradPair* grad, GradPair* hist) {
  static_assert(sizeof(GradPair) == 2 * sizeof(double));
  auto* h = reinterpret_cast<double*>(hist);
  const auto* g = reinterpret_cast<const double*>(grad);
  std::size_t i = 0;
  for (; i + 4 <= nrows; i += 4) {
    const std::uint32_t r0 = rows[i], r1 = rows[i + 1], r2 = rows[i + 2], r3 = rows[i + 3];
    const __m128d v0 = _mm_loadu_pd(g + 2 * r0);
    const __m128d v1 = _mm_loadu_pd(g + 2 * r1);
    const __m128d v2 = _mm_loadu_pd(g + 2 * r2);
    const __m128d v3 = _mm_loadu_pd(g + 2 * r3);
    double* s0 = h + 2 * bins[r0];
    _mm_storeu_pd(s0, _mm_add_pd(_mm_loadu_pd(s0), v0));
    double* s1 = h + 2 * bins[r1];
    _mm_storeu_pd(s1, _mm_add_pd(_mm_loadu_pd(s1), v1));
    double* s2 = h + 2 * bins[r2];
    _mm_storeu_pd(s2, _mm_add_pd(_mm_loadu_pd(s2), v2));
    double* s3 = h + 2 * bins[r3];
    _mm_storeu_pd(s3, _mm_add_pd(_mm_loadu_pd(s3), v3));
  }
  for (; i < nrows; ++i) {
    const std::uint32_t r = rows[i];
    double* s = h + 2 * bins[r];
    _mm_storeu_pd(s, _mm_add_pd(_mm_loadu_pd(s), _mm_loadu_pd(g + 2 * r)));
  }
}

}  // namespace

extern const KernelTable kAvx2Table{Isa::avx2, accumulate_avx2, combine3_avx2, ppv_avx2,
                                    histogram_avx2};

}  // namespace harbench::simd::detail
