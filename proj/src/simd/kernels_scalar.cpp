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

#include "harbench/simd/kernels.hpp"

namespace harbench::simd {
namespace {

void accumulate_scalar(float* acc, const float* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += src[i];
}

void combine3_scalar(const float* base, const float* a, const float* b, const float* c, float* out,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = ((base[i] + a[i]) + b[i]) + c[i];
}

void ppv_scalar(const float* values, std::size_t n, const float* thresholds, std::size_t count,
                float* out) {
  for (std::size_t j = 0; j < count; ++j) {
    const float t = thresholds[j];
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) hits += values[i] > t ? 1 : 0;
    out[j] = static_cast<float>(static_cast<double>(hits) / static_cast<double>(n));
  }
}

void histogram_scalar(const std::uint16_t* bins, const std::uint32_t* rows, std::size_t nrows,
                      const GradPair* grad, GradPair* hist) {
  for (std::size_t i = 0; i < nrows; ++i) {
    const std::uint32_t r = rows[i];
    GradPair& slot = hist[bins[r]];
    slot.g += grad[r].g;
    slot.h += grad[r].h;
  }
}

constexpr KernelTable kScalar{Isa::scalar, accumulate_scalar, combine3_scalar, ppv_scalar,
                              histogram_scalar};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace harbench::simd
