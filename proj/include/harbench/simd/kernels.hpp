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

#pragma once

// Data-parallel inner loops used by the transform and the tree learner.
// Each kernel has a portable scalar reference and, on x86-64, an AVX2
// variant. Variants must agree bit-for-bit with the reference: the kernels
// only use per-lane additions in the reference order and exact comparisons.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace harbench::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

struct GradPair {
  double g = 0.0;
  double h = 0.0;
};

struct KernelTable {
  Isa isa;

  /// acc[i] += src[i]
  void (*accumulate)(float* acc, const float* src, std::size_t n);

  /// out[i] = ((base[i] + a[i]) + b[i]) + c[i]
  void (*combine3)(const float* base, const float* a, const float* b, const float* c, float* out,
                   std::size_t n);

  /// out[j] = #{i < n : values[i] > thresholds[j]} / n, for j < count.
  void (*ppv)(const float* values, std::size_t n, const float* thresholds, std::size_t count,
              float* out);

  /// hist[bins[r]] += grad[r] for every r in rows[0..nrows).
  void (*histogram)(const std::uint16_t* bins, const std::uint32_t* rows, std::size_t nrows,
                    const GradPair* grad, GradPair* hist);
};

const KernelTable& scalar_kernels() noexcept;

/// nullptr when the variant is not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels() noexcept;

/// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available_kernels();

/// Table chosen at first use: the widest supported ISA unless
/// HARBENCH_SIMD=scalar is set in the environment.
const KernelTable& active_kernels();

}  // namespace harbench::simd
