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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "harbench/core.hpp"
#include "harbench/ridge.hpp"

namespace harbench::minirocket {

inline constexpr std::size_t kKernelLength = 9;
inline constexpr std::size_t kKernelCount = 84;
inline constexpr std::size_t kDefaultFeatures = 9996;
inline constexpr std::size_t kMaxDilationsPerKernel = 32;

/// The 84 length-9 kernels with weight +2 at three positions and -1 elsewhere,
/// in lexicographic order of the +2 positions.
struct KernelSet {
  std::array<std::array<std::uint8_t, 3>, kKernelCount> positive{};

  static const KernelSet& standard();
  std::array<std::int8_t, kKernelLength> weights(std::size_t kernel) const;
  /// FNV-1a over the weights; identifies the set inside serialized models.
  std::uint64_t hash() const;
};

enum class Padding : std::uint8_t { same, valid };

struct DilationEntry {
  std::size_t dilation = 1;
  std::size_t features_per_kernel = 0;

  friend bool operator==(const DilationEntry&, const DilationEntry&) = default;
};

struct DilationPlan {
  std::size_t input_length = 0;
  std::size_t target_features = kDefaultFeatures;
  std::uint64_t seed = 0;
  std::vector<DilationEntry> entries;

  std::size_t feature_count() const;
  /// Same and valid padding alternate over (dilation index + kernel index).
  static Padding padding(std::size_t dilation_index, std::size_t kernel_index) {
    return (dilation_index + kernel_index) % 2 == 0 ? Padding::same : Padding::valid;
  }
  /// Half-width of a kernel footprint at this dilation.
  static std::size_t half_width(std::size_t dilation) { return (kKernelLength - 1) / 2 * dilation; }

  friend bool operator==(const DilationPlan&, const DilationPlan&) = default;
};

/// Throws InputTooShort (length < 9), InvalidArgument (target < 84).
DilationPlan plan(std::size_t input_length, std::size_t target_features = kDefaultFeatures, std::uint64_t seed = 0);

/// Biases are stored dilation-major, then kernel, then feature slot: the
/// same order as transform() columns.
struct BiasTable {
  std::vector<float> biases;
  std::uint64_t fit_seed = 0;
  std::size_t sample_size = 0;

  friend bool operator==(const BiasTable&, const BiasTable&) = default;
};

/// Quantile for global feature index j: frac((j + 1) * (sqrt(5) - 1) / 2).
double feature_quantile(std::size_t j);

/// Throws EmptyTrainingSet, LengthMismatch.
BiasTable fit_biases(const MatrixF& train, const DilationPlan& plan, std::uint64_t seed);

/// n x plan.feature_count() PPV features. Throws LengthMismatch.
MatrixF transform(const MatrixF& x, const DilationPlan& plan, const BiasTable& biases);

/// Full-length convolution of one series with one kernel at one dilation
/// (zero padded, before any valid-padding crop). Exposed for tests.
std::vector<float> convolve(std::span<const float> series, std::size_t kernel, std::size_t dilation);

MatrixF to_float(const MatrixD& x);

struct FitOptions {
  std::size_t target_features = kDefaultFeatures;
  std::uint64_t seed = 0;
  std::vector<double> lambdas = ridge::default_lambda_grid();
};

struct MiniRocketModel {
  std::uint64_t kernel_hash = 0;
  DilationPlan plan;
  BiasTable biases;
  ridge::RidgeHead head;

  const std::vector<int>& classes() const { return head.classes; }
  double lambda_chosen() const { return head.lambda; }
};

struct Prediction {
  std::vector<int> labels;
  MatrixD scores;  ///< n x classes
};

/// Throws EmptyTrainingSet, DimensionMismatch, SingleClass, InputTooShort.
MiniRocketModel fit(const MatrixD& series, std::span<const int> labels, const FitOptions& options = {});

/// Throws LengthMismatch.
Prediction predict(const MiniRocketModel& model, const MatrixD& series);

std::string to_json(const MiniRocketModel& model);
/// Throws SchemaVersionMismatch when the kernel hash differs, InvalidArgument
/// on malformed documents.
MiniRocketModel model_from_json(std::string_view text);

}  // namespace harbench::minirocket
