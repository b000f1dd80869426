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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "harbench/core.hpp"

namespace harbench::dataset {

inline constexpr int kClassCount = 6;
inline constexpr int kSubjectCount = 30;
inline constexpr std::size_t kChannels = 9;
inline constexpr std::size_t kSamples = 128;
inline constexpr double kSampleRateHz = 50.0;

/// Activity codes 1..6 in the order of activity_labels.txt.
inline constexpr std::array<std::string_view, kClassCount> kActivityNames{
    "WALKING", "WALKING_UPSTAIRS", "WALKING_DOWNSTAIRS", "SITTING", "STANDING", "LAYING"};

inline constexpr std::array<std::string_view, kChannels> kChannelNames{
    "total_acc_x", "total_acc_y", "total_acc_z", "body_acc_x", "body_acc_y",
    "body_acc_z",  "body_gyro_x", "body_gyro_y", "body_gyro_z"};

/// Throws BadLabel outside 1..6.
std::string_view activity_name(int code);
/// Throws BadLabel for an unknown name.
int activity_code(std::string_view name);

/// Position of a channel in the tensor. Throws UnknownChannel.
std::size_t channel_index(std::string_view name);

enum class Partition : std::uint8_t { train, test };

std::string_view partition_name(Partition p) noexcept;

/// Where an instance came from: partition and 0-based row in its files.
struct InstanceId {
  Partition partition;
  std::uint32_t row;
  friend bool operator==(const InstanceId&, const InstanceId&) = default;
};

/// n x 9 x 128 samples; each instance is one channel-major block.
struct InertialTensor {
  std::size_t count = 0;
  std::vector<double> data;

  std::span<const double> window(std::size_t i) const {
    return {data.data() + i * kChannels * kSamples, kChannels * kSamples};
  }
  std::span<const double> channel(std::size_t i, std::size_t c) const {
    return {data.data() + (i * kChannels + c) * kSamples, kSamples};
  }
  friend bool operator==(const InertialTensor&, const InertialTensor&) = default;
};

struct FeatureMatrix {
  MatrixD values;
  std::vector<std::string> names;
  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;
};

struct DatasetBundle {
  InertialTensor inertial;
  FeatureMatrix features;
  std::vector<int> labels;    ///< 1..6
  std::vector<int> subjects;  ///< 1..30
  std::vector<InstanceId> ids;
  /// Non-fatal findings from loading (feature values outside [-1, 1]).
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return labels.size(); }
  friend bool operator==(const DatasetBundle&, const DatasetBundle&) = default;
};

/// Reads the train and test partitions under root and pools them, train
/// rows first, file order preserved.
DatasetBundle load_bundle(const std::filesystem::path& root);

/// Writes a bundle back out in the same layout. Instances go to the
/// partition recorded in their id.
void write_bundle(const DatasetBundle& bundle, const std::filesystem::path& root);

struct ValueRange {
  double min = 0;
  double max = 0;
};

struct VerificationReport {
  std::size_t n_total = 0;
  std::array<std::size_t, kClassCount> per_class{};
  std::array<std::size_t, kSubjectCount> per_subject{};
  std::vector<int> empty_classes;
  std::vector<int> absent_subjects;
  ValueRange feature_range;
  std::size_t features_outside_unit = 0;
  std::array<ValueRange, kChannels> channel_ranges{};

  bool all_classes_present() const noexcept { return empty_classes.empty(); }
  std::string to_text() const;
};

VerificationReport verify_bundle(const DatasetBundle& bundle);

/// n x 128 copy of one channel.
MatrixD select_channel(const DatasetBundle& bundle, std::string_view channel);

}  // namespace harbench::dataset
