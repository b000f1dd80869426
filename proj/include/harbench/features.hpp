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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace harbench::features {

/// Signals derived from one inertial window.
enum class Source : std::uint8_t {
  tBodyAcc,
  tGravityAcc,
  tBodyAccJerk,
  tBodyGyro,
  tBodyGyroJerk,
  tBodyAccMag,
  tGravityAccMag,
  tBodyAccJerkMag,
  tBodyGyroMag,
  tBodyGyroJerkMag,
  fBodyAcc,
  fBodyAccJerk,
  fBodyGyro,
  fBodyAccMag,
  fBodyAccJerkMag,
  fBodyGyroMag,
  fBodyGyroJerkMag,
  angle,
};

enum class Kind : std::uint8_t {
  mean,
  std,
  mad,
  max,
  min,
  sma,
  energy,
  iqr,
  entropy,
  arCoeff,
  correlation,
  maxInds,
  meanFreq,
  skewness,
  kurtosis,
  bandsEnergy,
  angle,
};

inline constexpr std::size_t kKindCount = 17;

std::string_view kind_name(Kind kind) noexcept;

struct Entry {
  std::string name;
  Source source;
  Kind kind;
  int axis = -1;  ///< 0..2 for triaxial signals, -1 otherwise
  int param = 0;  ///< arCoeff order (1..4), correlation pair, band or angle index
};

/// Ordered list of features to evaluate per window.
class FeatureCatalog {
 public:
  FeatureCatalog() = default;
  explicit FeatureCatalog(std::vector<Entry> entries);

  /// The 561-entry layout of the shipped feature files, in file order.
  /// Repeated names (the per-axis band energies) get "#2", "#3" suffixes,
  /// the same rule the dataset loader applies to features.txt.
  static const FeatureCatalog& standard();

  /// Sub-catalog in the requested order. Throws InvalidArgument for a name
  /// the catalog does not contain.
  FeatureCatalog select(std::span<const std::string> names) const;

  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::vector<std::string> names() const;
  /// Index of a name, or npos.
  std::size_t index_of(std::string_view name) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Appends "#k" to the k-th occurrence (k >= 2) of a repeated name.
std::vector<std::string> make_unique_names(std::span<const std::string> names);

enum class BodySource {
  /// Split the denoised total acceleration with the 0.3 Hz filter.
  recompute,
  /// Take body acceleration from the window's body_acc channels and
  /// gravity as total - body.
  shipped,
};

struct PipelineOptions {
  int median_window = 3;
  int noise_order = 3;
  double noise_cutoff_hz = 20.0;
  int gravity_order = 3;
  double gravity_cutoff_hz = 0.3;
  double sample_rate_hz = 50.0;
  bool denoise = true;
  BodySource body_source = BodySource::recompute;
};

struct FeatureVector {
  std::vector<double> values;
  /// Catalog indices whose value came from a degenerate-input rule
  /// (constant series, zero spectrum, zero vector).
  std::vector<std::size_t> degenerate;
};

/// window: 9 channels x 128 samples, channel-major, in the order
/// total_acc xyz, body_acc xyz, body_gyro xyz.
FeatureVector compute_feature_vector(std::span<const double> window, const FeatureCatalog& catalog,
                                     const PipelineOptions& options = {});

}  // namespace harbench::features
