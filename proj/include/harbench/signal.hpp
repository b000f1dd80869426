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
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace harbench::signal {

using Series = std::vector<double>;

inline constexpr double kSampleRateHz = 50.0;
inline constexpr std::size_t kWindowSamples = 128;
inline constexpr std::size_t kSpectrumBins = kWindowSamples / 2;

/// Sliding-window layout of the recordings: 2.56 s at 50 Hz, half overlap.
struct WindowSpec {
  std::size_t length_samples = kWindowSamples;
  std::size_t overlap_samples = kWindowSamples / 2;
  double duration_s = 2.56;
  double sample_rate_hz = kSampleRateHz;
};

enum class FilterKind { butterworth_lowpass, median };

struct FilterSpec {
  FilterKind kind = FilterKind::butterworth_lowpass;
  int order = 3;
  double cutoff_hz = 20.0;
  int window = 3;
  double sample_rate_hz = kSampleRateHz;

  static FilterSpec butterworth(int order, double cutoff_hz, double sample_rate_hz = kSampleRateHz);
  static FilterSpec median(int window, double sample_rate_hz = kSampleRateHz);

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
};

/// Forward-backward (zero phase) is the default; single_pass is the causal
/// filter, used to check the magnitude response.
enum class Phase { zero_phase, single_pass };

/// Second-order section, a[0] == 1. First-order sections have b2 == a2 == 0.
struct Section {
  double b0, b1, b2, a1, a2;
};

/// Digital Butterworth low-pass as a cascade of sections (bilinear transform
/// with pre-warped cutoff). Every section has unit gain at DC.
std::vector<Section> butterworth_sections(int order, double cutoff_hz, double sample_rate_hz);

/// Sliding median, reflected edges (x[-k] = x[k]).
Series median_filter(std::span<const double> x, int window);

Series butterworth_lowpass(std::span<const double> x, const FilterSpec& spec,
                           Phase phase = Phase::zero_phase);

struct Triaxial {
  Series x, y, z;
};

struct GravityBody {
  Triaxial gravity;
  Triaxial body;
};

/// gravity = low-pass(total), body = total - gravity, per axis.
GravityBody split_gravity_body(const Triaxial& total, double cutoff_hz = 0.3,
                               double sample_rate_hz = kSampleRateHz, int order = 3);

/// y[i] = (x[i+1] - x[i]) * rate; one sample shorter than x.
Series jerk(std::span<const double> x, double sample_rate_hz = kSampleRateHz);

Series magnitude(std::span<const double> x, std::span<const double> y, std::span<const double> z);

/// All 128 complex DFT bins of a 128-sample window.
std::vector<std::complex<double>> fft128(std::span<const double> window);

/// |X_k| for k = 1..64 (index 0 holds bin 1; the DC bin is dropped).
Series real_fft_magnitudes(std::span<const double> window);

struct BasicStats {
  double mean = 0, std = 0, mad = 0, max = 0, min = 0, energy = 0, iqr = 0, entropy = 0,
         skewness = 0, kurtosis = 0;
  /// Set when the series is constant: skewness and kurtosis are then 0.
  bool degenerate = false;
};

BasicStats basic_stats(std::span<const double> x);

/// Quantile of already sorted data, linear interpolation between order
/// statistics (position q * (n - 1)).
double sorted_quantile(std::span<const double> sorted, double q);

double median(std::span<const double> x);

/// Shannon entropy (nats) of p_k = |x_k| / sum |x_j|; 0 for an all-zero signal.
double signal_entropy(std::span<const double> x);

struct BurgFit {
  /// Prediction form: x[t] ~ sum_k coefficients[k-1] * x[t-k].
  std::vector<double> coefficients;
  std::vector<double> reflection;
  double residual_power = 0;
};

/// Burg's method. Throws ZeroVariance on constant input, SeriesTooShort when
/// the series is not longer than the order.
BurgFit burg(std::span<const double> x, std::size_t order);

inline std::vector<double> burg_ar_coefficients(std::span<const double> x, std::size_t order = 4) {
  return burg(x, order).coefficients;
}

/// Signal magnitude area: (sum|x| + sum|y| + sum|z|) / n.
double sma(std::span<const double> x, std::span<const double> y, std::span<const double> z);

/// Pearson correlation. Throws ZeroVariance if either input is constant.
double correlation(std::span<const double> a, std::span<const double> b);

struct SpectralFeatures {
  std::size_t argmax_bin = 0;  ///< 1-based bin number, lowest index on ties
  double max_inds = 0;         ///< argmax_bin / bins
  double mean_freq = 0;        ///< Hz
  bool degenerate = false;     ///< all-zero spectrum, mean_freq reported as 0
};

/// Spectrum in the real_fft_magnitudes layout; bin k sits at k * rate / (2 * bins) Hz.
SpectralFeatures spectral_features(std::span<const double> spectrum,
                                   double sample_rate_hz = kSampleRateHz);

struct Band {
  int lo;  ///< first bin, 1-based, inclusive
  int hi;  ///< last bin, inclusive
};

/// 8 bands of 8 bins, 4 of 16, 2 of 24.
const std::array<Band, 14>& standard_bands();

/// Mean squared magnitude per band over a 64-bin spectrum.
std::vector<double> bands_energy(std::span<const double> spectrum);

/// Angle in [0, pi]. Throws ZeroVector if either input is zero.
double angle(const std::array<double, 3>& u, const std::array<double, 3>& v);

}  // namespace harbench::signal
