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

#include "harbench/features.hpp"

#include <array>
#include <cmath>
#include <optional>

#include "harbench/core.hpp"
#include "harbench/signal.hpp"

namespace harbench::features {
namespace {

using signal::Series;

constexpr std::array<char, 3> kAxes{'X', 'Y', 'Z'};
constexpr std::array<std::pair<int, int>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};
constexpr std::size_t kSourceCount = 18;

std::string_view source_name(Source s) {
  switch (s) {
    case Source::tBodyAcc: return "tBodyAcc";
    case Source::tGravityAcc: return "tGravityAcc";
    case Source::tBodyAccJerk: return "tBodyAccJerk";
    case Source::tBodyGyro: return "tBodyGyro";
    case Source::tBodyGyroJerk: return "tBodyGyroJerk";
    case Source::tBodyAccMag: return "tBodyAccMag";
    case Source::tGravityAccMag: return "tGravityAccMag";
    case Source::tBodyAccJerkMag: return "tBodyAccJerkMag";
    case Source::tBodyGyroMag: return "tBodyGyroMag";
    case Source::tBodyGyroJerkMag: return "tBodyGyroJerkMag";
    case Source::fBodyAcc: return "fBodyAcc";
    case Source::fBodyAccJerk: return "fBodyAccJerk";
    case Source::fBodyGyro: return "fBodyGyro";
    case Source::fBodyAccMag: return "fBodyAccMag";
    // The shipped names carry a doubled "Body" on these three.
    case Source::fBodyAccJerkMag: return "fBodyBodyAccJerkMag";
    case Source::fBodyGyroMag: return "fBodyBodyGyroMag";
    case Source::fBodyGyroJerkMag: return "fBodyBodyGyroJerkMag";
    case Source::angle: return "angle";
  }
  return "?";
}

std::string axis_suffix(int axis) { return std::string("-") + kAxes[static_cast<std::size_t>(axis)]; }

class CatalogBuilder {
 public:
  void time_triaxial(Source s) {
    const std::string base(source_name(s));
    for (Kind k : {Kind::mean, Kind::std, Kind::mad, Kind::max, Kind::min}) per_axis(s, base, k);
    add(base + "-sma()", s, Kind::sma);
    for (Kind k : {Kind::energy, Kind::iqr, Kind::entropy}) per_axis(s, base, k);
    for (int a = 0; a < 3; ++a) {
      for (int c = 1; c <= 4; ++c) {
        add(base + "-arCoeff()" + axis_suffix(a) + "," + std::to_string(c), s, Kind::arCoeff, a, c);
      }
    }
    for (int p = 0; p < 3; ++p) {
      const auto [i, j] = kPairs[static_cast<std::size_t>(p)];
      add(base + "-correlation()-" + kAxes[static_cast<std::size_t>(i)] + "," +
              kAxes[static_cast<std::size_t>(j)],
          s, Kind::correlation, -1, p);
    }
  }

  void time_magnitude(Source s) {
    const std::string base(source_name(s));
    for (Kind k : {Kind::mean, Kind::std, Kind::mad, Kind::max, Kind::min, Kind::sma, Kind::energy,
                   Kind::iqr, Kind::entropy}) {
      add(base + "-" + std::string(kind_name(k)) + "()", s, k);
    }
    for (int c = 1; c <= 4; ++c) add(base + "-arCoeff()" + std::to_string(c), s, Kind::arCoeff, -1, c);
  }

  void freq_triaxial(Source s) {
    const std::string base(source_name(s));
    for (Kind k : {Kind::mean, Kind::std, Kind::mad, Kind::max, Kind::min}) per_axis(s, base, k);
    add(base + "-sma()", s, Kind::sma);
    for (Kind k : {Kind::energy, Kind::iqr, Kind::entropy}) per_axis(s, base, k);
    for (int a = 0; a < 3; ++a) add(base + "-maxInds" + axis_suffix(a), s, Kind::maxInds, a);
    per_axis(s, base, Kind::meanFreq);
    for (int a = 0; a < 3; ++a) {
      add(base + "-skewness()" + axis_suffix(a), s, Kind::skewness, a);
      add(base + "-kurtosis()" + axis_suffix(a), s, Kind::kurtosis, a);
    }
    for (int a = 0; a < 3; ++a) {
      const auto& bands = signal::standard_bands();
      for (std::size_t b = 0; b < bands.size(); ++b) {
        add(base + "-bandsEnergy()-" + std::to_string(bands[b].lo) + "," + std::to_string(bands[b].hi),
            s, Kind::bandsEnergy, a, static_cast<int>(b));
      }
    }
  }

  void freq_magnitude(Source s) {
    const std::string base(source_name(s));
    for (Kind k : {Kind::mean, Kind::std, Kind::mad, Kind::max, Kind::min, Kind::sma, Kind::energy,
                   Kind::iqr, Kind::entropy}) {
      add(base + "-" + std::string(kind_name(k)) + "()", s, k);
    }
    add(base + "-maxInds", s, Kind::maxInds);
    for (Kind k : {Kind::meanFreq, Kind::skewness, Kind::kurtosis}) {
      add(base + "-" + std::string(kind_name(k)) + "()", s, k);
    }
  }

  void angles() {
    const std::array<const char*, 7> names{
        "angle(tBodyAccMean,gravity)",     "angle(tBodyAccJerkMean),gravityMean)",
        "angle(tBodyGyroMean,gravityMean)", "angle(tBodyGyroJerkMean,gravityMean)",
        "angle(X,gravityMean)",            "angle(Y,gravityMean)",
        "angle(Z,gravityMean)"};
    for (int i = 0; i < 7; ++i) add(names[static_cast<std::size_t>(i)], Source::angle, Kind::angle, -1, i);
  }

  std::vector<Entry> finish() {
    std::vector<std::string> raw;
    raw.reserve(entries_.size());
    for (const auto& e : entries_) raw.push_back(e.name);
    const auto unique = make_unique_names(raw);
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i].name = unique[i];
    return std::move(entries_);
  }

 private:
  void per_axis(Source s, const std::string& base, Kind k) {
    for (int a = 0; a < 3; ++a) add(base + "-" + std::string(kind_name(k)) + "()" + axis_suffix(a), s, k, a);
  }
  void add(std::string name, Source s, Kind k, int axis = -1, int param = 0) {
    entries_.push_back({std::move(name), s, k, axis, param});
  }

  std::vector<Entry> entries_;
};

Series pad_to_window(Series x) {
  x.resize(signal::kWindowSamples, 0.0);
  return x;
}

// All signals for one window. Triaxial sources use slots 0..2, scalar
// sources slot 0.
struct Signals {
  std::array<std::array<Series, 3>, kSourceCount> data;

  const Series& get(Source s, int axis) const {
    return data[static_cast<std::size_t>(s)][static_cast<std::size_t>(axis < 0 ? 0 : axis)];
  }
  void set3(Source s, const signal::Triaxial& t) {
    auto& slot = data[static_cast<std::size_t>(s)];
    slot[0] = t.x;
    slot[1] = t.y;
    slot[2] = t.z;
  }
  void set1(Source s, Series v) { data[static_cast<std::size_t>(s)][0] = std::move(v); }
};

Signals derive_signals(std::span<const double> window, const PipelineOptions& opt) {
  const std::size_t n = signal::kWindowSamples;
  auto channel = [&](std::size_t c) {
    return Series(window.begin() + static_cast<std::ptrdiff_t>(c * n),
                  window.begin() + static_cast<std::ptrdiff_t>((c + 1) * n));
  };
  const auto noise = signal::FilterSpec::butterworth(opt.noise_order, opt.noise_cutoff_hz, opt.sample_rate_hz);
  auto denoise = [&](Series x) {
    if (!opt.denoise) return x;
    return signal::butterworth_lowpass(signal::median_filter(x, opt.median_window), noise);
  };

  signal::Triaxial gyro{denoise(channel(6)), denoise(channel(7)), denoise(channel(8))};
  signal::Triaxial body, gravity;
  if (opt.body_source == BodySource::recompute) {
    const signal::Triaxial total{denoise(channel(0)), denoise(channel(1)), denoise(channel(2))};
    auto split = signal::split_gravity_body(total, opt.gravity_cutoff_hz, opt.sample_rate_hz, opt.gravity_order);
    body = std::move(split.body);
    gravity = std::move(split.gravity);
  } else {
    body = {channel(3), channel(4), channel(5)};
    gravity = {channel(0), channel(1), channel(2)};
    for (std::size_t i = 0; i < n; ++i) {
      gravity.x[i] -= body.x[i];
      gravity.y[i] -= body.y[i];
      gravity.z[i] -= body.z[i];
    }
  }

  const double fs = opt.sample_rate_hz;
  const signal::Triaxial body_jerk{signal::jerk(body.x, fs), signal::jerk(body.y, fs), signal::jerk(body.z, fs)};
  const signal::Triaxial gyro_jerk{signal::jerk(gyro.x, fs), signal::jerk(gyro.y, fs), signal::jerk(gyro.z, fs)};

  Signals s;
  s.set3(Source::tBodyAcc, body);
  s.set3(Source::tGravityAcc, gravity);
  s.set3(Source::tBodyAccJerk, body_jerk);
  s.set3(Source::tBodyGyro, gyro);
  s.set3(Source::tBodyGyroJerk, gyro_jerk);
  s.set1(Source::tBodyAccMag, signal::magnitude(body.x, body.y, body.z));
  s.set1(Source::tGravityAccMag, signal::magnitude(gravity.x, gravity.y, gravity.z));
  s.set1(Source::tBodyAccJerkMag, signal::magnitude(body_jerk.x, body_jerk.y, body_jerk.z));
  s.set1(Source::tBodyGyroMag, signal::magnitude(gyro.x, gyro.y, gyro.z));
  s.set1(Source::tBodyGyroJerkMag, signal::magnitude(gyro_jerk.x, gyro_jerk.y, gyro_jerk.z));

  // Jerk series are one sample short of a window; they are zero padded
  // before the transform.
  auto spectrum = [](const Series& x) { return signal::real_fft_magnitudes(pad_to_window(x)); };
  auto spectrum3 = [&](const signal::Triaxial& t) {
    return signal::Triaxial{spectrum(t.x), spectrum(t.y), spectrum(t.z)};
  };
  s.set3(Source::fBodyAcc, spectrum3(body));
  s.set3(Source::fBodyAccJerk, spectrum3(body_jerk));
  s.set3(Source::fBodyGyro, spectrum3(gyro));
  s.set1(Source::fBodyAccMag, spectrum(s.get(Source::tBodyAccMag, 0)));
  s.set1(Source::fBodyAccJerkMag, spectrum(s.get(Source::tBodyAccJerkMag, 0)));
  s.set1(Source::fBodyGyroMag, spectrum(s.get(Source::tBodyGyroMag, 0)));
  s.set1(Source::fBodyGyroJerkMag, spectrum(s.get(Source::tBodyGyroJerkMag, 0)));
  return s;
}

class Evaluator {
 public:
  Evaluator(const Signals& signals, double sample_rate_hz) : s_(signals), fs_(sample_rate_hz) {}

  // Returns the value and whether a degenerate-input rule applied.
  std::pair<double, bool> eval(const Entry& e) {
    switch (e.kind) {
      case Kind::mean: return {stats(e).mean, false};
      case Kind::std: return {stats(e).std, false};
      case Kind::mad: return {stats(e).mad, false};
      case Kind::max: return {stats(e).max, false};
      case Kind::min: return {stats(e).min, false};
      case Kind::energy: return {stats(e).energy, false};
      case Kind::iqr: return {stats(e).iqr, false};
      case Kind::entropy: {
        const auto& st = stats(e);
        return {st.entropy, st.degenerate && st.min == 0.0};
      }
      case Kind::skewness: {
        const auto& st = stats(e);
        return {st.skewness, st.degenerate};
      }
      case Kind::kurtosis: {
        const auto& st = stats(e);
        return {st.kurtosis, st.degenerate};
      }
      case Kind::sma: {
        if (e.source >= Source::tBodyAccMag && e.source <= Source::tBodyGyroJerkMag) return {abs_mean(s_.get(e.source, 0)), false};
        if (e.source >= Source::fBodyAccMag && e.source <= Source::fBodyGyroJerkMag) return {abs_mean(s_.get(e.source, 0)), false};
        return {signal::sma(s_.get(e.source, 0), s_.get(e.source, 1), s_.get(e.source, 2)), false};
      }
      case Kind::arCoeff: {
        const auto& fit = burg(e);
        if (!fit) return {0.0, true};
        return {(*fit)[static_cast<std::size_t>(e.param - 1)], false};
      }
      case Kind::correlation: {
        const auto [i, j] = kPairs[static_cast<std::size_t>(e.param)];
        try {
          return {signal::correlation(s_.get(e.source, i), s_.get(e.source, j)), false};
        } catch (const Error& err) {
          if (err.code() != Errc::ZeroVariance) throw;
          return {0.0, true};
        }
      }
      case Kind::maxInds: return {signal::spectral_features(s_.get(e.source, e.axis), fs_).max_inds, false};
      case Kind::meanFreq: {
        const auto sf = signal::spectral_features(s_.get(e.source, e.axis), fs_);
        return {sf.mean_freq, sf.degenerate};
      }
      case Kind::bandsEnergy:
        return {signal::bands_energy(s_.get(e.source, e.axis))[static_cast<std::size_t>(e.param)], false};
      case Kind::angle: return angle(e.param);
    }
    return {0.0, false};
  }

 private:
  static double abs_mean(const Series& x) {
    double t = 0;
    for (double v : x) t += std::abs(v);
    return t / static_cast<double>(x.size());
  }

  static std::size_t slot(const Entry& e) {
    return static_cast<std::size_t>(e.source) * 3 + static_cast<std::size_t>(e.axis < 0 ? 0 : e.axis);
  }

  const signal::BasicStats& stats(const Entry& e) {
    auto& cached = stats_[slot(e)];
    if (!cached) cached = signal::basic_stats(s_.get(e.source, e.axis));
    return *cached;
  }

  const std::optional<std::vector<double>>& burg(const Entry& e) {
    auto& cached = burg_[slot(e)];
    if (!cached) {
      try {
        cached.emplace(signal::burg_ar_coefficients(s_.get(e.source, e.axis), 4));
      } catch (const Error& err) {
        if (err.code() != Errc::ZeroVariance) throw;
        cached.emplace(std::nullopt);
      }
    }
    return *cached;
  }

  std::array<double, 3> axis_means(Source s) {
    std::array<double, 3> m{};
    for (int a = 0; a < 3; ++a) {
      const Entry e{"", s, Kind::mean, a, 0};
      m[static_cast<std::size_t>(a)] = stats(e).mean;
    }
    return m;
  }

  std::pair<double, bool> angle(int which) {
    const auto gravity = axis_means(Source::tGravityAcc);
    std::array<double, 3> v{};
    switch (which) {
      case 0: v = axis_means(Source::tBodyAcc); break;
      case 1: v = axis_means(Source::tBodyAccJerk); break;
      case 2: v = axis_means(Source::tBodyGyro); break;
      case 3: v = axis_means(Source::tBodyGyroJerk); break;
      default: v[static_cast<std::size_t>(which - 4)] = 1.0; break;
    }
    try {
      return {signal::angle(v, gravity), false};
    } catch (const Error& err) {
      if (err.code() != Errc::ZeroVector) throw;
      return {0.0, true};
    }
  }

  const Signals& s_;
  double fs_;
  std::array<std::optional<signal::BasicStats>, kSourceCount * 3> stats_;
  std::array<std::optional<std::optional<std::vector<double>>>, kSourceCount * 3> burg_;
};

}  // namespace

std::string_view kind_name(Kind kind) noexcept {
  switch (kind) {
    case Kind::mean: return "mean";
    case Kind::std: return "std";
    case Kind::mad: return "mad";
    case Kind::max: return "max";
    case Kind::min: return "min";
    case Kind::sma: return "sma";
    case Kind::energy: return "energy";
    case Kind::iqr: return "iqr";
    case Kind::entropy: return "entropy";
    case Kind::arCoeff: return "arCoeff";
    case Kind::correlation: return "correlation";
    case Kind::maxInds: return "maxInds";
    case Kind::meanFreq: return "meanFreq";
    case Kind::skewness: return "skewness";
    case Kind::kurtosis: return "kurtosis";
    case Kind::bandsEnergy: return "bandsEnergy";
    case Kind::angle: return "angle";
  }
  return "?";
}

std::vector<std::string> make_unique_names(std::span<const std::string> names) {
  std::unordered_map<std::string, int> seen;
  std::vector<std::string> out;
  out.reserve(names.size());
  for (const auto& n : names) {
    const int count = ++seen[n];
    out.push_back(count == 1 ? n : n + "#" + std::to_string(count));
  }
  return out;
}

FeatureCatalog::FeatureCatalog(std::vector<Entry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!index_.emplace(entries_[i].name, i).second) {
      throw Error(Errc::InvalidArgument, "duplicate feature name " + entries_[i].name);
    }
  }
}

const FeatureCatalog& FeatureCatalog::standard() {
  static const FeatureCatalog catalog = [] {
    CatalogBuilder b;
    for (Source s : {Source::tBodyAcc, Source::tGravityAcc, Source::tBodyAccJerk, Source::tBodyGyro,
                     Source::tBodyGyroJerk}) {
      b.time_triaxial(s);
    }
    for (Source s : {Source::tBodyAccMag, Source::tGravityAccMag, Source::tBodyAccJerkMag,
                     Source::tBodyGyroMag, Source::tBodyGyroJerkMag}) {
      b.time_magnitude(s);
    }
    for (Source s : {Source::fBodyAcc, Source::fBodyAccJerk, Source::fBodyGyro}) b.freq_triaxial(s);
    for (Source s : {Source::fBodyAccMag, Source::fBodyAccJerkMag, Source::fBodyGyroMag,
                     Source::fBodyGyroJerkMag}) {
      b.freq_magnitude(s);
    }
    b.angles();
    return FeatureCatalog(b.finish());
  }();
  return catalog;
}

FeatureCatalog FeatureCatalog::select(std::span<const std::string> names) const {
  std::vector<Entry> picked;
  picked.reserve(names.size());
  for (const auto& n : names) {
    const auto i = index_of(n);
    if (i == npos) throw Error(Errc::InvalidArgument, "unknown feature name " + n);
    picked.push_back(entries_[i]);
  }
  return FeatureCatalog(std::move(picked));
}

std::vector<std::string> FeatureCatalog::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.name);
  return out;
}

std::size_t FeatureCatalog::index_of(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  return it == index_.end() ? npos : it->second;
}

FeatureVector compute_feature_vector(std::span<const double> window, const FeatureCatalog& catalog,
                                     const PipelineOptions& options) {
  if (window.size() != 9 * signal::kWindowSamples) {
    throw Error(Errc::BadLength, "window must hold 9 x 128 samples, got " + std::to_string(window.size()));
  }
  const Signals signals = derive_signals(window, options);
  Evaluator evaluator(signals, options.sample_rate_hz);
  FeatureVector out;
  out.values.reserve(catalog.size());
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const auto [value, degenerate] = evaluator.eval(catalog.entries()[i]);
    out.values.push_back(value);
    if (degenerate) out.degenerate.push_back(i);
  }
  return out;
}

}  // namespace harbench::features
