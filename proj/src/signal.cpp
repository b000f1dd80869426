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

#include "harbench/signal.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "harbench/core.hpp"

namespace harbench::signal {
namespace {

[[noreturn]] void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    fail(Errc::LengthMismatch,
         std::string(what) + ": lengths " + std::to_string(a) + " and " + std::to_string(b));
  }
}

bool is_constant(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}

// Transposed direct form II, one section at a time, in place.
void run_sections(std::span<const Section> sections, std::span<double> x,
                  std::span<const std::array<double, 2>> initial) {
  for (std::size_t s = 0; s < sections.size(); ++s) {
    const Section& c = sections[s];
    double z1 = initial.empty() ? 0.0 : initial[s][0];
    double z2 = initial.empty() ? 0.0 : initial[s][1];
    for (double& v : x) {
      const double in = v;
      const double out = c.b0 * in + z1;
      z1 = c.b1 * in - c.a1 * out + z2;
      z2 = c.b2 * in - c.a2 * out;
      v = out;
    }
  }
}

// Steady state for a constant input of `level`. Each section has unit DC
// gain, so every section sees the same level.
std::vector<std::array<double, 2>> steady_state(std::span<const Section> sections, double level) {
  std::vector<std::array<double, 2>> zi(sections.size());
  for (std::size_t s = 0; s < sections.size(); ++s) {
    const Section& c = sections[s];
    zi[s][1] = (c.b2 - c.a2) * level;
    zi[s][0] = (1.0 - c.b0) * level;
  }
  return zi;
}

}  // namespace

FilterSpec FilterSpec::butterworth(int order, double cutoff_hz, double sample_rate_hz) {
  FilterSpec spec;
  spec.kind = FilterKind::butterworth_lowpass;
  spec.order = order;
  spec.cutoff_hz = cutoff_hz;
  spec.sample_rate_hz = sample_rate_hz;
  spec.validate();
  return spec;
}

FilterSpec FilterSpec::median(int window, double sample_rate_hz) {
  FilterSpec spec;
  spec.kind = FilterKind::median;
  spec.window = window;
  spec.sample_rate_hz = sample_rate_hz;
  spec.validate();
  return spec;
}

void FilterSpec::validate() const {
  if (!(sample_rate_hz > 0)) fail(Errc::InvalidArgument, "sample rate must be positive");
  if (kind == FilterKind::butterworth_lowpass) {
    if (order < 1) fail(Errc::InvalidArgument, "Butterworth order must be >= 1");
    if (!(cutoff_hz > 0) || !(cutoff_hz < sample_rate_hz / 2)) {
      fail(Errc::InvalidArgument, "cutoff must lie in (0, rate/2)");
    }
  } else if (window < 3 || window % 2 == 0) {
    fail(Errc::BadWindow, "median window must be odd and >= 3");
  }
}

std::vector<Section> butterworth_sections(int order, double cutoff_hz, double sample_rate_hz) {
  FilterSpec::butterworth(order, cutoff_hz, sample_rate_hz);
  const double fs2 = 2.0 * sample_rate_hz;
  const double warped = fs2 * std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);
  auto to_z = [&](std::complex<double> s) { return (fs2 + s) / (fs2 - s); };

  std::vector<Section> sections;
  for (int k = 0; k < order / 2; ++k) {
    const double theta = std::numbers::pi * (2.0 * k + order + 1) / (2.0 * order);
    const std::complex<double> pole = to_z(warped * std::polar(1.0, theta));
    const double a1 = -2.0 * pole.real();
    const double a2 = std::norm(pole);
    const double g = (1.0 + a1 + a2) / 4.0;
    sections.push_back({g, 2.0 * g, g, a1, a2});
  }
  if (order % 2 == 1) {
    const double pole = to_z({-warped, 0.0}).real();
    const double a1 = -pole;
    const double g = (1.0 + a1) / 2.0;
    sections.push_back({g, g, 0.0, a1, 0.0});
  }
  return sections;
}

Series median_filter(std::span<const double> x, int window) {
  if (window < 3 || window % 2 == 0) fail(Errc::BadWindow, "window must be odd and >= 3");
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  if (window > n) fail(Errc::BadWindow, "window longer than the series");
  const std::ptrdiff_t half = window / 2;
  Series out(x.size());
  std::vector<double> buf(static_cast<std::size_t>(window));
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t j = -half; j <= half; ++j) {
      std::ptrdiff_t k = i + j;
      if (k < 0) k = -k;
      if (k >= n) k = 2 * (n - 1) - k;
      buf[static_cast<std::size_t>(j + half)] = x[static_cast<std::size_t>(k)];
    }
    std::nth_element(buf.begin(), buf.begin() + half, buf.end());
    out[static_cast<std::size_t>(i)] = buf[static_cast<std::size_t>(half)];
  }
  return out;
}

Series butterworth_lowpass(std::span<const double> x, const FilterSpec& spec, Phase phase) {
  spec.validate();
  if (spec.kind != FilterKind::butterworth_lowpass) {
    fail(Errc::InvalidArgument, "butterworth_lowpass needs a Butterworth spec");
  }
  if (x.size() < static_cast<std::size_t>(3 * spec.order) || x.size() < 2) {
    fail(Errc::SeriesTooShort, "series needs at least 3 x order samples");
  }
  const auto sections = butterworth_sections(spec.order, spec.cutoff_hz, spec.sample_rate_hz);

  if (phase == Phase::single_pass) {
    Series y(x.begin(), x.end());
    run_sections(sections, y, {});
    return y;
  }

  // Odd extension on both ends, then forward and backward passes started
  // from the steady state of the first sample each pass sees.
  const std::size_t first_order = spec.order % 2;
  const std::size_t pad =
      std::min<std::size_t>(3 * (2 * sections.size() + 1 - first_order), x.size() - 1);
  const std::size_t n = x.size();
  Series ext(n + 2 * pad);
  for (std::size_t i = 0; i < pad; ++i) ext[i] = 2.0 * x[0] - x[pad - i];
  std::copy(x.begin(), x.end(), ext.begin() + static_cast<std::ptrdiff_t>(pad));
  for (std::size_t i = 0; i < pad; ++i) ext[pad + n + i] = 2.0 * x[n - 1] - x[n - 2 - i];

  run_sections(sections, ext, steady_state(sections, ext.front()));
  std::reverse(ext.begin(), ext.end());
  run_sections(sections, ext, steady_state(sections, ext.front()));
  std::reverse(ext.begin(), ext.end());
  return Series(ext.begin() + static_cast<std::ptrdiff_t>(pad),
                ext.begin() + static_cast<std::ptrdiff_t>(pad + n));
}

GravityBody split_gravity_body(const Triaxial& total, double cutoff_hz, double sample_rate_hz,
                               int order) {
  require_same_length(total.x.size(), total.y.size(), "split_gravity_body");
  require_same_length(total.x.size(), total.z.size(), "split_gravity_body");
  const auto spec = FilterSpec::butterworth(order, cutoff_hz, sample_rate_hz);
  GravityBody out;
  auto split_axis = [&](const Series& t, Series& g, Series& b) {
    g = butterworth_lowpass(t, spec);
    b.resize(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) b[i] = t[i] - g[i];
  };
  split_axis(total.x, out.gravity.x, out.body.x);
  split_axis(total.y, out.gravity.y, out.body.y);
  split_axis(total.z, out.gravity.z, out.body.z);
  return out;
}

Series jerk(std::span<const double> x, double sample_rate_hz) {
  if (x.size() < 2) fail(Errc::SeriesTooShort, "jerk needs at least 2 samples");
  Series y(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) y[i] = (x[i + 1] - x[i]) * sample_rate_hz;
  return y;
}

Series magnitude(std::span<const double> x, std::span<const double> y, std::span<const double> z) {
  require_same_length(x.size(), y.size(), "magnitude");
  require_same_length(x.size(), z.size(), "magnitude");
  Series m(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) m[i] = std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]);
  return m;
}

std::vector<std::complex<double>> fft128(std::span<const double> window) {
  constexpr int n = static_cast<int>(kWindowSamples);
  if (window.size() != kWindowSamples) {
    fail(Errc::BadLength, "FFT window must have 128 samples, got " + std::to_string(window.size()));
  }
  // Planning is not thread-safe in FFTW; executing an existing plan on new
  // arrays is.
  static const fftw_plan plan = [] {
    static std::mutex planner;
    std::lock_guard lock(planner);
    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
    fftw_plan p = fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    return p;
  }();
  std::array<double, kWindowSamples> in{};
  std::copy(window.begin(), window.end(), in.begin());
  std::array<fftw_complex, kWindowSamples / 2 + 1> half{};
  fftw_execute_dft_r2c(plan, in.data(), half.data());

  std::vector<std::complex<double>> full(kWindowSamples);
  for (int k = 0; k <= n / 2; ++k) full[static_cast<std::size_t>(k)] = {half[k][0], half[k][1]};
  for (int k = n / 2 + 1; k < n; ++k) {
    full[static_cast<std::size_t>(k)] = std::conj(full[static_cast<std::size_t>(n - k)]);
  }
  return full;
}

Series real_fft_magnitudes(std::span<const double> window) {
  const auto full = fft128(window);
  Series mags(kSpectrumBins);
  for (std::size_t k = 1; k <= kSpectrumBins; ++k) mags[k - 1] = std::abs(full[k]);
  return mags;
}

double sorted_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) fail(Errc::Empty, "quantile of an empty series");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

double median(std::span<const double> x) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  return sorted_quantile(s, 0.5);
}

double signal_entropy(std::span<const double> x) {
  double total = 0;
  for (double v : x) total += std::abs(v);
  if (total == 0) return 0.0;
  double h = 0;
  for (double v : x) {
    const double p = std::abs(v) / total;
    if (p > 0) h -= p * std::log(p);
  }
  return h;
}

BasicStats basic_stats(std::span<const double> x) {
  if (x.size() < 2) fail(Errc::SeriesTooShort, "statistics need at least 2 samples");
  const double n = static_cast<double>(x.size());
  BasicStats s;
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();

  double sum = 0, sum_sq = 0;
  for (double v : x) {
    sum += v;
    sum_sq += v * v;
  }
  s.energy = sum_sq / n;
  s.entropy = signal_entropy(x);

  if (s.min == s.max) {
    s.mean = s.min;
    s.degenerate = true;
    return s;
  }
  s.mean = sum / n;

  double m2 = 0, m3 = 0, m4 = 0;
  for (double v : x) {
    const double d = v - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  s.std = std::sqrt(m2);
  s.skewness = m3 / (m2 * s.std);
  s.kurtosis = m4 / (m2 * m2);

  const double med = sorted_quantile(sorted, 0.5);
  std::vector<double> dev(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) dev[i] = std::abs(x[i] - med);
  std::sort(dev.begin(), dev.end());
  s.mad = sorted_quantile(dev, 0.5);
  s.iqr = sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
  return s;
}

BurgFit burg(std::span<const double> x, std::size_t order) {
  if (order == 0) fail(Errc::InvalidArgument, "Burg order must be >= 1");
  if (x.size() <= order) fail(Errc::SeriesTooShort, "series must be longer than the AR order");
  if (is_constant(x)) fail(Errc::ZeroVariance, "Burg fit of a constant series");

  // The error filter polynomial is 1 + a1 z^-1 + ... ; input is used as is.
  std::vector<double> f(x.begin(), x.end());
  std::vector<double> b(x.begin(), x.end());

  std::vector<double> a{1.0};
  BurgFit fit;
  double power = 0;
  for (double v : f) power += v * v;
  power /= static_cast<double>(x.size());

  for (std::size_t m = 1; m <= order; ++m) {
    double num = 0, den = 0;
    for (std::size_t t = m; t < x.size(); ++t) {
      num += f[t] * b[t - 1];
      den += f[t] * f[t] + b[t - 1] * b[t - 1];
    }
    const double k = den > 0 ? -2.0 * num / den : 0.0;

    std::vector<double> next(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) next[i] = a[i];
    for (std::size_t i = 1; i <= m; ++i) next[i] += k * a[m - i];
    a = std::move(next);

    for (std::size_t t = x.size() - 1; t >= m; --t) {
      const double ft = f[t];
      f[t] = ft + k * b[t - 1];
      b[t] = b[t - 1] + k * ft;
    }
    power *= 1.0 - k * k;
    fit.reflection.push_back(k);
  }
  fit.coefficients.resize(order);
  for (std::size_t i = 1; i <= order; ++i) fit.coefficients[i - 1] = -a[i];
  fit.residual_power = power;
  return fit;
}

double sma(std::span<const double> x, std::span<const double> y, std::span<const double> z) {
  require_same_length(x.size(), y.size(), "sma");
  require_same_length(x.size(), z.size(), "sma");
  if (x.empty()) fail(Errc::Empty, "sma of empty series");
  double total = 0;
  for (std::size_t i = 0; i < x.size(); ++i) total += std::abs(x[i]) + std::abs(y[i]) + std::abs(z[i]);
  return total / static_cast<double>(x.size());
}

double correlation(std::span<const double> a, std::span<const double> b) {
  require_same_length(a.size(), b.size(), "correlation");
  if (a.size() < 2) fail(Errc::SeriesTooShort, "correlation needs at least 2 samples");
  if (is_constant(a) || is_constant(b)) fail(Errc::ZeroVariance, "correlation with a constant series");
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

SpectralFeatures spectral_features(std::span<const double> spectrum, double sample_rate_hz) {
  if (spectrum.empty()) fail(Errc::Empty, "empty spectrum");
  SpectralFeatures out;
  const double bins = static_cast<double>(spectrum.size());
  const double bin_hz = sample_rate_hz / (2.0 * bins);
  std::size_t best = 0;
  double weighted = 0, total = 0;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    if (spectrum[i] > spectrum[best]) best = i;
    const double mag = std::abs(spectrum[i]);
    weighted += static_cast<double>(i + 1) * bin_hz * mag;
    total += mag;
  }
  out.argmax_bin = best + 1;
  out.max_inds = static_cast<double>(out.argmax_bin) / bins;
  if (total == 0) {
    out.degenerate = true;
  } else {
    out.mean_freq = weighted / total;
  }
  return out;
}

const std::array<Band, 14>& standard_bands() {
  static const std::array<Band, 14> bands{{{1, 8},
                                            {9, 16},
                                            {17, 24},
                                            {25, 32},
                                            {33, 40},
                                            {41, 48},
                                            {49, 56},
                                            {57, 64},
                                            {1, 16},
                                            {17, 32},
                                            {33, 48},
                                            {49, 64},
                                            {1, 24},
                                            {25, 48}}};
  return bands;
}

std::vector<double> bands_energy(std::span<const double> spectrum) {
  if (spectrum.size() != kSpectrumBins) {
    fail(Errc::BadLength, "bands_energy needs 64 bins, got " + std::to_string(spectrum.size()));
  }
  std::vector<double> out;
  out.reserve(standard_bands().size());
  for (const Band& band : standard_bands()) {
    double e = 0;
    for (int k = band.lo; k <= band.hi; ++k) {
      const double v = spectrum[static_cast<std::size_t>(k - 1)];
      e += v * v;
    }
    out.push_back(e / static_cast<double>(band.hi - band.lo + 1));
  }
  return out;
}

double angle(const std::array<double, 3>& u, const std::array<double, 3>& v) {
  const double nu = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
  const double nv = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (nu == 0 || nv == 0) fail(Errc::ZeroVector, "angle with a zero vector");
  const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  return std::acos(std::clamp(dot / (nu * nv), -1.0, 1.0));
}

}  // namespace harbench::signal
