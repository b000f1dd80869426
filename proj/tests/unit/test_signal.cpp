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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "harbench/core.hpp"
#include "harbench/rng.hpp"
#include "harbench/signal.hpp"

using namespace harbench;
using namespace harbench::signal;

namespace {

constexpr double kPi = std::numbers::pi;

Series random_series(SplitMix& rng, std::size_t n, double lo = -2, double hi = 2) {
  Series x(n);
  for (auto& v : x) v = rng.uniform(lo, hi);
  return x;
}

Series sine(std::size_t n, double freq_hz, double amp = 1.0, double offset = 0.0, double fs = 50.0) {
  Series x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = offset + amp * std::sin(2 * kPi * freq_hz * static_cast<double>(i) / fs);
  return x;
}

// Amplitude of the freq_hz component over [from, n), by least squares on a
// sine/cosine pair.
double tone_amplitude(const Series& x, double freq_hz, std::size_t from, double fs = 50.0) {
  double ss = 0, cc = 0, sc = 0, xs = 0, xc = 0;
  for (std::size_t i = from; i < x.size(); ++i) {
    const double ph = 2 * kPi * freq_hz * static_cast<double>(i) / fs;
    const double s = std::sin(ph), c = std::cos(ph);
    ss += s * s;
    cc += c * c;
    sc += s * c;
    xs += x[i] * s;
    xc += x[i] * c;
  }
  const double det = ss * cc - sc * sc;
  const double a = (xs * cc - xc * sc) / det;
  const double b = (xc * ss - xs * sc) / det;
  return std::hypot(a, b);
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

// ---- independent oracles -------------------------------------------------

double oracle_median_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double oracle_quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1) * q;
  const double fl = std::floor(h);
  const auto i = static_cast<std::size_t>(fl);
  if (i + 1 >= v.size()) return v.back();
  return v[i] + (h - fl) * (v[i + 1] - v[i]);
}

struct OracleStats {
  double mean, std, mad, max, min, energy, iqr, entropy, skew, kurt;
};

OracleStats oracle_stats(const Series& x) {
  const double n = static_cast<double>(x.size());
  OracleStats o{};
  long double sum = 0;
  for (double v : x) sum += v;
  o.mean = static_cast<double>(sum / n);
  long double m2 = 0, m3 = 0, m4 = 0, e = 0;
  for (double v : x) {
    const long double d = v - static_cast<long double>(o.mean);
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
    e += static_cast<long double>(v) * v;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  o.std = static_cast<double>(std::sqrt(m2));
  o.skew = static_cast<double>(m3 / std::pow(m2, 1.5L));
  o.kurt = static_cast<double>(m4 / (m2 * m2));
  o.energy = static_cast<double>(e / n);
  o.max = *std::max_element(x.begin(), x.end());
  o.min = *std::min_element(x.begin(), x.end());
  const double med = oracle_median_sorted(x);
  std::vector<double> dev;
  for (double v : x) dev.push_back(std::abs(v - med));
  o.mad = oracle_median_sorted(dev);
  o.iqr = oracle_quantile(x, 0.75) - oracle_quantile(x, 0.25);
  long double total = 0;
  for (double v : x) total += std::abs(v);
  long double h = 0;
  for (double v : x) {
    const long double p = std::abs(v) / total;
    if (p > 0) h -= p * std::log(p);
  }
  o.entropy = static_cast<double>(h);
  return o;
}

std::vector<std::complex<double>> oracle_dft(const Series& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<long double> acc = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const long double ang = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>((k * t) % n) / n;
      acc += static_cast<long double>(x[t]) * std::complex<long double>(std::cos(ang), std::sin(ang));
    }
    out[k] = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
  }
  return out;
}

}  // namespace

TEST_SUITE("median_filter") {
  TEST_CASE("constant series is unchanged") {
    const Series x(20, 4.25);
    CHECK(median_filter(x, 3) == x);
  }
  TEST_CASE("single impulse is removed") {
    CHECK(median_filter(Series{0, 0, 10, 0, 0}, 3) == Series{0, 0, 0, 0, 0});
  }
  TEST_CASE("matches a brute-force sliding median with reflected edges") {
    SplitMix rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      const auto x = random_series(rng, 5 + trial);
      for (int w : {3, 5}) {
        const auto y = median_filter(x, w);
        const int n = static_cast<int>(x.size());
        for (int i = 0; i < n; ++i) {
          std::vector<double> win;
          for (int j = i - w / 2; j <= i + w / 2; ++j) win.push_back(x[static_cast<std::size_t>(j < 0 ? -j : (j >= n ? 2 * n - 2 - j : j))]);
          CHECK(y[static_cast<std::size_t>(i)] == oracle_median_sorted(win));
        }
      }
    }
  }
  TEST_CASE("even or oversized windows are rejected") {
    CHECK_THROWS_AS(median_filter(Series(10, 0.0), 4), Error);
    CHECK_THROWS_AS(median_filter(Series(2, 0.0), 3), Error);
  }
}

TEST_SUITE("butterworth") {
  TEST_CASE("sections have unit DC gain") {
    for (int order : {1, 2, 3, 4, 5}) {
      for (const auto& s : butterworth_sections(order, 20.0, 50.0)) {
        CHECK((s.b0 + s.b1 + s.b2) / (1 + s.a1 + s.a2) == doctest::Approx(1.0).epsilon(1e-14));
      }
    }
  }
  TEST_CASE("constant input passes unchanged") {
    const Series x(128, 0.987);
    for (Phase p : {Phase::zero_phase}) {
      const auto y = butterworth_lowpass(x, FilterSpec::butterworth(3, 20.0), p);
      for (double v : y) CHECK(std::abs(v - 0.987) < 1e-9);
    }
  }
  TEST_CASE("single pass: -3 dB at the cutoff") {
    // |H(fc)| = 1/sqrt(1 + (fc/fc)^6) = 1/sqrt(2)
    const auto x = sine(4000, 20.0);
    const auto y = butterworth_lowpass(x, FilterSpec::butterworth(3, 20.0), Phase::single_pass);
    const double ratio = tone_amplitude(y, 20.0, 1000);
    CHECK(ratio == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.05));
  }
  TEST_CASE("single pass: at least 15 dB down at twice the cutoff") {
    // Analog prototype gives 10*log10(1 + 2^6) = 18.1 dB; the bilinear map
    // only adds attenuation below Nyquist. 20 Hz has no octave below
    // Nyquist at 50 Hz, so the check runs at a 5 Hz cutoff.
    const auto x = sine(4000, 10.0);
    const auto y = butterworth_lowpass(x, FilterSpec::butterworth(3, 5.0), Phase::single_pass);
    const double db = -20 * std::log10(tone_amplitude(y, 10.0, 1000));
    CHECK(db >= 15.0);
    CHECK(tone_amplitude(butterworth_lowpass(sine(4000, 5.0), FilterSpec::butterworth(3, 5.0), Phase::single_pass), 5.0, 1000) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.05));
  }
  TEST_CASE("zero-phase output is linear") {
    SplitMix rng(5);
    const auto spec = FilterSpec::butterworth(3, 20.0);
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = random_series(rng, 128), y = random_series(rng, 128);
      const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
      Series mix(128);
      for (std::size_t i = 0; i < 128; ++i) mix[i] = a * x[i] + b * y[i];
      const auto fm = butterworth_lowpass(mix, spec), fx = butterworth_lowpass(x, spec), fy = butterworth_lowpass(y, spec);
      for (std::size_t i = 0; i < 128; ++i) CHECK(std::abs(fm[i] - (a * fx[i] + b * fy[i])) < 1e-9);
    }
  }
  TEST_CASE("zero-phase filtering does not shift a low-frequency tone") {
    const auto x = sine(512, 1.0);
    const auto y = butterworth_lowpass(x, FilterSpec::butterworth(3, 20.0));
    for (std::size_t i = 50; i < 450; ++i) CHECK(std::abs(y[i] - x[i]) < 1e-3);
  }
  TEST_CASE("argument checks") {
    CHECK_THROWS_AS(butterworth_lowpass(Series(8, 0.0), FilterSpec::butterworth(3, 20.0)), Error);
    CHECK_THROWS_AS(FilterSpec::butterworth(3, 25.0), Error);
    CHECK_THROWS_AS(FilterSpec::butterworth(0, 5.0), Error);
    CHECK_THROWS_AS(FilterSpec::median(4), Error);
  }
}

TEST_SUITE("gravity split") {
  TEST_CASE("gravity + body reconstructs the input") {
    SplitMix rng(9);
    Triaxial t{random_series(rng, 128), random_series(rng, 128), random_series(rng, 128)};
    const auto gb = split_gravity_body(t);
    for (std::size_t i = 0; i < 128; ++i) {
      CHECK(std::abs(gb.gravity.x[i] + gb.body.x[i] - t.x[i]) <= 1e-12);
      CHECK(std::abs(gb.gravity.y[i] + gb.body.y[i] - t.y[i]) <= 1e-12);
      CHECK(std::abs(gb.gravity.z[i] + gb.body.z[i] - t.z[i]) <= 1e-12);
    }
  }
  TEST_CASE("constant input is all gravity") {
    Triaxial t{Series(128, 0.1), Series(128, -0.2), Series(128, 0.97)};
    const auto gb = split_gravity_body(t);
    for (std::size_t i = 0; i < 128; ++i) {
      CHECK(std::abs(gb.body.x[i]) < 1e-6);
      CHECK(std::abs(gb.body.y[i]) < 1e-6);
      CHECK(std::abs(gb.body.z[i]) < 1e-6);
    }
  }
  TEST_CASE("5 Hz motion on a constant offset goes to the body component") {
    const std::size_t n = 1000;
    const auto total = sine(n, 5.0, 0.4, 0.9);
    Triaxial t{total, total, total};
    const auto gb = split_gravity_body(t);
    CHECK(tone_amplitude(gb.body.x, 5.0, 200) == doctest::Approx(0.4).epsilon(0.02));
    for (std::size_t i = 200; i < 800; ++i) CHECK(std::abs(gb.gravity.x[i] - 0.9) < 0.02);
  }
}

TEST_SUITE("jerk and magnitude") {
  TEST_CASE("jerk of constant and ramp") {
    for (double v : jerk(Series(10, 3.0))) CHECK(v == 0.0);
    Series ramp(100);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.7 * static_cast<double>(i) / 50.0;
    const auto j = jerk(ramp);
    CHECK(j.size() == 99);
    for (double v : j) CHECK(std::abs(v - 0.7) < 1e-9);
    CHECK_THROWS_AS(jerk(Series{1.0}), Error);
  }
  TEST_CASE("jerk of a slow sine peaks at 2 pi f A") {
    const auto j = jerk(sine(500, 1.0, 2.0));
    double peak = 0;
    for (double v : j) peak = std::max(peak, std::abs(v));
    CHECK(peak == doctest::Approx(2 * kPi * 1.0 * 2.0).epsilon(0.05));
  }
  TEST_CASE("magnitude") {
    const auto m = magnitude(Series(5, 3.0), Series(5, 4.0), Series(5, 0.0));
    for (double v : m) CHECK(v == 5.0);
    for (double v : magnitude(Series(4, 0.0), Series(4, 0.0), Series(4, 0.0))) CHECK(v == 0.0);
    CHECK_THROWS_AS(magnitude(Series(4, 0.0), Series(3, 0.0), Series(4, 0.0)), Error);
  }
  TEST_CASE("magnitude is rotation invariant") {
    SplitMix rng(12);
    const auto x = random_series(rng, 64), y = random_series(rng, 64), z = random_series(rng, 64);
    const double a = 0.7, b = -1.3;
    // R = Rz(a) * Rx(b)
    const double R[3][3] = {{std::cos(a), -std::sin(a) * std::cos(b), std::sin(a) * std::sin(b)},
                            {std::sin(a), std::cos(a) * std::cos(b), -std::cos(a) * std::sin(b)},
                            {0, std::sin(b), std::cos(b)}};
    Series rx(64), ry(64), rz(64);
    for (std::size_t i = 0; i < 64; ++i) {
      rx[i] = R[0][0] * x[i] + R[0][1] * y[i] + R[0][2] * z[i];
      ry[i] = R[1][0] * x[i] + R[1][1] * y[i] + R[1][2] * z[i];
      rz[i] = R[2][0] * x[i] + R[2][1] * y[i] + R[2][2] * z[i];
    }
    const auto m1 = magnitude(x, y, z), m2 = magnitude(rx, ry, rz);
    for (std::size_t i = 0; i < 64; ++i) CHECK(std::abs(m1[i] - m2[i]) < 1e-9);
  }
}

TEST_SUITE("fft") {
  TEST_CASE("cosine on bin 5") {
    Series x(128);
    for (std::size_t i = 0; i < 128; ++i) x[i] = std::cos(2 * kPi * 5.0 * static_cast<double>(i) / 128.0);
    const auto mags = real_fft_magnitudes(x);
    REQUIRE(mags.size() == 64);
    const auto best = static_cast<std::size_t>(std::max_element(mags.begin(), mags.end()) - mags.begin());
    CHECK(best + 1 == 5);
    CHECK(mags[4] == doctest::Approx(64.0));
    for (std::size_t k = 0; k < 64; ++k) {
      if (k != 4) CHECK(mags[k] < 1e-9);
    }
  }
  TEST_CASE("all zeros") {
    for (double v : real_fft_magnitudes(Series(128, 0.0))) CHECK(v == 0.0);
  }
  TEST_CASE("matches a direct DFT and satisfies Parseval") {
    SplitMix rng(21);
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = random_series(rng, 128);
      const auto fast = fft128(x);
      const auto slow = oracle_dft(x);
      double energy_t = 0, energy_f = 0;
      for (std::size_t k = 0; k < 128; ++k) {
        CHECK(std::abs(fast[k] - slow[k]) < 1e-9);
        energy_f += std::norm(fast[k]);
        energy_t += x[k] * x[k];
      }
      CHECK(std::abs(energy_f / 128.0 - energy_t) <= 1e-9 * energy_t);
      const auto mags = real_fft_magnitudes(x);
      for (std::size_t k = 1; k <= 64; ++k) CHECK(std::abs(mags[k - 1] - std::abs(slow[k])) < 1e-9);
    }
  }
  TEST_CASE("wrong length") { CHECK_THROWS_AS(real_fft_magnitudes(Series(127, 0.0)), Error); }
}

TEST_SUITE("basic_stats") {
  TEST_CASE("constant series") {
    const auto s = basic_stats(Series(16, 2.5));
    CHECK(s.mean == 2.5);
    CHECK(s.std == 0.0);
    CHECK(s.mad == 0.0);
    CHECK(s.energy == doctest::Approx(6.25));
    CHECK(s.skewness == 0.0);
    CHECK(s.kurtosis == 0.0);
    CHECK(s.degenerate);
  }
  TEST_CASE("energy is the mean square") { CHECK(basic_stats(Series{1, 2, 2}).energy == doctest::Approx(3.0)); }
  TEST_CASE("all statistics match a direct-formula oracle") {
    SplitMix rng(77);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 2 + uniform_below(rng, 200);
      const auto x = random_series(rng, n, -5, 5);
      const auto s = basic_stats(x);
      const auto o = oracle_stats(x);
      CHECK(close(s.mean, o.mean, 1e-12));
      CHECK(close(s.std, o.std, 1e-12));
      CHECK(close(s.mad, o.mad, 1e-12));
      CHECK(s.max == o.max);
      CHECK(s.min == o.min);
      CHECK(close(s.energy, o.energy, 1e-12));
      CHECK(close(s.iqr, o.iqr, 1e-12));
      CHECK(close(s.entropy, o.entropy, 1e-12));
      CHECK(close(s.skewness, o.skew, 1e-12));
      CHECK(close(s.kurtosis, o.kurt, 1e-12));
    }
  }
  TEST_CASE("entropy of an all-zero signal is 0") { CHECK(signal_entropy(Series(8, 0.0)) == 0.0); }
  TEST_CASE("too short") { CHECK_THROWS_AS(basic_stats(Series{1.0}), Error); }
}

TEST_SUITE("burg") {
  TEST_CASE("returns the requested order") {
    SplitMix rng(1);
    CHECK(burg_ar_coefficients(random_series(rng, 128), 4).size() == 4);
  }
  TEST_CASE("recovers an AR(1) coefficient") {
    SplitMix rng(2024);
    Series x(10000);
    double prev = 0;
    for (auto& v : x) {
      v = 0.5 * prev + rng.normal();
      prev = v;
    }
    const auto c = burg_ar_coefficients(x, 4);
    CHECK(c[0] == doctest::Approx(0.5).epsilon(0.1));
    CHECK(std::abs(c[0] - 0.5) <= 0.05);
    CHECK(std::abs(c[1]) < 0.05);
  }
  TEST_CASE("reflection coefficients stay inside the unit interval") {
    SplitMix rng(8);
    for (int trial = 0; trial < 500; ++trial) {
      const auto x = random_series(rng, 5 + uniform_below(rng, 200));
      for (double k : burg(x, 4).reflection) CHECK(std::abs(k) < 1.0);
    }
    // Smooth, strongly correlated input pushes |k| toward 1.
    for (double k : burg(sine(128, 2.0, 1.0, 0.3), 4).reflection) CHECK(std::abs(k) < 1.0);
  }
  TEST_CASE("constant input") { CHECK_THROWS_AS(burg(Series(20, 1.0), 4), Error); }
}

TEST_SUITE("sma and correlation") {
  TEST_CASE("sma") {
    CHECK(sma(Series(9, 1.0), Series(9, 1.0), Series(9, 1.0)) == 3.0);
    CHECK(sma(Series(9, 0.0), Series(9, 0.0), Series(9, 0.0)) == 0.0);
    SplitMix rng(4);
    for (int trial = 0; trial < 100; ++trial) {
      const auto x = random_series(rng, 50), y = random_series(rng, 50), z = random_series(rng, 50);
      long double t = 0;
      for (std::size_t i = 0; i < 50; ++i) t += std::fabs(x[i]) + std::fabs(y[i]) + std::fabs(z[i]);
      CHECK(close(sma(x, y, z), static_cast<double>(t / 50), 1e-12));
    }
  }
  TEST_CASE("correlation extremes and orthogonality") {
    SplitMix rng(6);
    auto a = random_series(rng, 40);
    auto neg = a;
    for (auto& v : neg) v = -v;
    CHECK(correlation(a, a) == doctest::Approx(1.0));
    CHECK(correlation(a, neg) == doctest::Approx(-1.0));
    Series s(200), c(200);
    for (std::size_t i = 0; i < 200; ++i) {
      s[i] = std::sin(2 * kPi * 4 * static_cast<double>(i) / 200);
      c[i] = std::cos(2 * kPi * 4 * static_cast<double>(i) / 200);
    }
    CHECK(std::abs(correlation(s, c)) < 1e-9);
    CHECK_THROWS_AS(correlation(a, Series(40, 1.0)), Error);
  }
}

TEST_SUITE("spectral features") {
  TEST_CASE("single bin") {
    Series spec(64, 0.0);
    spec[4] = 3.0;
    const auto f = spectral_features(spec);
    CHECK(f.argmax_bin == 5);
    CHECK(f.max_inds == doctest::Approx(5.0 / 64));
    CHECK(f.mean_freq == doctest::Approx(5 * 50.0 / 128));
  }
  TEST_CASE("flat spectrum") {
    double mean_f = 0;
    for (int k = 1; k <= 64; ++k) mean_f += k * 50.0 / 128;
    CHECK(spectral_features(Series(64, 1.0)).mean_freq == doctest::Approx(mean_f / 64));
  }
  TEST_CASE("two equal bins: symmetric mean, lowest index wins the tie") {
    Series spec(64, 0.0);
    spec[1] = spec[5] = 2.0;
    const auto f = spectral_features(spec);
    CHECK(f.mean_freq == doctest::Approx(4 * 50.0 / 128));
    CHECK(f.argmax_bin == 2);
  }
  TEST_CASE("all-zero spectrum is flagged") {
    const auto f = spectral_features(Series(64, 0.0));
    CHECK(f.degenerate);
    CHECK(f.mean_freq == 0.0);
  }
}

TEST_SUITE("bands energy") {
  TEST_CASE("layout") {
    const auto& b = standard_bands();
    CHECK(b.size() == 14);
    CHECK(b[7].lo == 57);
    CHECK(b[7].hi == 64);
    CHECK(b[13].lo == 25);
    CHECK(b[13].hi == 48);
  }
  TEST_CASE("flat unit spectrum") {
    for (double e : bands_energy(Series(64, 1.0))) CHECK(e == doctest::Approx(1.0));
  }
  TEST_CASE("single unit bin only lights up the bands containing it") {
    Series spec(64, 0.0);
    spec[2] = 1.0;
    const auto e = bands_energy(spec);
    const auto& bands = standard_bands();
    for (std::size_t i = 0; i < bands.size(); ++i) {
      const bool contains = bands[i].lo <= 3 && 3 <= bands[i].hi;
      CHECK((e[i] > 0) == contains);
    }
  }
  TEST_CASE("matches a direct sum") {
    SplitMix rng(13);
    for (int trial = 0; trial < 100; ++trial) {
      const auto spec = random_series(rng, 64, 0, 10);
      const auto e = bands_energy(spec);
      const auto& bands = standard_bands();
      for (std::size_t i = 0; i < bands.size(); ++i) {
        long double acc = 0;
        for (int k = bands[i].lo; k <= bands[i].hi; ++k) acc += static_cast<long double>(spec[static_cast<std::size_t>(k - 1)]) * spec[static_cast<std::size_t>(k - 1)];
        CHECK(close(e[i], static_cast<double>(acc / (bands[i].hi - bands[i].lo + 1)), 1e-12));
      }
    }
    CHECK_THROWS_AS(bands_energy(Series(63, 1.0)), Error);
  }
}

TEST_SUITE("angle") {
  TEST_CASE("right, parallel and antiparallel") {
    CHECK(angle({1, 0, 0}, {0, 1, 0}) == doctest::Approx(kPi / 2));
    CHECK(angle({1, 2, 3}, {2, 4, 6}) == doctest::Approx(0.0));
    CHECK(angle({1, 2, 3}, {-1, -2, -3}) == doctest::Approx(kPi));
    CHECK_THROWS_AS(angle({0, 0, 0}, {1, 0, 0}), Error);
  }
}
