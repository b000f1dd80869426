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

#include "harbench/minirocket.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include "json.hpp"
#include <string>

#include "harbench/parallel.hpp"
#include "harbench/rng.hpp"
#include "harbench/simd/kernels.hpp"

namespace harbench::minirocket {
namespace {

KernelSet make_standard() {
  KernelSet set;
  std::size_t k = 0;
  for (std::uint8_t a = 0; a < kKernelLength; ++a) {
    for (std::uint8_t b = a + 1; b < kKernelLength; ++b) {
      for (std::uint8_t c = b + 1; c < kKernelLength; ++c) set.positive[k++] = {a, b, c};
    }
  }
  return set;
}

// Convolution by decomposition: every kernel is -1 everywhere plus +3 at its
// three positive taps, so per dilation we build
//   alpha = sum over the 9 taps of the shifted -x,
//   gamma[j] = 3x shifted to tap j,
// and each kernel's output is alpha + three gamma rows.
class Convolver {
 public:
  explicit Convolver(std::size_t length)
      : length_(length), neg_(length), triple_(length), alpha_(length), gamma_(kKernelLength * length), out_(length) {}

  void prepare(std::span<const float> x, std::size_t dilation) {
    const auto& kt = simd::active_kernels();
    const std::size_t n = length_;
    for (std::size_t i = 0; i < n; ++i) {
      neg_[i] = -x[i];
      triple_[i] = x[i] + x[i] + x[i];
    }
    std::copy(neg_.begin(), neg_.end(), alpha_.begin());
    std::fill(gamma_.begin(), gamma_.end(), 0.0f);
    std::copy(triple_.begin(), triple_.end(), gamma_.begin() + 4 * n);

    const std::size_t half = DilationPlan::half_width(dilation);
    // Taps 0..3 look back: output t reads x[t - (4 - j) d].
    std::size_t end = n - half;
    for (std::size_t j = 0; j < 4; ++j) {
      const std::size_t shift = n - end;
      kt.accumulate(alpha_.data() + shift, neg_.data(), end);
      std::copy(triple_.begin(), triple_.begin() + static_cast<std::ptrdiff_t>(end), gamma_.begin() + j * n + shift);
      end += dilation;
    }
    // Taps 5..8 look ahead: output t reads x[t + (j - 4) d].
    std::size_t start = dilation;
    for (std::size_t j = 5; j < kKernelLength; ++j) {
      kt.accumulate(alpha_.data(), neg_.data() + start, n - start);
      std::copy(triple_.begin() + static_cast<std::ptrdiff_t>(start), triple_.end(), gamma_.begin() + j * n);
      start += dilation;
    }
  }

  std::span<const float> output(std::size_t kernel) {
    const auto& p = KernelSet::standard().positive[kernel];
    const std::size_t n = length_;
    simd::active_kernels().combine3(alpha_.data(), gamma_.data() + p[0] * n, gamma_.data() + p[1] * n,
                                    gamma_.data() + p[2] * n, out_.data(), n);
    return out_;
  }

 private:
  std::size_t length_;
  std::vector<float> neg_, triple_, alpha_, gamma_, out_;
};

std::vector<std::size_t> dilation_offsets(const DilationPlan& plan) {
  std::vector<std::size_t> off;
  std::size_t acc = 0;
  for (const auto& e : plan.entries) {
    off.push_back(acc);
    acc += kKernelCount * e.features_per_kernel;
  }
  off.push_back(acc);
  return off;
}

void check_length(const MatrixF& x, const DilationPlan& plan) {
  if (x.cols() != plan.input_length) {
    throw Error(Errc::LengthMismatch, "series length " + std::to_string(x.cols()) + ", plan expects " +
                                          std::to_string(plan.input_length));
  }
}

// numpy 'linear' quantile of an ascending sample.
double linear_quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double t = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * t;
}

}  // namespace

const KernelSet& KernelSet::standard() {
  static const KernelSet set = make_standard();
  return set;
}

std::array<std::int8_t, kKernelLength> KernelSet::weights(std::size_t kernel) const {
  std::array<std::int8_t, kKernelLength> w;
  w.fill(-1);
  for (auto p : positive.at(kernel)) w[p] = 2;
  return w;
}

std::uint64_t KernelSet::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t k = 0; k < kKernelCount; ++k) {
    for (auto w : weights(k)) {
      h ^= static_cast<std::uint8_t>(w);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::size_t DilationPlan::feature_count() const {
  std::size_t per_kernel = 0;
  for (const auto& e : entries) per_kernel += e.features_per_kernel;
  return kKernelCount * per_kernel;
}

DilationPlan plan(std::size_t input_length, std::size_t target_features, std::uint64_t seed) {
  if (input_length < kKernelLength) {
    throw Error(Errc::InputTooShort, "series length " + std::to_string(input_length) + " is below 9");
  }
  if (target_features < kKernelCount) {
    throw Error(Errc::InvalidArgument, "target_features must be at least 84");
  }
  DilationPlan out;
  out.input_length = input_length;
  out.target_features = target_features;
  out.seed = seed;

  const std::size_t per_kernel = target_features / kKernelCount;
  const std::size_t num = std::min(per_kernel, kMaxDilationsPerKernel);
  const double multiplier = static_cast<double>(per_kernel) / static_cast<double>(num);
  const double max_exponent = std::log2(static_cast<double>(input_length - 1) / (kKernelLength - 1));

  // Unique floor(2^x) over an even grid of exponents, with multiplicities.
  std::map<std::size_t, std::size_t> counts;
  for (std::size_t i = 0; i < num; ++i) {
    double x = num == 1 ? 0.0 : static_cast<double>(i) * (max_exponent / static_cast<double>(num - 1));
    if (num > 1 && i == num - 1) x = max_exponent;
    ++counts[static_cast<std::size_t>(std::floor(std::pow(2.0, x)))];
  }
  std::size_t assigned = 0;
  for (const auto& [d, c] : counts) {
    const auto f = static_cast<std::size_t>(static_cast<double>(c) * multiplier);
    out.entries.push_back({d, f});
    assigned += f;
  }
  for (std::size_t i = 0; assigned < per_kernel; i = (i + 1) % out.entries.size(), ++assigned) {
    ++out.entries[i].features_per_kernel;
  }
  return out;
}

double feature_quantile(std::size_t j) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const double v = static_cast<double>(j + 1) * phi;
  return v - std::floor(v);
}

std::vector<float> convolve(std::span<const float> series, std::size_t kernel, std::size_t dilation) {
  if (kernel >= kKernelCount) throw Error(Errc::InvalidArgument, "kernel index out of range");
  if (dilation == 0 || DilationPlan::half_width(dilation) >= series.size()) {
    throw Error(Errc::InputTooShort, "dilation too large for series length");
  }
  Convolver conv(series.size());
  conv.prepare(series, dilation);
  const auto c = conv.output(kernel);
  return {c.begin(), c.end()};
}

BiasTable fit_biases(const MatrixF& train, const DilationPlan& plan, std::uint64_t seed) {
  if (train.rows() == 0) throw Error(Errc::EmptyTrainingSet, "bias fitting needs at least one series");
  check_length(train, plan);
  const auto offsets = dilation_offsets(plan);
  BiasTable table;
  table.fit_seed = seed;
  table.sample_size = train.rows();
  table.biases.assign(offsets.back(), 0.0f);

  const std::size_t slots = plan.entries.size() * kKernelCount;
  parallel_for(slots, [&](std::size_t slot) {
    const std::size_t di = slot / kKernelCount, k = slot % kKernelCount;
    const auto& e = plan.entries[di];
    const std::size_t row = keyed_below(seed, slot, train.rows());
    Convolver conv(plan.input_length);
    conv.prepare(train.row(row), e.dilation);
    const auto c = conv.output(k);
    std::vector<double> sorted(c.begin(), c.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t base = offsets[di] + k * e.features_per_kernel;
    for (std::size_t f = 0; f < e.features_per_kernel; ++f) {
      table.biases[base + f] = static_cast<float>(linear_quantile(sorted, feature_quantile(base + f)));
    }
  });
  return table;
}

MatrixF transform(const MatrixF& x, const DilationPlan& plan, const BiasTable& biases) {
  check_length(x, plan);
  const auto offsets = dilation_offsets(plan);
  if (biases.biases.size() != offsets.back()) {
    throw Error(Errc::DimensionMismatch, "bias table does not match the dilation plan");
  }
  MatrixF out(x.rows(), offsets.back());
  const auto& kt = simd::active_kernels();
  const std::size_t length = plan.input_length;
  parallel_for(x.rows(), [&](std::size_t i) {
    Convolver conv(length);
    auto row = out.row(i);
    for (std::size_t di = 0; di < plan.entries.size(); ++di) {
      const auto& e = plan.entries[di];
      conv.prepare(x.row(i), e.dilation);
      const std::size_t half = DilationPlan::half_width(e.dilation);
      for (std::size_t k = 0; k < kKernelCount; ++k) {
        const auto c = conv.output(k);
        const std::size_t base = offsets[di] + k * e.features_per_kernel;
        if (DilationPlan::padding(di, k) == Padding::same) {
          kt.ppv(c.data(), length, biases.biases.data() + base, e.features_per_kernel, row.data() + base);
        } else {
          kt.ppv(c.data() + half, length - 2 * half, biases.biases.data() + base, e.features_per_kernel,
                 row.data() + base);
        }
      }
    }
  });
  return out;
}

MatrixF to_float(const MatrixD& x) {
  MatrixF out(x.rows(), x.cols());
  std::transform(x.data(), x.data() + x.rows() * x.cols(), out.data(), [](double v) { return static_cast<float>(v); });
  return out;
}

MiniRocketModel fit(const MatrixD& series, std::span<const int> labels, const FitOptions& options) {
  if (series.rows() == 0) throw Error(Errc::EmptyTrainingSet, "no training series");
  if (labels.size() != series.rows()) throw Error(Errc::DimensionMismatch, "labels and series rows differ");
  MiniRocketModel model;
  model.kernel_hash = KernelSet::standard().hash();
  model.plan = plan(series.cols(), options.target_features, options.seed);
  const MatrixF x = to_float(series);
  model.biases = fit_biases(x, model.plan, options.seed);
  const MatrixF features = transform(x, model.plan, model.biases);
  model.head = ridge::fit_ridge(features, labels, {options.lambdas});
  return model;
}

Prediction predict(const MiniRocketModel& model, const MatrixD& series) {
  const MatrixF features = transform(to_float(series), model.plan, model.biases);
  Prediction p;
  p.scores = ridge::decision_function(model.head, features);
  p.labels = ridge::predict_labels(model.head, p.scores);
  return p;
}

std::string to_json(const MiniRocketModel& model) {
  using nlohmann::json;
  json entries = json::array();
  for (const auto& e : model.plan.entries) entries.push_back({{"dilation", e.dilation}, {"features_per_kernel", e.features_per_kernel}});
  const auto& h = model.head;
  json doc = {
      {"format", "harbench.minirocket"},
      {"version", std::string(kVersion)},
      {"kernel_hash", model.kernel_hash},
      {"plan",
       {{"input_length", model.plan.input_length},
        {"target_features", model.plan.target_features},
        {"seed", model.plan.seed},
        {"entries", entries}}},
      {"biases", {{"fit_seed", model.biases.fit_seed}, {"sample_size", model.biases.sample_size}, {"values", model.biases.biases}}},
      {"head",
       {{"classes", h.classes},
        {"input_dim", h.input_dim},
        {"kept", h.kept},
        {"mean", h.mean},
        {"scale", h.scale},
        {"weights", h.weights.storage()},
        {"intercept", h.intercept},
        {"lambda", h.lambda},
        {"lambdas", h.lambdas},
        {"loo_errors", h.loo_errors}}},
  };
  return doc.dump();
}

MiniRocketModel model_from_json(std::string_view text) {
  using nlohmann::json;
  MiniRocketModel m;
  try {
    const json doc = json::parse(text);
    if (doc.at("format") != "harbench.minirocket") throw Error(Errc::InvalidArgument, "not a minirocket model");
    m.kernel_hash = doc.at("kernel_hash").get<std::uint64_t>();
    if (m.kernel_hash != KernelSet::standard().hash()) {
      throw Error(Errc::SchemaVersionMismatch, "kernel set hash differs from this build");
    }
    const auto& p = doc.at("plan");
    m.plan.input_length = p.at("input_length");
    m.plan.target_features = p.at("target_features");
    m.plan.seed = p.at("seed");
    for (const auto& e : p.at("entries")) m.plan.entries.push_back({e.at("dilation").get<std::size_t>(), e.at("features_per_kernel").get<std::size_t>()});
    const auto& b = doc.at("biases");
    m.biases.fit_seed = b.at("fit_seed");
    m.biases.sample_size = b.at("sample_size");
    m.biases.biases = b.at("values").get<std::vector<float>>();
    const auto& h = doc.at("head");
    m.head.classes = h.at("classes").get<std::vector<int>>();
    m.head.input_dim = h.at("input_dim");
    m.head.kept = h.at("kept").get<std::vector<std::size_t>>();
    m.head.mean = h.at("mean").get<std::vector<double>>();
    m.head.scale = h.at("scale").get<std::vector<double>>();
    const auto w = h.at("weights").get<std::vector<double>>();
    if (w.size() != m.head.kept.size() * m.head.classes.size()) throw Error(Errc::InvalidArgument, "weight count mismatch");
    m.head.weights = MatrixD(m.head.kept.size(), m.head.classes.size());
    std::copy(w.begin(), w.end(), m.head.weights.data());
    m.head.intercept = h.at("intercept").get<std::vector<double>>();
    m.head.lambda = h.at("lambda");
    m.head.lambdas = h.at("lambdas").get<std::vector<double>>();
    m.head.loo_errors = h.at("loo_errors").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("malformed model document: ") + e.what());
  }
  if (m.biases.biases.size() != m.plan.feature_count()) throw Error(Errc::InvalidArgument, "bias count mismatch");
  return m;
}

}  // namespace harbench::minirocket
