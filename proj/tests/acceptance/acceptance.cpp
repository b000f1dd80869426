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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any selected criterion fails.
//
//   harbench_acceptance --properties          dataset-independent checks (7)
//   harbench_acceptance --dataset <root>      full-dataset criteria (1-6, 8)
//
// Without --dataset, HARBENCH_DATA is used; when neither names a directory
// the dataset criteria are reported as failures and the exit code is 77
// (kNoData), which ctest shows as a skipped test rather than a pass.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "harbench/blas_env.hpp"
#include "harbench/dataset.hpp"
#include "harbench/evaluation.hpp"
#include "harbench/features.hpp"
#include "harbench/gbdt.hpp"
#include "harbench/minirocket.hpp"
#include "harbench/parallel.hpp"
#include "harbench/reference.hpp"
#include "harbench/rng.hpp"
#include "harbench/signal.hpp"
#include "support/synthetic.hpp"

using namespace harbench;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;
bool g_no_data = false;
constexpr int kNoData = 77;

void report(const std::string& id, const std::string& title, const Outcome& o) {
  std::cout << (o.pass ? "PASS " : "FAIL ") << id << "  " << title;
  if (!o.detail.empty()) std::cout << "  [" << o.detail << ']';
  std::cout << std::endl;
  if (!o.pass) ++g_failures;
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// ---------------------------------------------------------------------------
// Criterion 7: properties that hold without the recordings.

double oracle_accuracy(const std::vector<int>& t, const std::vector<int>& p) {
  double hit = 0;
  for (std::size_t i = 0; i < t.size(); ++i) hit += t[i] == p[i] ? 1 : 0;
  return hit / static_cast<double>(t.size());
}

double oracle_macro_f1(const std::vector<int>& t, const std::vector<int>& p) {
  double table[7][7] = {};
  for (std::size_t i = 0; i < t.size(); ++i) table[t[i]][p[i]] += 1;
  double sum = 0;
  for (int c = 1; c <= 6; ++c) {
    double col = 0, row = 0;
    for (int o = 1; o <= 6; ++o) {
      col += table[o][c];
      row += table[c][o];
    }
    const double prec = col > 0 ? table[c][c] / col : 0, rec = row > 0 ? table[c][c] / row : 0;
    sum += prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0;
  }
  return sum / 6;
}

double oracle_ovo(const std::vector<int>& t, const MatrixD& s) {
  double total = 0;
  int pairs = 0;
  for (int a = 1; a <= 6; ++a) {
    for (int b = a + 1; b <= 6; ++b) {
      double wa = 0, wb = 0, count = 0;
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] != a) continue;
        for (std::size_t j = 0; j < t.size(); ++j) {
          if (t[j] != b) continue;
          count += 1;
          wa += s(i, a - 1) > s(j, a - 1) ? 1 : (s(i, a - 1) == s(j, a - 1) ? 0.5 : 0);
          wb += s(j, b - 1) > s(i, b - 1) ? 1 : (s(j, b - 1) == s(i, b - 1) ? 0.5 : 0);
        }
      }
      if (count == 0) continue;
      total += (wa + wb) / (2 * count);
      ++pairs;
    }
  }
  return total / pairs;
}

Outcome metric_oracles() {
  SplitMix rng(2718);
  double worst = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 2 + rng() % 60;
    std::vector<int> t(n), p(n);
    MatrixD s(n, 6);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = 1 + static_cast<int>(rng() % 6);
      p[i] = 1 + static_cast<int>(rng() % 6);
      for (std::size_t c = 0; c < 6; ++c) s(i, c) = static_cast<double>(rng() % 9) / 9.0;
    }
    t[0] = 1;
    t[1] = 2;
    worst = std::max({worst, std::abs(evaluation::accuracy(t, p) - oracle_accuracy(t, p)),
                      std::abs(evaluation::macro_f1(t, p) - oracle_macro_f1(t, p)),
                      std::abs(evaluation::ovo_auc(t, s) - oracle_ovo(t, s))});
  }
  return {worst <= 1e-12, "2000 random sets, max deviation " + fmt("%.2e", worst)};
}

std::vector<float> oracle_ppv(std::span<const float> x, const minirocket::DilationPlan& p,
                              const minirocket::BiasTable& b) {
  const auto& kernels = minirocket::KernelSet::standard();
  const auto length = static_cast<std::ptrdiff_t>(x.size());
  std::vector<float> out;
  std::size_t f = 0;
  for (std::size_t di = 0; di < p.entries.size(); ++di) {
    const auto d = static_cast<std::ptrdiff_t>(p.entries[di].dilation);
    for (std::size_t k = 0; k < minirocket::kKernelCount; ++k) {
      const auto w = kernels.weights(k);
      std::vector<float> c(x.size(), 0.0f);
      for (std::ptrdiff_t t = 0; t < length; ++t) {
        for (std::ptrdiff_t j = 0; j < 9; ++j) {
          const std::ptrdiff_t s = t + (j - 4) * d;
          if (s >= 0 && s < length) c[t] += static_cast<float>(w[j]) * x[s];
        }
      }
      std::size_t lo = 0, hi = c.size();
      if ((di + k) % 2 == 1) {
        lo = static_cast<std::size_t>(4 * d);
        hi = c.size() - lo;
      }
      for (std::size_t s = 0; s < p.entries[di].features_per_kernel; ++s, ++f) {
        std::size_t count = 0;
        for (std::size_t t = lo; t < hi; ++t) count += c[t] > b.biases[f] ? 1 : 0;
        out.push_back(static_cast<float>(count) / static_cast<float>(hi - lo));
      }
    }
  }
  return out;
}

Outcome minirocket_oracle() {
  SplitMix rng(31);
  std::size_t checked = 0, mismatched = 0;
  for (std::size_t length = 9; length <= 16; ++length) {
    // Multiples of 1/8: every partial sum is exact in float.
    MatrixF x(6, length);
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t t = 0; t < length; ++t) x(i, t) = static_cast<float>(static_cast<int>(rng() % 65) - 32) / 8.0f;
    }
    const auto p = minirocket::plan(length, 84 * 6, length);
    const auto b = minirocket::fit_biases(x, p, length);
    const auto f = minirocket::transform(x, p, b);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const auto want = oracle_ppv(x.row(i), p, b);
      const auto row = f.row(i);
      ++checked;
      if (!std::equal(row.begin(), row.end(), want.begin(), want.end())) ++mismatched;
    }
  }
  return {mismatched == 0, std::to_string(checked) + " series, L = 9..16, " + std::to_string(mismatched) + " mismatched"};
}

Outcome gbdt_equivalence() {
  std::size_t differing = 0;
  constexpr std::uint64_t kSets = 60;
  for (std::uint64_t seed = 1; seed <= kSets; ++seed) {
    SplitMix rng(seed * 7919);
    const std::size_t n = 8 + rng() % 57, d = 1 + rng() % 5;
    MatrixD x(n, d);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = static_cast<int>(rng() % 4);
      for (std::size_t j = 0; j < d; ++j) {
        const auto u = rng() % 20;
        x(i, j) = u == 0 ? std::nan("") : static_cast<double>(u % 7) + (j == 0 ? y[i] : 0);
      }
    }
    y[0] = 0;
    y[1] = 1;
    gbdt::TrainConfig cfg;
    cfg.rounds = 5;
    cfg.max_depth = 4;
    cfg.min_child_weight = 0.0;
    const auto hist = gbdt::train(x, y, cfg);
    cfg.split_method = gbdt::SplitMethod::exact;
    const auto exact = gbdt::train(x, y, cfg);
    if (!(hist.trees == exact.trees)) ++differing;
  }
  return {differing == 0, std::to_string(kSets) + " data sets with n <= 64, " + std::to_string(differing) + " differing"};
}

Outcome softmax_gradient() {
  SplitMix rng(5);
  double worst = 0;
  for (int t = 0; t < 500; ++t) {
    std::vector<double> z(6), p(6);
    for (auto& v : z) v = rng.uniform(-4, 4);
    const auto label = static_cast<std::size_t>(rng() % 6);
    gbdt::softmax(z, p);
    for (std::size_t k = 0; k < 6; ++k) {
      const double eps = 1e-5;
      auto zp = z, zm = z;
      zp[k] += eps;
      zm[k] -= eps;
      const double numeric = (gbdt::softmax_loss(zp, label) - gbdt::softmax_loss(zm, label)) / (2 * eps);
      const double analytic = p[k] - (k == label ? 1.0 : 0.0);
      worst = std::max(worst, std::abs(numeric - analytic) / std::max(1.0, std::abs(analytic)));
    }
  }
  return {worst <= 1e-6, "max relative error " + fmt("%.2e", worst)};
}

double response(const std::vector<signal::Section>& sections, double f, double fs) {
  const std::complex<double> z1 = std::polar(1.0, -2 * std::numbers::pi * f / fs);
  std::complex<double> h = 1.0;
  for (const auto& s : sections) h *= (s.b0 + s.b1 * z1 + s.b2 * z1 * z1) / (1.0 + s.a1 * z1 + s.a2 * z1 * z1);
  return std::abs(h);
}

// Frequency where the single-pass gain falls to 1/sqrt(2), by bisection.
double minus_3db_point(double cutoff, double fs) {
  const auto sections = signal::butterworth_sections(3, cutoff, fs);
  double lo = 1e-6, hi = fs / 2 - 1e-6;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (response(sections, mid, fs) > 1 / std::sqrt(2.0) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Amplitude of a filtered unit tone, fitted after the start-up transient.
double measured_gain(double freq, double fs) {
  const std::size_t n = 20000, skip = 10000;
  signal::Series x(n);
  for (std::size_t t = 0; t < n; ++t) x[t] = std::sin(2 * std::numbers::pi * freq * static_cast<double>(t) / fs);
  const auto y = signal::butterworth_lowpass(x, signal::FilterSpec::butterworth(3, freq, fs), signal::Phase::single_pass);
  double sc = 0, cc = 0;
  for (std::size_t t = skip; t < n; ++t) {
    const double w = 2 * std::numbers::pi * freq * static_cast<double>(t) / fs;
    sc += y[t] * std::sin(w);
    cc += y[t] * std::cos(w);
  }
  return 2 * std::hypot(sc, cc) / static_cast<double>(n - skip);
}

Outcome butterworth_corner() {
  bool ok = true;
  std::string detail;
  for (double fc : {20.0, 0.3}) {
    const double f3 = minus_3db_point(fc, 50.0);
    const double gain = measured_gain(fc, 50.0);
    ok &= std::abs(f3 / fc - 1) <= 0.05 && std::abs(gain * std::sqrt(2.0) - 1) <= 0.05;
    detail += (detail.empty() ? "" : "; ") + fmt("fc %.1f Hz", fc) + fmt(": -3 dB at %.4f Hz", f3) +
              fmt(", tone gain %.4f", gain);
  }
  return {ok, detail};
}

Outcome burg_ar1() {
  SplitMix rng(99);
  signal::Series x(20000);
  double prev = 0;
  for (auto& v : x) {
    v = 0.5 * prev + rng.normal();
    prev = v;
  }
  const double a1 = signal::burg_ar_coefficients(x, 4)[0];
  return {std::abs(a1 - 0.5) <= 0.05, "estimated a1 = " + fmt("%.4f", a1)};
}

Outcome gravity_reconstruction() {
  SplitMix rng(13);
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    signal::Triaxial t;
    for (auto* axis : {&t.x, &t.y, &t.z}) {
      axis->resize(128);
      for (auto& v : *axis) v = rng.uniform(-2, 2);
    }
    const auto gb = signal::split_gravity_body(t);
    for (std::size_t i = 0; i < 128; ++i) {
      worst = std::max({worst, std::abs(gb.gravity.x[i] + gb.body.x[i] - t.x[i]),
                        std::abs(gb.gravity.y[i] + gb.body.y[i] - t.y[i]),
                        std::abs(gb.gravity.z[i] + gb.body.z[i] - t.z[i])});
    }
  }
  // body is formed as total - gravity, so the only residue is the rounding of
  // that one subtraction (at most one ulp of the inputs).
  return {worst <= 4.5e-16, "max |gravity + body - total| = " + fmt("%.2e", worst)};
}

std::string strip_timing(evaluation::EvalReport r) {
  for (auto& it : r.results) it.train_time_s = it.predict_time_s = 0;
  r.train_time_s = r.predict_time_s = {};
  return evaluation::report_to_json(r);
}

Outcome reproducible_runs() {
  testing::SyntheticOptions so;
  so.instances = 180;
  const auto bundle = testing::make_synthetic_bundle(so);
  evaluation::McOptions mc;
  mc.iterations = 3;
  mc.seed_base = 17;

  evaluation::ModelSpec g;
  g.kind = evaluation::ModelKind::gbdt;
  g.gbdt.rounds = 20;
  evaluation::ModelSpec m;
  m.kind = evaluation::ModelKind::minirocket;
  m.target_features = 84 * 12;

  // Parallel workers against a single thread: chunking must not change a bit.
  const auto saved = thread_count();
  std::vector<std::string> runs[2];
  const std::size_t counts[2] = {4, 1};
  for (int t = 0; t < 2; ++t) {
    set_thread_count(counts[t]);
    runs[t].push_back(strip_timing(evaluation::run_mccv(bundle, g, evaluation::InputSpec{}, mc)));
    runs[t].push_back(strip_timing(evaluation::run_mccv(bundle, m, evaluation::InputSpec{}, mc)));
    runs[t].push_back(strip_timing(evaluation::run_mccv(bundle, m, evaluation::InputSpec::parse("channel:body_gyro_y"), mc)));
  }
  set_thread_count(saved);
  const bool same = runs[0] == runs[1];
  return {same, std::string("gbdt, minirocket (precomputed and raw channel), 4 vs 1 threads: ") +
                    (same ? "identical" : "different") + " reports"};
}

void run_properties() {
  report("7a", "metric brute-force oracles within 1e-12", metric_oracles());
  report("7b", "MiniRocket transform equals nested-loop convolution (L <= 16)", minirocket_oracle());
  report("7c", "GBDT histogram and exact split finding agree (n <= 64)", gbdt_equivalence());
  report("7d", "softmax gradient matches finite differences (1e-6 relative)", softmax_gradient());
  report("7e", "Butterworth -3 dB point within 5% of the cutoff", butterworth_corner());
  report("7f", "Burg recovers an AR(1) coefficient of 0.5 within 0.05", burg_ar1());
  report("7g", "gravity + body reconstructs total acceleration", gravity_reconstruction());
  report("7h", "full runs are bit-reproducible given seeds", reproducible_runs());
}

// ---------------------------------------------------------------------------
// Dataset criteria.

struct Run {
  std::string name;
  evaluation::ModelKind kind;
  std::string input;
  evaluation::EvalReport result;
};

evaluation::EvalReport run_once(const dataset::DatasetBundle& bundle, evaluation::ModelKind kind,
                                const std::string& input, std::size_t iterations, const fs::path& work,
                                const std::string& name) {
  evaluation::ModelSpec spec;
  spec.kind = kind;
  evaluation::McOptions mc;
  mc.iterations = iterations;
  std::cout << "  running " << name << " (" << iterations << " iterations)" << std::endl;
  auto r = evaluation::run_mccv(bundle, spec, evaluation::InputSpec::parse(input), mc);
  std::cout << "    accuracy " << fmt("%.4f", r.accuracy.mean) << ", F1 " << fmt("%.4f", r.macro_f1.mean) << ", AUC "
            << fmt("%.4f", r.ovo_auc.mean) << ", fit " << fmt("%.1f s", r.train_time_s.mean) << std::endl;
  if (!work.empty()) {
    fs::create_directories(work / name);
    std::ofstream(work / name / "report.json") << evaluation::report_to_json(r);
  }
  return r;
}

Outcome thresholds(const evaluation::EvalReport& r, double acc, double f1, double auc) {
  const bool ok = r.accuracy.mean >= acc && r.macro_f1.mean >= f1 && r.ovo_auc.mean >= auc;
  return {ok, "accuracy " + fmt("%.4f", r.accuracy.mean) + fmt(" (>= %.3f)", acc) + ", F1 " +
                  fmt("%.4f", r.macro_f1.mean) + fmt(" (>= %.3f)", f1) + ", AUC " + fmt("%.4f", r.ovo_auc.mean) +
                  fmt(" (>= %.3f)", auc)};
}

Outcome feature_agreement(const dataset::DatasetBundle& bundle) {
  const auto& catalog = features::FeatureCatalog::standard();
  std::vector<std::string> names;
  for (const char* stat : {"mean", "std", "max", "min", "energy"}) {
    for (const char* axis : {"X", "Y", "Z"}) names.push_back(std::string("tBodyAcc-") + stat + "()-" + axis);
  }
  const std::size_t n = bundle.size();
  MatrixD ours(n, catalog.size());
  parallel_for(n, [&](std::size_t i) {
    const auto fv = features::compute_feature_vector(bundle.inertial.window(i), catalog);
    std::copy(fv.values.begin(), fv.values.end(), ours.row(i).begin());
  });
  double worst = 1;
  std::string worst_name;
  for (const auto& name : names) {
    const auto j = catalog.index_of(name);
    const auto& shipped = bundle.features.names;
    const auto it = std::find(shipped.begin(), shipped.end(), name);
    if (j == features::FeatureCatalog::npos || it == shipped.end()) return {false, "column " + name + " not found"};
    const auto k = static_cast<std::size_t>(it - shipped.begin());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < n; ++i) {
      ma += ours(i, j);
      mb += bundle.features.values(i, k);
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = ours(i, j) - ma, b = bundle.features.values(i, k) - mb;
      sab += a * b;
      saa += a * a;
      sbb += b * b;
    }
    // The correlation of the best affine fit is |r|.
    const double r = saa > 0 && sbb > 0 ? std::abs(sab) / std::sqrt(saa * sbb) : 0;
    if (r < worst) {
      worst = r;
      worst_name = name;
    }
  }
  return {worst >= 0.99, "15 tBodyAcc columns, lowest r = " + fmt("%.4f", worst) + " (" + worst_name + ")"};
}

void fail_dataset(const std::string& why, bool absent = true) {
  g_no_data = absent;
  const Outcome o{false, why};
  report("1", "GBDT on precomputed features meets accuracy/F1/AUC floors", o);
  report("2", "MiniRocket on precomputed features meets accuracy/F1/AUC floors", o);
  report("3", "MiniRocket on raw channels within 0.03 of published accuracy, with axis orderings", o);
  report("4", "sitting/standing is the most confused pair in both precomputed runs", o);
  report("5", "GBDT trains faster than MiniRocket on precomputed features", o);
  report("6", "both models exceed the best literature baseline accuracy", o);
  report("8", "recomputed tBodyAcc features correlate >= 0.99 with shipped columns", o);
}

void run_dataset(const fs::path& root, std::size_t iterations, const fs::path& work) {
  dataset::DatasetBundle bundle;
  try {
    bundle = dataset::load_bundle(root);
  } catch (const std::exception& e) {
    fail_dataset(std::string("cannot load dataset: ") + e.what(), false);
    return;
  }
  std::cout << "  loaded " << bundle.size() << " instances from " << root.string() << std::endl;

  using evaluation::ModelKind;
  const auto gb = run_once(bundle, ModelKind::gbdt, "precomputed", iterations, work, "gbdt-precomputed");
  report("1", "GBDT on precomputed features meets accuracy/F1/AUC floors", thresholds(gb, 0.97, 0.97, 0.995));
  const auto mr = run_once(bundle, ModelKind::minirocket, "precomputed", iterations, work, "minirocket-precomputed");
  report("2", "MiniRocket on precomputed features meets accuracy/F1/AUC floors", thresholds(mr, 0.97, 0.97, 0.985));

  // Criterion 3.
  std::map<std::string, double> acc;
  bool within = true;
  std::string detail;
  for (const auto& row : reference::kMonteCarlo) {
    const std::string input(row.input);
    if (input.rfind("channel:", 0) != 0) continue;
    const std::string channel = input.substr(8);
    const auto r = run_once(bundle, ModelKind::minirocket, input, iterations, work, "minirocket-" + channel);
    acc[channel] = r.accuracy.mean;
    const double delta = r.accuracy.mean - row.accuracy;
    within &= std::abs(delta) <= 0.03;
    detail += channel + fmt(" %+.4f; ", delta);
  }
  const bool order_total = acc["total_acc_y"] > acc["total_acc_x"] && acc["total_acc_x"] > acc["total_acc_z"];
  const bool order_body = acc["body_acc_x"] > acc["body_acc_z"] && acc["body_acc_z"] > acc["body_acc_y"];
  const bool order_gyro = acc["body_gyro_x"] > acc["body_gyro_z"] && acc["body_gyro_z"] > acc["body_gyro_y"];
  detail += std::string("orderings total ") + (order_total ? "ok" : "violated") + ", body " +
            (order_body ? "ok" : "violated") + ", gyro " + (order_gyro ? "ok" : "violated");
  report("3", "MiniRocket on raw channels within 0.03 of published accuracy, with axis orderings",
         {within && order_total && order_body && order_gyro, detail});

  const auto sit = dataset::activity_code("SITTING"), stand = dataset::activity_code("STANDING");
  const std::pair<int, int> want{std::min(sit, stand), std::max(sit, stand)};
  const auto pg = gb.confusion.most_confused_pair(), pm = mr.confusion.most_confused_pair();
  report("4", "sitting/standing is the most confused pair in both precomputed runs",
         {pg == want && pm == want, "gbdt " + std::string(dataset::activity_name(pg.first)) + "/" +
                                        std::string(dataset::activity_name(pg.second)) + ", minirocket " +
                                        std::string(dataset::activity_name(pm.first)) + "/" +
                                        std::string(dataset::activity_name(pm.second))});

  const double tg = gb.train_time_s.mean * static_cast<double>(gb.results.size());
  const double tm = mr.train_time_s.mean * static_cast<double>(mr.results.size());
  report("5", "GBDT trains faster than MiniRocket on precomputed features",
         {tg < tm, "total fit time gbdt " + fmt("%.1f s", tg) + ", minirocket " + fmt("%.1f s", tm)});

  double best = 0;
  for (const auto& row : reference::kLiterature) {
    if (row.baseline) best = std::max(best, row.accuracy);
  }
  report("6", "both models exceed the best literature baseline accuracy",
         {gb.accuracy.mean > best && mr.accuracy.mean > best, "gbdt " + fmt("%.4f", gb.accuracy.mean) +
                                                                   ", minirocket " + fmt("%.4f", mr.accuracy.mean) +
                                                                   fmt(", best baseline %.3f", best)});

  report("8", "recomputed tBodyAcc features correlate >= 0.99 with shipped columns", feature_agreement(bundle));
}

}  // namespace

int main(int argc, char** argv) {
  select_blas_core(argv);
  CLI::App app{"harbench acceptance suite"};
  bool properties = false;
  std::string root;
  std::size_t iterations = 10;
  std::string work;
  app.add_flag("--properties", properties, "Run the dataset-independent property checks");
  auto* data = app.add_option("--dataset", root, "UCI HAR root; run the dataset criteria");
  app.add_option("--iterations", iterations, "Monte Carlo iterations per dataset run")->check(CLI::PositiveNumber);
  app.add_option("--work", work, "Keep each run's report.json under this directory");
  CLI11_PARSE(app, argc, argv);

  const char* env = std::getenv("HARBENCH_DATA");
  const bool want_dataset = data->count() > 0 || !properties;
  if (!data->count() && env) root = env;

  if (properties) run_properties();
  if (want_dataset) {
    if (root.empty()) {
      fail_dataset("no dataset: pass --dataset <root> or set HARBENCH_DATA");
    } else if (!fs::is_directory(root)) {
      fail_dataset("dataset not found at " + root);
    } else {
      run_dataset(root, iterations, work);
    }
  }
  std::cout << (g_failures == 0 ? "all selected criteria passed" : std::to_string(g_failures) + " criteria failed")
            << std::endl;
  if (g_failures == 0) return 0;
  // Only the missing recordings failed: report "not run" instead of a defect.
  const int property_failures = g_failures - (g_no_data ? 7 : 0);
  return g_no_data && property_failures == 0 ? kNoData : 1;
}
