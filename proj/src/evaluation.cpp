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

#include "harbench/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "harbench/rng.hpp"
#include "json.hpp"

namespace harbench::evaluation {
namespace {

using nlohmann::json;
constexpr std::size_t K = dataset::kClassCount;

void check_lengths(std::size_t a, std::size_t b) {
  if (a == 0) throw Error(Errc::Empty, "no labels");
  if (a != b) throw Error(Errc::LengthMismatch, std::to_string(a) + " vs " + std::to_string(b) + " labels");
}

template <class T>
void shuffle_in_place(std::vector<T>& v, std::mt19937_64& eng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(eng, i));
    std::swap(v[i - 1], v[j]);
  }
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json mean_std_json(const MeanStd& m) { return {{"mean", m.mean}, {"std", m.std}}; }

}  // namespace

std::string_view strategy_name(SplitStrategy s) noexcept {
  switch (s) {
    case SplitStrategy::instance: return "instance";
    case SplitStrategy::stratified: return "stratified";
    case SplitStrategy::subject_disjoint: return "subject_disjoint";
  }
  return "instance";
}

SplitStrategy parse_strategy(std::string_view name) {
  for (auto s : {SplitStrategy::instance, SplitStrategy::stratified, SplitStrategy::subject_disjoint}) {
    if (strategy_name(s) == name) return s;
  }
  throw Error(Errc::InvalidArgument, "unknown split strategy '" + std::string(name) + "'");
}

SplitPlan make_plan(std::size_t iteration, std::size_t n_total, double train_fraction, std::uint64_t seed_base,
                    SplitStrategy strategy) {
  return {iteration, train_fraction, n_total, seed_base + iteration, strategy};
}

std::size_t train_size(std::size_t n, double fraction) {
  // The epsilon absorbs representation error such as 0.7 * 10 < 7.
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

Split split(const SplitPlan& plan) {
  if (!(plan.train_fraction > 0.0 && plan.train_fraction < 1.0)) {
    throw Error(Errc::InvalidArgument, "train_fraction must lie in (0, 1)");
  }
  const std::size_t n = plan.n_total;
  const std::size_t n_train = train_size(n, plan.train_fraction);
  if (n < 2 || n_train == 0 || n_train == n) {
    throw Error(Errc::DegenerateSplit, "split of " + std::to_string(n) + " instances leaves an empty side");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 eng(plan.seed);
  shuffle_in_place(perm, eng);
  Split s;
  s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  return s;
}

Split split(const SplitPlan& plan, std::span<const int> labels, std::span<const int> subjects) {
  if (plan.strategy == SplitStrategy::instance) return split(plan);
  if (!(plan.train_fraction > 0.0 && plan.train_fraction < 1.0)) {
    throw Error(Errc::InvalidArgument, "train_fraction must lie in (0, 1)");
  }
  const std::size_t n = plan.n_total;
  if (labels.size() != n || subjects.size() != n) throw Error(Errc::DimensionMismatch, "label/subject count differs");
  std::mt19937_64 eng(plan.seed);
  Split s;
  if (plan.strategy == SplitStrategy::stratified) {
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < n; ++i) by_class[labels[i]].push_back(i);
    for (auto& [label, idx] : by_class) {
      shuffle_in_place(idx, eng);
      const std::size_t k = train_size(idx.size(), plan.train_fraction);
      s.train.insert(s.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
      s.test.insert(s.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end());
    }
  } else {
    std::vector<int> ids(subjects.begin(), subjects.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    shuffle_in_place(ids, eng);
    const std::size_t k = train_size(ids.size(), plan.train_fraction);
    const std::set<int> train_ids(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k));
    for (std::size_t i = 0; i < n; ++i) (train_ids.count(subjects[i]) ? s.train : s.test).push_back(i);
  }
  if (s.train.empty() || s.test.empty()) {
    throw Error(Errc::DegenerateSplit, std::string(strategy_name(plan.strategy)) + " split leaves an empty side");
  }
  return s;
}

double accuracy(std::span<const int> y_true, std::span<const int> y_pred) {
  check_lengths(y_true.size(), y_pred.size());
  std::size_t hit = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) hit += y_true[i] == y_pred[i];
  return static_cast<double>(hit) / static_cast<double>(y_true.size());
}

double macro_f1(std::span<const int> y_true, std::span<const int> y_pred, int n_classes) {
  check_lengths(y_true.size(), y_pred.size());
  double sum = 0.0;
  for (int c = 1; c <= n_classes; ++c) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
      const bool t = y_true[i] == c, p = y_pred[i] == c;
      tp += t && p;
      fp += !t && p;
      fn += t && !p;
    }
    const double precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    const double recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    sum += precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  }
  return sum / static_cast<double>(n_classes);
}

double binary_auc(std::span<const double> positive, std::span<const double> negative) {
  if (positive.empty() || negative.empty()) throw Error(Errc::Empty, "AUC needs both positives and negatives");
  // Midranks over the pooled sample.
  std::vector<std::pair<double, bool>> pooled;
  pooled.reserve(positive.size() + negative.size());
  for (double v : positive) pooled.emplace_back(v, true);
  for (double v : negative) pooled.emplace_back(v, false);
  std::sort(pooled.begin(), pooled.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i;
    std::size_t pos = 0;
    while (j < pooled.size() && pooled[j].first == pooled[i].first) pos += pooled[j++].second;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    rank_sum += midrank * static_cast<double>(pos);
    i = j;
  }
  const auto np = static_cast<double>(positive.size()), nn = static_cast<double>(negative.size());
  return (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double ovo_auc(std::span<const int> y_true, const MatrixD& scores) {
  check_lengths(y_true.size(), scores.rows());
  const std::size_t k = scores.cols();
  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] < 1 || static_cast<std::size_t>(y_true[i]) > k) {
      throw Error(Errc::BadLabel, "label " + std::to_string(y_true[i]) + " has no score column");
    }
    members[static_cast<std::size_t>(y_true[i] - 1)].push_back(i);
  }
  auto column = [&](std::size_t cls, std::size_t col) {
    std::vector<double> v;
    for (auto i : members[cls]) v.push_back(scores(i, col));
    return v;
  };
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      if (members[a].empty() || members[b].empty()) continue;
      const double ab = binary_auc(column(a, a), column(b, a));
      const double ba = binary_auc(column(b, b), column(a, b));
      total += (ab + ba) / 2.0;
      ++pairs;
    }
  }
  if (pairs == 0) throw Error(Errc::SingleClass, "OvO AUC needs at least two classes present");
  return total / static_cast<double>(pairs);
}

void ConfusionMatrix::add(int truth, int predicted) {
  if (truth < 1 || truth > static_cast<int>(K) || predicted < 1 || predicted > static_cast<int>(K)) {
    throw Error(Errc::BadLabel, "confusion entry outside 1..6");
  }
  ++counts[static_cast<std::size_t>(truth - 1)][static_cast<std::size_t>(predicted - 1)];
}

void ConfusionMatrix::add(std::span<const int> y_true, std::span<const int> y_pred) {
  check_lengths(y_true.size(), y_pred.size());
  for (std::size_t i = 0; i < y_true.size(); ++i) add(y_true[i], y_pred[i]);
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (const auto& r : counts) t = std::accumulate(r.begin(), r.end(), t);
  return t;
}

std::uint64_t ConfusionMatrix::diagonal() const {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < K; ++i) t += counts[i][i];
  return t;
}

std::array<std::array<double, K>, K> ConfusionMatrix::percent() const {
  std::array<std::array<double, K>, K> p{};
  const auto t = static_cast<double>(total());
  if (t == 0) return p;
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = 0; j < K; ++j) p[i][j] = static_cast<double>(counts[i][j]) / t * 100.0;
  }
  return p;
}

std::pair<int, int> ConfusionMatrix::most_confused_pair() const {
  std::pair<int, int> best{1, 2};
  std::uint64_t best_count = 0;
  for (std::size_t a = 0; a < K; ++a) {
    for (std::size_t b = a + 1; b < K; ++b) {
      const std::uint64_t c = counts[a][b] + counts[b][a];
      if (c > best_count) {
        best_count = c;
        best = {static_cast<int>(a + 1), static_cast<int>(b + 1)};
      }
    }
  }
  return best;
}

std::string_view model_name(ModelKind m) noexcept { return m == ModelKind::gbdt ? "gbdt" : "minirocket"; }

ModelKind parse_model(std::string_view name) {
  if (name == "gbdt" || name == "xgboost") return ModelKind::gbdt;
  if (name == "minirocket") return ModelKind::minirocket;
  throw Error(Errc::InvalidArgument, "unknown model '" + std::string(name) + "' (expected gbdt or minirocket)");
}

std::string InputSpec::tag() const { return precomputed ? "precomputed" : "channel:" + channel; }

InputSpec InputSpec::parse(std::string_view text) {
  InputSpec s;
  if (text == "precomputed") return s;
  constexpr std::string_view prefix = "channel:";
  if (text.substr(0, prefix.size()) != prefix) {
    throw Error(Errc::InvalidArgument, "input must be 'precomputed' or 'channel:<name>', got '" + std::string(text) + "'");
  }
  s.precomputed = false;
  s.channel = std::string(text.substr(prefix.size()));
  dataset::channel_index(s.channel);  // validates
  return s;
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd m;
  if (values.empty()) return m;
  for (double v : values) m.mean += v;
  m.mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.std = std::sqrt(ss / static_cast<double>(values.size()));
  return m;
}

void EvalReport::aggregate() {
  auto collect = [&](double IterationResult::*field) {
    std::vector<double> v;
    for (const auto& r : results) v.push_back(r.*field);
    return mean_std(v);
  };
  accuracy = collect(&IterationResult::accuracy);
  macro_f1 = collect(&IterationResult::macro_f1);
  ovo_auc = collect(&IterationResult::ovo_auc);
  train_time_s = collect(&IterationResult::train_time_s);
  predict_time_s = collect(&IterationResult::predict_time_s);
}

std::string model_config_json(const ModelSpec& model) {
  json j;
  j["model"] = std::string(model_name(model.kind));
  if (model.kind == ModelKind::gbdt) {
    const auto& c = model.gbdt;
    j["rounds"] = c.rounds;
    j["max_depth"] = c.max_depth;
    j["eta"] = c.eta;
    j["lambda_l2"] = c.lambda_l2;
    j["alpha_l1"] = c.alpha_l1;
    j["gamma"] = c.gamma;
    j["min_child_weight"] = c.min_child_weight;
    j["n_bins"] = c.n_bins;
  } else {
    j["target_features"] = model.target_features;
    j["lambdas"] = model.lambdas;
  }
  return j.dump();
}

EvalReport run_mccv(const dataset::DatasetBundle& bundle, const ModelSpec& model, const InputSpec& input,
                    const McOptions& options) {
  if (model.kind == ModelKind::gbdt && !input.precomputed) {
    throw Error(Errc::IncompatibleInput, "gbdt runs on the precomputed feature matrix only, not " + input.tag());
  }
  if (options.iterations == 0) throw Error(Errc::InvalidArgument, "iterations must be at least 1");
  if (!(options.train_fraction > 0.0 && options.train_fraction < 1.0)) {
    throw Error(Errc::InvalidArgument, "train_fraction must lie in (0, 1)");
  }
  if (model.kind == ModelKind::gbdt) model.gbdt.validate();
  const MatrixD x = input.precomputed ? bundle.features.values : dataset::select_channel(bundle, input.channel);
  const std::size_t n = bundle.size();

  EvalReport report;
  report.model = std::string(model_name(model.kind));
  report.input = input.tag();
  report.options = options;
  report.n_total = n;
  report.model_config = model_config_json(model);

  for (std::size_t it = 0; it < options.iterations; ++it) {
    const SplitPlan plan = make_plan(it, n, options.train_fraction, options.seed_base, options.strategy);
    const Split s = split(plan, bundle.labels, bundle.subjects);
    const MatrixD x_train = x.select_rows(s.train), x_test = x.select_rows(s.test);
    std::vector<int> y_train, y_test;
    for (auto i : s.train) y_train.push_back(bundle.labels[i]);
    for (auto i : s.test) y_test.push_back(bundle.labels[i]);

    IterationResult r;
    r.iteration = it;
    r.seed = plan.seed;
    r.n_train = s.train.size();
    r.n_test = s.test.size();
    std::vector<int> pred;
    // Scores keyed by activity code; classes unseen in training rank lowest.
    MatrixD scores(s.test.size(), K, std::numeric_limits<double>::lowest());
    auto place = [&](const MatrixD& raw, const std::vector<int>& classes) {
      for (std::size_t i = 0; i < raw.rows(); ++i) {
        for (std::size_t c = 0; c < classes.size(); ++c) scores(i, static_cast<std::size_t>(classes[c] - 1)) = raw(i, c);
      }
    };

    if (model.kind == ModelKind::gbdt) {
      gbdt::TrainConfig cfg = model.gbdt;
      cfg.seed = plan.seed;
      const auto t0 = std::chrono::steady_clock::now();
      const auto fitted = gbdt::train(x_train, y_train, cfg);
      r.train_time_s = seconds_since(t0);
      const auto t1 = std::chrono::steady_clock::now();
      const MatrixD proba = gbdt::predict_proba(fitted, x_test);
      pred = gbdt::predict_labels(fitted, proba);
      r.predict_time_s = seconds_since(t1);
      place(proba, fitted.classes);
    } else {
      minirocket::FitOptions opt;
      opt.target_features = model.target_features;
      opt.seed = plan.seed;
      opt.lambdas = model.lambdas;
      const auto t0 = std::chrono::steady_clock::now();
      const auto fitted = minirocket::fit(x_train, y_train, opt);
      r.train_time_s = seconds_since(t0);
      const auto t1 = std::chrono::steady_clock::now();
      const auto p = minirocket::predict(fitted, x_test);
      r.predict_time_s = seconds_since(t1);
      pred = p.labels;
      place(p.scores, fitted.classes());
    }
    r.accuracy = accuracy(y_test, pred);
    r.macro_f1 = macro_f1(y_test, pred, static_cast<int>(K));
    r.ovo_auc = ovo_auc(y_test, scores);
    report.confusion.add(y_test, pred);
    report.results.push_back(r);
  }
  report.aggregate();
  return report;
}

std::string report_to_json(const EvalReport& report) {
  json results = json::array();
  for (const auto& r : report.results) {
    results.push_back({{"iteration", r.iteration},
                       {"seed", r.seed},
                       {"n_train", r.n_train},
                       {"n_test", r.n_test},
                       {"accuracy", r.accuracy},
                       {"macro_f1", r.macro_f1},
                       {"ovo_auc", r.ovo_auc},
                       {"train_time_s", r.train_time_s},
                       {"predict_time_s", r.predict_time_s}});
  }
  json counts = json::array();
  for (const auto& row : report.confusion.counts) counts.push_back(row);
  std::vector<std::string> names(dataset::kActivityNames.begin(), dataset::kActivityNames.end());
  const json doc = {
      {"format", "harbench.report"},
      {"schema_version", kReportSchemaVersion},
      {"version", std::string(kVersion)},
      {"model", report.model},
      {"input", report.input},
      {"iterations", report.options.iterations},
      {"train_fraction", report.options.train_fraction},
      {"seed_base", report.options.seed_base},
      {"split_strategy", std::string(strategy_name(report.options.strategy))},
      {"n_total", report.n_total},
      {"model_config", json::parse(report.model_config.empty() ? "{}" : report.model_config)},
      {"results", results},
      {"aggregate",
       {{"accuracy", mean_std_json(report.accuracy)},
        {"macro_f1", mean_std_json(report.macro_f1)},
        {"ovo_auc", mean_std_json(report.ovo_auc)},
        {"train_time_s", mean_std_json(report.train_time_s)},
        {"predict_time_s", mean_std_json(report.predict_time_s)}}},
      {"confusion", {{"labels", names}, {"counts", counts}}},
  };
  return doc.dump(2);
}

EvalReport report_from_json(std::string_view text) {
  EvalReport r;
  try {
    const json doc = json::parse(text);
    if (doc.value("format", "") != "harbench.report") throw Error(Errc::InvalidArgument, "not a harbench report");
    const int schema = doc.at("schema_version");
    if (schema != kReportSchemaVersion) {
      throw Error(Errc::SchemaVersionMismatch, "report schema " + std::to_string(schema) + ", expected " +
                                                   std::to_string(kReportSchemaVersion));
    }
    r.model = doc.at("model");
    r.input = doc.at("input");
    r.options.iterations = doc.at("iterations");
    r.options.train_fraction = doc.at("train_fraction");
    r.options.seed_base = doc.at("seed_base");
    r.options.strategy = parse_strategy(doc.at("split_strategy").get<std::string>());
    r.n_total = doc.at("n_total");
    r.model_config = doc.at("model_config").dump();
    for (const auto& j : doc.at("results")) {
      IterationResult it;
      it.iteration = j.at("iteration");
      it.seed = j.at("seed");
      it.n_train = j.at("n_train");
      it.n_test = j.at("n_test");
      it.accuracy = j.at("accuracy");
      it.macro_f1 = j.at("macro_f1");
      it.ovo_auc = j.at("ovo_auc");
      it.train_time_s = j.at("train_time_s");
      it.predict_time_s = j.at("predict_time_s");
      r.results.push_back(it);
    }
    const auto& counts = doc.at("confusion").at("counts");
    for (std::size_t i = 0; i < K; ++i) {
      for (std::size_t j = 0; j < K; ++j) r.confusion.counts[i][j] = counts.at(i).at(j);
    }
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("malformed report: ") + e.what());
  }
  r.aggregate();
  return r;
}

std::string report_to_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "row,seed,Accuracy,F1,AUC,Training Time (sec),Predict Time (sec)\n";
  for (const auto& r : report.results) {
    out << r.iteration << ',' << r.seed << ',' << fmt("%.6f", r.accuracy) << ',' << fmt("%.6f", r.macro_f1) << ','
        << fmt("%.6f", r.ovo_auc) << ',' << fmt("%.3f", r.train_time_s) << ',' << fmt("%.3f", r.predict_time_s)
        << '\n';
  }
  auto pm = [](const MeanStd& m, const char* spec) { return fmt(spec, m.mean) + " ± " + fmt(spec, m.std); };
  out << "mean ± std,," << pm(report.accuracy, "%.4f") << ',' << pm(report.macro_f1, "%.4f") << ','
      << pm(report.ovo_auc, "%.4f") << ',' << pm(report.train_time_s, "%.1f") << ','
      << pm(report.predict_time_s, "%.1f") << '\n';
  return out.str();
}

std::string confusion_to_csv(const ConfusionMatrix& confusion) {
  const auto p = confusion.percent();
  std::ostringstream out;
  out << "true\\predicted";
  for (auto name : dataset::kActivityNames) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < K; ++i) {
    out << dataset::kActivityNames[i];
    for (std::size_t j = 0; j < K; ++j) out << ',' << fmt("%.10f", p[i][j]);
    out << '\n';
  }
  return out.str();
}

std::string confusion_to_text(const ConfusionMatrix& confusion) {
  static constexpr char kShade[] = " .:-=+*#%@";
  const auto p = confusion.percent();
  double peak = 0.0;
  for (const auto& r : p) peak = std::max(peak, *std::max_element(r.begin(), r.end()));
  auto pad = [](std::string_view s, std::size_t w) {
    std::string out(s.substr(0, w));
    return std::string(w - out.size(), ' ') + out;
  };
  std::ostringstream out;
  // Column headers are abbreviated; rows carry the full activity names.
  static constexpr std::string_view kShort[] = {"WALK", "UPSTAIRS", "DOWNSTAIRS", "SITTING", "STANDING", "LAYING"};
  out << "percent of all test instances (rows: true, columns: predicted)\n" << std::string(20, ' ');
  for (auto name : kShort) out << pad(name, 11);
  out << '\n';
  for (std::size_t i = 0; i < K; ++i) {
    std::string name(dataset::kActivityNames[i]);
    name.resize(20, ' ');
    out << name;
    for (std::size_t j = 0; j < K; ++j) {
      const auto level = peak > 0 ? static_cast<std::size_t>(std::ceil(p[i][j] / peak * 9.0)) : 0;
      out << pad(fmt("%.2f", p[i][j]) + kShade[std::min<std::size_t>(level, 9)], 11);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace harbench::evaluation
