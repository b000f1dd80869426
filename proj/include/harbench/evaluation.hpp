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
#include "harbench/dataset.hpp"
#include "harbench/gbdt.hpp"
#include "harbench/minirocket.hpp"

namespace harbench::evaluation {

inline constexpr int kReportSchemaVersion = 1;

// ---------------------------------------------------------------- splitting

enum class SplitStrategy { instance, stratified, subject_disjoint };

std::string_view strategy_name(SplitStrategy s) noexcept;
/// Throws InvalidArgument.
SplitStrategy parse_strategy(std::string_view name);

struct SplitPlan {
  std::size_t iteration = 0;
  double train_fraction = 0.7;
  std::size_t n_total = 0;
  std::uint64_t seed = 0;
  SplitStrategy strategy = SplitStrategy::instance;
};

/// seed = seed_base + iteration.
SplitPlan make_plan(std::size_t iteration, std::size_t n_total, double train_fraction = 0.7,
                    std::uint64_t seed_base = 0, SplitStrategy strategy = SplitStrategy::instance);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Number of training rows for n instances: floor(fraction * n).
std::size_t train_size(std::size_t n, double fraction);

/// Fisher-Yates over 0..n-1 (mt19937_64 seeded with plan.seed); the first
/// train_size() indices train. Throws DegenerateSplit.
Split split(const SplitPlan& plan);

/// Strategy-aware split. `stratified` shuffles each class separately and
/// takes floor(fraction * n_c) of each; `subject_disjoint` shuffles the
/// subject ids and trains on the first floor(fraction * S) subjects.
/// Throws DegenerateSplit, DimensionMismatch.
Split split(const SplitPlan& plan, std::span<const int> labels, std::span<const int> subjects);

// ------------------------------------------------------------------ metrics

/// Throws Empty, LengthMismatch.
double accuracy(std::span<const int> y_true, std::span<const int> y_pred);

/// Unweighted mean over labels 1..n_classes of per-class F1; a class with no
/// true or no predicted instances contributes 0. Throws Empty, LengthMismatch.
double macro_f1(std::span<const int> y_true, std::span<const int> y_pred, int n_classes = 6);

/// One-vs-one AUC. Column c of `scores` scores label c + 1. For each pair
/// of labels (a, b) present in y_true, AUC(a|b) ranks a against b on
/// column a, AUC(b|a) ranks b against a on column b; ties count one half.
/// Returns the mean over pairs of the two directed values.
/// Throws SingleClass, LengthMismatch, Empty.
double ovo_auc(std::span<const int> y_true, const MatrixD& scores);

/// Mann-Whitney AUC of positives over negatives (ties count one half).
double binary_auc(std::span<const double> positive, std::span<const double> negative);

struct ConfusionMatrix {
  std::array<std::array<std::uint64_t, dataset::kClassCount>, dataset::kClassCount> counts{};

  /// Labels are activity codes 1..6. Throws BadLabel.
  void add(int truth, int predicted);
  void add(std::span<const int> y_true, std::span<const int> y_pred);
  std::uint64_t total() const;
  std::uint64_t diagonal() const;
  /// counts / total * 100 (all zero when empty).
  std::array<std::array<double, dataset::kClassCount>, dataset::kClassCount> percent() const;
  /// Largest off-diagonal cell of the symmetrized matrix: the class pair
  /// most often confused in either direction (codes, a < b).
  std::pair<int, int> most_confused_pair() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// --------------------------------------------------------------- experiment

enum class ModelKind { gbdt, minirocket };

std::string_view model_name(ModelKind m) noexcept;
/// Throws InvalidArgument.
ModelKind parse_model(std::string_view name);

/// Either the precomputed feature matrix or one raw inertial channel.
struct InputSpec {
  bool precomputed = true;
  std::string channel;

  /// "precomputed" or "channel:<name>".
  std::string tag() const;
  /// Throws InvalidArgument, UnknownChannel.
  static InputSpec parse(std::string_view text);
};

struct ModelSpec {
  ModelKind kind = ModelKind::gbdt;
  gbdt::TrainConfig gbdt;
  std::size_t target_features = minirocket::kDefaultFeatures;
  std::vector<double> lambdas = ridge::default_lambda_grid();
};

struct McOptions {
  std::size_t iterations = 10;
  double train_fraction = 0.7;
  std::uint64_t seed_base = 0;
  SplitStrategy strategy = SplitStrategy::instance;
};

struct IterationResult {
  std::size_t iteration = 0;
  std::uint64_t seed = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  double accuracy = 0;
  double macro_f1 = 0;
  double ovo_auc = 0;
  double train_time_s = 0;
  double predict_time_s = 0;
};

struct MeanStd {
  double mean = 0;
  double std = 0;  ///< population standard deviation
};

MeanStd mean_std(std::span<const double> values);

struct EvalReport {
  std::string model;
  std::string input;
  McOptions options;
  std::size_t n_total = 0;
  std::vector<IterationResult> results;
  MeanStd accuracy, macro_f1, ovo_auc, train_time_s, predict_time_s;
  ConfusionMatrix confusion;
  std::string model_config;  ///< JSON text of the model settings

  /// Recomputes the aggregates from `results`.
  void aggregate();
};

/// Throws IncompatibleInput (gbdt needs the precomputed matrix),
/// UnknownChannel, InvalidArgument, plus whatever the models raise.
EvalReport run_mccv(const dataset::DatasetBundle& bundle, const ModelSpec& model, const InputSpec& input,
                    const McOptions& options = {});

/// Full JSON document, timings included.
std::string report_to_json(const EvalReport& report);
/// Throws SchemaVersionMismatch, InvalidArgument.
EvalReport report_from_json(std::string_view text);
/// One row per iteration plus an aggregate "mean ± std" row.
std::string report_to_csv(const EvalReport& report);
/// 6x6 percent matrix with activity-name headers.
std::string confusion_to_csv(const ConfusionMatrix& confusion);
/// Text heatmap of the percent matrix.
std::string confusion_to_text(const ConfusionMatrix& confusion);

std::string model_config_json(const ModelSpec& model);

}  // namespace harbench::evaluation
