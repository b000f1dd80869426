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
#include <vector>

#include "harbench/core.hpp"

namespace harbench::gbdt {

enum class SplitMethod { histogram, exact };

struct TrainConfig {
  int rounds = 100;
  int max_depth = 6;
  double eta = 0.3;
  double lambda_l2 = 1.0;
  double alpha_l1 = 0.0;
  double gamma = 0.0;
  double min_child_weight = 1.0;
  int n_bins = 256;
  std::uint64_t seed = 0;  ///< recorded only; training draws no random numbers
  SplitMethod split_method = SplitMethod::histogram;

  /// Throws InvalidConfig.
  void validate() const;
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// Leaf when feature < 0. Rows with x < threshold go left; missing (NaN)
/// values follow default_left.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  bool default_left = true;
  int left = -1;
  int right = -1;
  double weight = 0.0;
  double gain = 0.0;

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct Tree {
  std::vector<TreeNode> nodes;  ///< nodes[0] is the root

  double predict(std::span<const double> x) const;
  int depth() const;
  friend bool operator==(const Tree&, const Tree&) = default;
};

struct GbdtEnsemble {
  std::vector<int> classes;
  std::vector<double> base_score;  ///< per class: log prior
  TrainConfig config;
  std::size_t n_features = 0;
  std::vector<Tree> trees;  ///< round-major: trees[round * K + class]
  std::vector<double> importance;

  std::size_t rounds() const { return classes.empty() ? 0 : trees.size() / classes.size(); }
  friend bool operator==(const GbdtEnsemble&, const GbdtEnsemble&) = default;
};

/// sign(g) * max(|g| - alpha, 0)
double soft_threshold(double g, double alpha);
/// -T(G) / (H + lambda) * eta
double leaf_weight(double g, double h, double lambda, double alpha, double eta);
/// 1/2 [T(GL)^2/(HL+l) + T(GR)^2/(HR+l) - T(GL+GR)^2/(HL+HR+l)] - gamma
double split_gain(double gl, double hl, double gr, double hr, double lambda, double alpha, double gamma);

/// Numerically stable softmax of one row of margins.
void softmax(std::span<const double> margins, std::span<double> out);
/// -log softmax(margins)[label]
double softmax_loss(std::span<const double> margins, std::size_t label);
/// Mean multiclass log-loss of labels under the model's probabilities.
double log_loss(const MatrixD& proba, std::span<const int> labels, std::span<const int> classes);

/// NaN marks a missing value. Throws SingleClass, EmptyData,
/// NonFiniteLabelOrFeature, DimensionMismatch, InvalidConfig.
GbdtEnsemble train(const MatrixD& features, std::span<const int> labels, const TrainConfig& config = {});

/// n x K raw scores. Throws DimensionMismatch.
MatrixD predict_margin(const GbdtEnsemble& model, const MatrixD& features);
/// n x K softmax probabilities. Throws DimensionMismatch.
MatrixD predict_proba(const GbdtEnsemble& model, const MatrixD& features);
/// Most probable class; ties go to the lower class index.
std::vector<int> predict_labels(const GbdtEnsemble& model, const MatrixD& proba);

/// Total split gain per feature.
std::vector<double> feature_importance(const GbdtEnsemble& model);

std::string to_json(const GbdtEnsemble& model);
/// Throws InvalidArgument on malformed documents.
GbdtEnsemble model_from_json(std::string_view text);

}  // namespace harbench::gbdt
