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
#include <span>
#include <vector>

#include "harbench/core.hpp"

namespace harbench::ridge {

/// 10 geometric points from 1e-3 to 1e3.
std::vector<double> default_lambda_grid();

struct RidgeOptions {
  std::vector<double> lambdas = default_lambda_grid();
};

/// One-vs-rest ridge regression on +/-1 targets over standardized inputs.
struct RidgeHead {
  std::vector<int> classes;        ///< sorted training labels
  std::size_t input_dim = 0;       ///< columns of the raw feature matrix
  std::vector<std::size_t> kept;   ///< columns with non-zero training variance
  std::vector<double> mean;        ///< per kept column
  std::vector<double> scale;       ///< per kept column (population std)
  MatrixD weights;                 ///< kept.size() x classes.size(), standardized space
  std::vector<double> intercept;   ///< per class
  double lambda = 0;
  std::vector<double> lambdas;     ///< grid searched
  std::vector<double> loo_errors;  ///< mean squared leave-one-out error per grid point
};

/// Closed form fit. lambda is chosen by exact leave-one-out error from one
/// eigendecomposition (of the Gram matrix when n <= d, of the covariance
/// otherwise). Throws SingleClass, EmptyTrainingSet, DegenerateFeatures
/// (every column constant).
RidgeHead fit_ridge(const MatrixF& features, std::span<const int> labels, const RidgeOptions& options = {});

/// Raw decision values, n x classes.size().
MatrixD decision_function(const RidgeHead& head, const MatrixF& features);

/// Highest score wins; ties go to the lower class index.
std::vector<int> predict_labels(const RidgeHead& head, const MatrixD& scores);

}  // namespace harbench::ridge
