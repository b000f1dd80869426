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

// Published reference results, kept read-only for comparison columns in
// generated reports. NaN marks a value that was not reported.

#include <array>
#include <limits>
#include <string_view>

namespace harbench::reference {

inline constexpr double kNotReported = std::numeric_limits<double>::quiet_NaN();

/// Monte Carlo results per model and input (mean and std over iterations).
struct MeasuredRow {
  std::string_view model;
  std::string_view input;  ///< "precomputed" or "channel:<name>"
  double accuracy, accuracy_std;
  double f1, f1_std;
  double auc, auc_std;
  double train_time_s;
};

inline constexpr std::array<MeasuredRow, 11> kMonteCarlo{{
    {"gbdt", "precomputed", 0.9896, 0.0022, 0.9896, 0.0022, 0.9999, 0.0000, 26.9},
    {"minirocket", "precomputed", 0.9881, 0.0031, 0.9886, 0.0029, 0.9932, 0.0018, 80.1},
    {"minirocket", "channel:total_acc_x", 0.9040, 0.0050, 0.9088, 0.0051, 0.9454, 0.0030, 73.6},
    {"minirocket", "channel:total_acc_y", 0.9350, 0.0054, 0.9388, 0.0051, 0.9633, 0.0031, 73.8},
    {"minirocket", "channel:total_acc_z", 0.8721, 0.0039, 0.8801, 0.0036, 0.9282, 0.0022, 73.8},
    {"minirocket", "channel:body_gyro_x", 0.8184, 0.0073, 0.8249, 0.0073, 0.8951, 0.0043, 74.1},
    {"minirocket", "channel:body_gyro_y", 0.7940, 0.0052, 0.8065, 0.0049, 0.8844, 0.0029, 74.0},
    {"minirocket", "channel:body_gyro_z", 0.8046, 0.0056, 0.8157, 0.0058, 0.8902, 0.0033, 74.5},
    {"minirocket", "channel:body_acc_x", 0.8111, 0.0089, 0.8232, 0.0086, 0.8945, 0.0051, 73.1},
    {"minirocket", "channel:body_acc_y", 0.7791, 0.0057, 0.7922, 0.0055, 0.8765, 0.0033, 73.1},
    {"minirocket", "channel:body_acc_z", 0.7399, 0.0072, 0.7565, 0.0069, 0.8550, 0.0040, 73.0},
}};

/// Looks up a row by model and input tag; nullptr when absent.
constexpr const MeasuredRow* find_monte_carlo(std::string_view model, std::string_view input) {
  for (const auto& r : kMonteCarlo) {
    if (r.model == model && r.input == input) return &r;
  }
  return nullptr;
}

/// Literature comparison on the same dataset. The first two rows are the
/// gbdt and minirocket results of the benchmark itself; the rest are
/// external baselines.
struct LiteratureRow {
  std::string_view method;
  double accuracy;
  double f1;
  double auc;
  bool baseline = true;
};

inline constexpr std::array<LiteratureRow, 11> kLiterature{{
    {"XGBoost", 0.990, 0.990, 0.999, false},
    {"Minirocket", 0.988, 0.989, 0.993, false},
    {"SGD", 0.446, 0.427, 0.664},
    {"Naive Bayes", 0.736, 0.747, 0.734},
    {"Decision Tree", 0.748, 0.746, 0.850},
    {"kNN", 0.707, 0.706, 0.895},
    {"Random Forest", 0.818, 0.818, 0.966},
    {"Neural Network", 0.856, 0.857, 0.974},
    {"SVM", 0.878, 0.872, 0.988},
    {"LSTM", 0.900, kNotReported, kNotReported},
    {"CNN", 0.975, kNotReported, kNotReported},
}};

}  // namespace harbench::reference
