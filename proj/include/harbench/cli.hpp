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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "harbench/core.hpp"
#include "harbench/evaluation.hpp"

namespace harbench::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kDataDefect = 2, kComputeFailure = 3 };

int exit_code(ErrorCategory category) noexcept;

/// Flat experiment description. File values are overridden by flags.
struct ExperimentConfig {
  std::filesystem::path dataset_root;
  evaluation::ModelSpec model;
  evaluation::InputSpec input;
  evaluation::McOptions mc;
  std::filesystem::path output_dir = "harbench-run";
  std::size_t threads = 0;  ///< 0 keeps the library default

  /// Accepts a flat config object or a run manifest (its "config" member).
  /// Unknown keys and wrongly typed values throw InvalidConfig.
  static ExperimentConfig from_json(std::string_view text);
  /// Applies the keys present in `text` on top of *this.
  void merge_json(std::string_view text);
  std::string to_json() const;
  /// Throws IncompatibleInput, InvalidConfig, InvalidArgument.
  void validate() const;
};

/// Keys accepted in a config file.
const std::vector<std::string>& config_keys();

int cmd_verify(const std::filesystem::path& root, std::ostream& out, std::ostream& err);
int cmd_run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_report(const std::vector<std::filesystem::path>& run_dirs, const std::optional<std::filesystem::path>& out_dir,
               std::ostream& out, std::ostream& err);
int cmd_features_compute(const std::filesystem::path& root, const std::filesystem::path& csv, std::ostream& out,
                         std::ostream& err);

/// Markdown comparison of measured runs against the literature rows.
std::string comparison_markdown(const std::vector<evaluation::EvalReport>& runs,
                                const std::vector<std::string>& labels);
std::string comparison_csv(const std::vector<evaluation::EvalReport>& runs, const std::vector<std::string>& labels);

/// Parses argv and dispatches. Never throws.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace harbench::cli
