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

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace harbench {

inline constexpr std::string_view kVersion = "0.3.0";

/// Every failure the library reports carries one of these codes. The CLI maps
/// them onto exit-code categories (see category()).
enum class Errc {
  // data defects
  MissingFile,
  RowCountMismatch,
  NonFiniteValue,
  BadLabel,
  MissingReport,
  SchemaVersionMismatch,
  // validation / usage
  UnknownChannel,
  IncompatibleInput,
  InvalidConfig,
  InvalidArgument,
  // numerical / compute
  BadWindow,
  SeriesTooShort,
  LengthMismatch,
  BadLength,
  ZeroVariance,
  ZeroVector,
  InputTooShort,
  EmptyTrainingSet,
  SingleClass,
  DegenerateFeatures,
  EmptyData,
  NonFiniteLabelOrFeature,
  DimensionMismatch,
  DegenerateSplit,
  Empty,
  Io,
};

enum class ErrorCategory { validation, data, compute };

constexpr ErrorCategory category(Errc code) noexcept {
  switch (code) {
    case Errc::MissingFile:
    case Errc::RowCountMismatch:
    case Errc::NonFiniteValue:
    case Errc::BadLabel:
    case Errc::MissingReport:
    case Errc::SchemaVersionMismatch:
      return ErrorCategory::data;
    case Errc::UnknownChannel:
    case Errc::IncompatibleInput:
    case Errc::InvalidConfig:
    case Errc::InvalidArgument:
      return ErrorCategory::validation;
    default:
      return ErrorCategory::compute;
  }
}

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Dense row-major matrix. Rows are exposed as spans.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }
  const std::vector<T>& storage() const noexcept { return data_; }

  /// Copies the listed rows, in the listed order.
  Matrix select_rows(std::span<const std::size_t> idx) const {
    Matrix out(idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      auto src = row(idx[i]);
      std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using MatrixD = Matrix<double>;
using MatrixF = Matrix<float>;

}  // namespace harbench
