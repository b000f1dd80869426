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

#include "harbench/core.hpp"

namespace harbench {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::MissingFile: return "MissingFile";
    case Errc::RowCountMismatch: return "RowCountMismatch";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::BadLabel: return "BadLabel";
    case Errc::MissingReport: return "MissingReport";
    case Errc::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case Errc::UnknownChannel: return "UnknownChannel";
    case Errc::IncompatibleInput: return "IncompatibleInput";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::BadWindow: return "BadWindow";
    case Errc::SeriesTooShort: return "SeriesTooShort";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::BadLength: return "BadLength";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::InputTooShort: return "InputTooShort";
    case Errc::EmptyTrainingSet: return "EmptyTrainingSet";
    case Errc::SingleClass: return "SingleClass";
    case Errc::DegenerateFeatures: return "DegenerateFeatures";
    case Errc::EmptyData: return "EmptyData";
    case Errc::NonFiniteLabelOrFeature: return "NonFiniteLabelOrFeature";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DegenerateSplit: return "DegenerateSplit";
    case Errc::Empty: return "Empty";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

}  // namespace harbench
