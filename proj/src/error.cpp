// Copyright 2026 The offgrid Authors
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

#include "offgrid/error.hpp"

namespace offgrid {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ContractionEmpty: return "ContractionEmpty";
    case ErrorKind::InvalidNesting: return "InvalidNesting";
    case ErrorKind::DegenerateDraw: return "DegenerateDraw";
    case ErrorKind::NoZeroSet: return "NoZeroSet";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::UntracedCurve: return "UntracedCurve";
    case ErrorKind::InconsistentGradient: return "InconsistentGradient";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DCIndex: return "DCIndex";
    case ErrorKind::SvdFailure: return "SvdFailure";
    case ErrorKind::MissingDC: return "MissingDC";
    case ErrorKind::AdmissibleSelectionFailed: return "AdmissibleSelectionFailed";
    case ErrorKind::SeparationTooSmall: return "SeparationTooSmall";
    case ErrorKind::IllConditionedD: return "IllConditionedD";
    case ErrorKind::ZeroWeightVector: return "ZeroWeightVector";
    case ErrorKind::NoSpectralGap: return "NoSpectralGap";
    case ErrorKind::SharedFactorSuspected: return "SharedFactorSuspected";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace offgrid
