/*
 Copyright 2026 The hovi Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include "hovi/error.hpp"

namespace hovi {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnsupportedStageCount: return "UnsupportedStageCount";
    case ErrorKind::ZeroWeight: return "ZeroWeight";
    case ErrorKind::DegenerateNodes: return "DegenerateNodes";
    case ErrorKind::SingularMass: return "SingularMass";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UnknownVariant: return "UnknownVariant";
    case ErrorKind::UnknownModel: return "UnknownModel";
    case ErrorKind::SingularKkt: return "SingularKkt";
    case ErrorKind::MaxIterations: return "MaxIterations";
    case ErrorKind::SchemeMismatch: return "SchemeMismatch";
    case ErrorKind::NonCoerciveVariant: return "NonCoerciveVariant";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UsageError: return "UsageError";
  }
  return "Unknown";
}

}  // namespace hovi
