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
#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hovi {

enum class ErrorKind {
  UnsupportedStageCount,
  ZeroWeight,
  DegenerateNodes,
  SingularMass,
  NoConvergence,
  SingularJacobian,
  DegenerateFit,
  DimensionMismatch,
  UnknownVariant,
  UnknownModel,
  SingularKkt,
  MaxIterations,
  SchemeMismatch,
  NonCoerciveVariant,
  InvalidArgument,
  UsageError,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        double residual = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        residual_(residual) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Final residual for iterative failures, NaN otherwise.
  double residual() const noexcept { return residual_; }

 private:
  ErrorKind kind_;
  double residual_;
};

}  // namespace hovi
