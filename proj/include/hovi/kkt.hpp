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

#include <vector>

#include "hovi/parallel.hpp"
#include "hovi/transcription.hpp"

namespace hovi {

enum class InitStrategy { Zeros, ForwardSim };

struct KktOptions {
  double tol = 1e-10;  ///< on the infinity norm of [grad L; c]
  int max_iter = 50;
  InitStrategy init = InitStrategy::ForwardSim;
  /// Below this reciprocal condition estimate the KKT matrix is singular.
  double rcond_min = 1e-13;
  /// Stage controls beyond this magnitude raise the divergence flag.
  double divergence_bound = 1e3;
  /// Relative step of the finite-difference Hessian of the Lagrangian.
  double hessian_step = 1e-5;
  Exec exec = Exec::Serial;
};

/// A stationary point of the discrete Lagrangian.
///
/// Multiplier names follow the sG constraint groups; for spRK the same
/// slots hold the multipliers of the corresponding spRK groups.
struct KktSolution {
  Vec x;  ///< primal variables, see NlpLayout
  Vec y;  ///< raw multipliers, one per constraint
  DiscreteTrajectory trajectory;
  std::vector<Mat> control_nodes;  ///< r x m per step
  std::vector<Vec> lambda;         ///< k = 0..N
  std::vector<Vec> mu;             ///< k = 0..N-1
  Vec psi0;
  std::vector<Mat> Lambda, Psi;  ///< s x n per step
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> residual_history;
  double rcond = 0.0;  ///< LU condition estimate or pivot ratio, whichever is smaller
  double max_abs_control = 0.0;
  bool diverged = false;
};

/// Damped Newton on the primal-dual system. Throws SingularKkt when the
/// KKT matrix is numerically rank deficient, MaxIterations when the
/// iteration cap is hit and NoConvergence when the line search stalls.
KktSolution solve_kkt(const Transcription& nlp, const KktOptions& options = {});

/// Splits raw multipliers into the named groups of KktSolution.
void unpack_multipliers(const Transcription& nlp, KktSolution& solution);

}  // namespace hovi
