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

#include <string>
#include <string_view>
#include <vector>

#include "hovi/kkt.hpp"
#include "hovi/parallel.hpp"
#include "hovi/transcription.hpp"

namespace hovi {

/// Closed-form optimum of min int (qdot^2 + u^2) s.t. qddot = 1 + u,
/// q(0) = qdot(0) = 0, together with its costate (lambda = 0, psi = -2u).
struct HagerExact {
  double T = 1.0;
  double q(double t) const;
  double p(double t) const;
  double u(double t) const;
  double lambda(double t) const;
  double psi(double t) const;
};

HagerExact hager_exact(double T);

/// Control/cost discretization id "c<r>t<t>" with r in {2,3}, t in {1..4}.
struct HagerVariant {
  std::string id;
  int r = 3;
  int t = 3;
  /// Every stage control carries weight in the discrete cost.
  bool coercive() const { return t >= r; }
};

/// Throws UnknownVariant.
HagerVariant parse_hager_variant(std::string_view id);
std::vector<std::string> hager_variant_ids();

/// Discrete running cost of one step on the three-stage Lobatto grid.
/// qdot holds the three stage velocities and u the r control-node values
/// (r = 3: U_1..U_3; r = 2: the end-point values of the linear control).
double hager_cost_variant(std::string_view id, const Vec& qdot, const Vec& u, double h);

/// The Hager problem discretized by sG or spRK with the given variant.
OcpDefinition hager_problem(const HagerVariant& variant, double T, int N,
                            SchemeKind kind = SchemeKind::Sg,
                            Family family = Family::GaussLobatto, int s = 3);

enum class CaseStatus { Ok, Singular, Diverged, Failed };
std::string_view to_string(CaseStatus status);

struct HagerCase {
  int N = 0;
  CaseStatus status = CaseStatus::Failed;
  double q_error = 0.0;  ///< max over macro nodes
  double p_error = 0.0;
  double u_error = 0.0;  ///< max over stage controls
  double max_abs_control = 0.0;
  int iterations = 0;
  double residual = 0.0;
  std::string message;
};

/// Solves one case; solver failures are reported in the status.
HagerCase run_hager_case(const HagerVariant& variant, double T, int N,
                         const KktOptions& options = {});

/// Log-log slope of max|U| against N above which a sweep counts as
/// divergent even when every single control stays under the bound.
inline constexpr double kControlGrowthSlope = 0.5;

/// One case per N, in the order of N_list. When at least three cases
/// solve, max|U| increases strictly with N and its fitted slope exceeds
/// kControlGrowthSlope, those cases are marked Diverged.
std::vector<HagerCase> run_hager_experiment(const HagerVariant& variant, double T,
                                            const std::vector<int>& N_list,
                                            const KktOptions& options = {},
                                            Exec exec = Exec::Serial);

}  // namespace hovi
