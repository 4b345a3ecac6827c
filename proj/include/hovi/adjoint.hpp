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

#include "hovi/integrators.hpp"
#include "hovi/kkt.hpp"
#include "hovi/parallel.hpp"
#include "hovi/transcription.hpp"

namespace hovi {

/// Multipliers of the sG transcription mapped to adjoint variables:
/// Gamma = Lambda / b, chi = Psi / b, psi_k from the stage interpolation.
struct TransformedMultipliers {
  std::vector<Mat> Gamma, chi;  ///< s x n per step
  std::vector<Vec> lambda;      ///< k = 0..N
  std::vector<Vec> psi;         ///< k = 0..N; psi_minus for k < N, psi_plus at N
  std::vector<Vec> psi_minus;   ///< sum_i alpha^i chi_i^k, k = 0..N-1
  std::vector<Vec> psi_plus;    ///< sum_i beta^i chi_i^{k-1} at index k, k = 1..N
  double matching_residual = 0.0;  ///< max_k |psi_minus_k - psi_plus_k|, k = 1..N-1
};

/// Throws ZeroWeight unless every weight is positive.
TransformedMultipliers transform(const KktSolution& kkt, const CollocationScheme& scheme);

/// Multipliers in the KKT naming, recovered from a transformed set.
struct RawMultipliers {
  std::vector<Vec> lambda, mu;
  Vec psi0;
  std::vector<Mat> Lambda, Psi;
};

RawMultipliers inverse_transform(const TransformedMultipliers& adjoint,
                                 const CollocationScheme& scheme);

/// Stage control solving grad_u C + chi . grad_u g = 0. Closed form for
/// costs quadratic in u, Newton (tolerance tol) otherwise.
Vec feedback_control(const MechanicalSystem& system, const CostPair& cost, const Vec& q,
                     const Vec& p, const Vec& chi, double tol = 1e-12);

/// The adjoint vector field along a frozen primal stage: psi plays the
/// position role and lambda the momentum role. The stage parameter packs
/// [Q_i, P_i, U_i].
class AdjointField final : public PartitionedField {
 public:
  AdjointField(const MechanicalSystem& system, const CostPair& cost)
      : system_(&system), cost_(&cost), rhs_(system) {}
  int dim() const override { return system_->dim_q(); }
  /// f = eta (the psi rate), g = nu (the lambda rate).
  FieldEval evaluate(const Vec& psi, const Vec& lambda, const Vec& w) const override;

  static Vec pack(const Vec& q, const Vec& p, const Vec& u);

 private:
  const MechanicalSystem* system_;
  const CostPair* cost_;
  PartitionedRhs rhs_;
};

/// Infinity norm of the discrete adjoint system: the two psi interpolation
/// relations, the lambda and psi stage equations, control stationarity and
/// the terminal conditions. Needs r = t = s.
double adjoint_residual(const OcpDefinition& ocp, const DiscreteTrajectory& primal,
                        const TransformedMultipliers& adjoint);

/// The same adjoint variables checked as one sG step per interval of the
/// adjoint field.
double adjoint_scheme_residual(const OcpDefinition& ocp, const DiscreteTrajectory& primal,
                               const TransformedMultipliers& adjoint);

struct BvpOptions {
  double tol = 1e-10;
  int max_iter = 30;
  double fd_step = 1e-6;
  Exec exec = Exec::Serial;
};

struct BvpSolution {
  DiscreteTrajectory trajectory;
  std::vector<Vec> lambda, psi;  ///< k = 0..N
  std::vector<Mat> Gamma, chi;   ///< s x n per step
  int iterations = 0;
  double residual = 0.0;
};

/// sG discretization of the coupled state-adjoint boundary value problem
/// with the control eliminated by feedback_control, solved all at once by
/// Newton with a finite-difference Jacobian.
BvpSolution solve_state_adjoint_bvp(const OcpDefinition& ocp, const BvpOptions& options = {});

struct CommutationReport {
  int N = 0;
  double adjoint_residual = 0.0;  ///< of the transformed KKT multipliers
  double matching_residual = 0.0;
  double primal_deviation = 0.0;
  double dual_deviation = 0.0;
  double max_deviation = 0.0;
  double feedback_deviation = 0.0;
  double round_trip = 0.0;  ///< inverse_transform(transform(.)) against the raw multipliers
  double scale = 0.0;
  double gate = 0.0;
  bool pass = false;
};

/// Solves the KKT branch and the state-adjoint branch and compares them.
/// Rejects spRK with SchemeMismatch, variants with fewer cost points than
/// control nodes with NonCoerciveVariant, and r != s or t != s with
/// InvalidArgument.
CommutationReport commutation_check(const OcpDefinition& ocp, const KktOptions& kkt_options = {},
                                    const BvpOptions& bvp_options = {});

}  // namespace hovi
