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

#include <memory>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "hovi/integrators.hpp"
#include "hovi/mechanics.hpp"
#include "hovi/quadrature.hpp"

namespace hovi {

using SparseMat = Eigen::SparseMatrix<double>;

/// Continuous problem plus every discretization choice.
///
/// r is the number of control nodes per step and t the number of cost
/// quadrature points; 0 means "same as the stage count". When r (or t)
/// differs from s the auxiliary rule of the same family supplies the points.
struct OcpDefinition {
  std::shared_ptr<const MechanicalSystem> system;
  std::shared_ptr<const CostPair> cost;
  Vec q_init, p_init;
  double T = 1.0;
  int N = 1;
  SchemeKind kind = SchemeKind::Sg;
  CollocationScheme scheme;
  int r = 0;
  int t = 0;
  std::string variant;  ///< label only, e.g. "c3t3"

  int control_nodes() const { return r > 0 ? r : scheme.s; }
  int cost_points() const { return t > 0 ? t : scheme.s; }
};

/// Step-major index maps of the NLP.
///
/// Variables: for k = 0..N the macro block [q_k, p_k], followed for k < N by
/// the stage block [Q_1..Q_s, P_1..P_s, Ubar_1..Ubar_r] of step k.
/// Constraints: [q_0 - q^0, p_0 - p^0], then per step four groups of sizes
/// n, n, sn, sn. For sG these are the q_k relation, the q_{k+1} relation,
/// the f relations and the g relations; for spRK the q_{k+1} update, the
/// p_{k+1} update, the Q_i relations and the P_i relations.
struct NlpLayout {
  int n = 0, m = 0, s = 0, r = 0, N = 0;
  int num_vars = 0, num_cons = 0;

  int node_stride() const { return 2 * n + 2 * s * n + r * m; }
  int q(int k) const { return k * node_stride(); }
  int p(int k) const { return q(k) + n; }
  int Q(int k, int i) const { return q(k) + 2 * n + i * n; }
  int P(int k, int i) const { return q(k) + 2 * n + (s + i) * n; }
  int U(int k, int j) const { return q(k) + 2 * n + 2 * s * n + j * m; }

  int step_cons() const { return 2 * n + 2 * s * n; }
  int c_init_q() const { return 0; }
  int c_init_p() const { return n; }
  int c_first(int k) const { return 2 * n + k * step_cons(); }
  int c_second(int k) const { return c_first(k) + n; }
  int c_stage_q(int k, int i) const { return c_first(k) + 2 * n + i * n; }
  int c_stage_p(int k, int i) const { return c_first(k) + 2 * n + (s + i) * n; }
};

/// The discrete optimal control problem as an equality-constrained NLP.
///
/// The Lagrangian is L = J + sum_c sign_c y_c c(x). For sG the signs follow
/// the discrete optimal-control Lagrangian term by term (the initial
/// conditions and the q_{k+1} relation enter with a minus sign), so the raw
/// multipliers y are lambda_0, psi_0, mu_k, lambda_{k+1}, Lambda_i^k and
/// Psi_i^k directly. For spRK every sign is +1.
class Transcription {
 public:
  explicit Transcription(OcpDefinition definition);

  const OcpDefinition& definition() const { return def_; }
  const NlpLayout& layout() const { return layout_; }
  double h() const { return h_; }

  Vec constraints(const Vec& x) const;
  SparseMat constraint_jacobian(const Vec& x) const;
  double cost(const Vec& x) const;
  Vec cost_gradient(const Vec& x) const;
  const Vec& multiplier_signs() const { return signs_; }
  double lagrangian(const Vec& x, const Vec& y) const;
  Vec lagrangian_gradient(const Vec& x, const Vec& y) const;

  /// Stage controls U_i = Ucal(c_i h) of step k (s x m).
  Mat stage_controls(const Vec& x, int k) const;
  /// Control-node values of step k (r x m).
  Mat control_nodes(const Vec& x, int k) const;
  /// Primal trajectory with Qdot, Pdot evaluated at the stages.
  DiscreteTrajectory trajectory(const Vec& x) const;
  /// Packs a trajectory and control-node values into a variable vector.
  Vec pack(const DiscreteTrajectory& trajectory, const std::vector<Mat>& control_nodes) const;

  /// Cost points in [0,1], their weights, and the maps from stage values
  /// (and control-node values) to values at those points.
  const Vec& cost_nodes() const { return cost_nodes_; }
  const Vec& cost_weights() const { return cost_weights_; }
  const Vec& control_node_times() const { return ctrl_nodes_; }

 private:
  struct CostPoint {
    Vec q, p, u;
  };
  std::vector<CostPoint> cost_points(const Vec& x, int k) const;

  OcpDefinition def_;
  NlpLayout layout_;
  double h_ = 0.0;
  Vec signs_;
  Mat a_, a_bar_;
  Vec b_, alpha_, beta_;
  Vec ctrl_nodes_;
  Mat stage_from_ctrl_;  // s x r
  bool cost_at_stages_ = true;
  Vec cost_nodes_, cost_weights_;
  Mat cost_from_stage_;  // t x s
  Mat cost_from_ctrl_;   // t x r
  Mat cost_integral_;    // t x s, spRK only: integral of l^j up to the cost point
};

}  // namespace hovi
