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

#include <functional>
#include <string_view>
#include <vector>

#include "hovi/mechanics.hpp"
#include "hovi/quadrature.hpp"

namespace hovi {

enum class SchemeKind { Sprk, Sg };

/// Accepts "sprk" and "sg" (case-insensitive).
SchemeKind parse_scheme_kind(std::string_view name);
std::string_view scheme_kind_name(SchemeKind kind);

/// Values and Jacobians of a partitioned vector field at one stage.
struct FieldEval {
  Vec f, g;
  Mat f_q, f_p, g_q, g_p;
};

/// q' = f(q, p, w), p' = g(q, p, w) with a per-stage parameter w.
///
/// For mechanical systems w is the stage control. Other fields (the
/// adjoint system along a frozen primal trajectory) pack their data in w.
class PartitionedField {
 public:
  virtual ~PartitionedField() = default;
  virtual int dim() const = 0;
  virtual FieldEval evaluate(const Vec& q, const Vec& p, const Vec& w) const = 0;
};

class MechanicalField final : public PartitionedField {
 public:
  explicit MechanicalField(const MechanicalSystem& system) : rhs_(system) {}
  int dim() const override { return rhs_.dim_q(); }
  FieldEval evaluate(const Vec& q, const Vec& p, const Vec& u) const override;

 private:
  PartitionedRhs rhs_;
};

enum class Predictor { Constant, Extrapolation };

struct StepperConfig {
  SchemeKind kind = SchemeKind::Sg;
  CollocationScheme scheme;
  double tol = 1e-12;
  int max_iter = 50;
  Predictor predictor = Predictor::Constant;
};

/// Stage data of one step; row i belongs to stage i.
struct StageBlock {
  Mat Q, P, Qdot, Pdot, U;
};

struct StepResult {
  Vec q1, p1;
  StageBlock stages;
  int iterations = 0;
  double residual = 0.0;
};

/// One-step map of either scheme over a generic partitioned field.
///
/// Stage equations are solved by Newton with analytic Jacobians. The
/// residuals are scaled by h (and b_i for the Galerkin momentum rows) so
/// that every row is O(1) in the unknowns.
class Stepper {
 public:
  Stepper(const PartitionedField& field, StepperConfig config);

  const StepperConfig& config() const { return config_; }

  /// W holds one stage parameter per row. previous enables the
  /// extrapolation predictor when given.
  StepResult step(const Vec& q0, const Vec& p0, const Mat& W, double h,
                  const StepResult* previous = nullptr) const;

  /// Infinity norm of the scheme relations for given macro and stage
  /// values, in the unscaled form of the method.
  double relation_residual(const Vec& q0, const Vec& p0, const Vec& q1, const Vec& p1,
                           const Mat& Q, const Mat& P, const Mat& W, double h) const;

 private:
  StepResult step_sprk(const Vec& q0, const Vec& p0, const Mat& W, double h,
                       const StepResult* previous) const;
  StepResult step_sg(const Vec& q0, const Vec& p0, const Mat& W, double h,
                     const StepResult* previous) const;

  const PartitionedField* field_;
  StepperConfig config_;
  Mat a_, a_bar_;
  Vec b_, alpha_, beta_;
  Mat extrapolate_;  // stage values of the previous step mapped to this one
};

StepResult sprk_step(const MechanicalSystem& system, const StepperConfig& config, const Vec& q0,
                     const Vec& p0, const Mat& U_stage, double h);
StepResult sg_step(const MechanicalSystem& system, const StepperConfig& config, const Vec& q0,
                   const Vec& p0, const Mat& U_stage, double h);

struct DiscreteTrajectory {
  double h = 0.0;
  int N = 0;
  std::vector<double> t;  ///< t_k = k h, k = 0..N
  std::vector<Vec> q, p;  ///< macro states, k = 0..N
  std::vector<StageBlock> stages;  ///< k = 0..N-1
};

using ControlFn = std::function<Vec(double)>;

/// N steps of size T/N with stage controls control_fn(t_k + c_i h).
/// Step failures are rethrown with the failing step index.
DiscreteTrajectory integrate(const MechanicalSystem& system, const StepperConfig& config,
                             const Vec& q0, const Vec& p0, const ControlFn& control_fn, double T,
                             int N);

/// Largest relation residual over all steps of a trajectory.
double trajectory_residual(const MechanicalSystem& system, const StepperConfig& config,
                           const DiscreteTrajectory& trajectory);

}  // namespace hovi
