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

#include <optional>
#include <string_view>

#include "hovi/quadrature.hpp"

namespace hovi {

/// A controlled Lagrangian system L(q, v) with force F(q, v, u) affine in u.
///
/// Derivatives are supplied analytically by each model. The mixed Hessian
/// convention is d2L_dvdq(i, j) = d^2 L / dv_i dq_j.
class MechanicalSystem {
 public:
  virtual ~MechanicalSystem() = default;

  virtual std::string_view id() const = 0;
  virtual int dim_q() const = 0;
  virtual int dim_u() const = 0;

  virtual double lagrangian(const Vec& q, const Vec& v) const = 0;
  virtual Vec dL_dq(const Vec& q, const Vec& v) const = 0;
  virtual Vec dL_dv(const Vec& q, const Vec& v) const = 0;
  virtual Mat d2L_dv2(const Vec& q, const Vec& v) const = 0;
  virtual Mat d2L_dvdq(const Vec& q, const Vec& v) const = 0;
  virtual Mat d2L_dq2(const Vec& q, const Vec& v) const = 0;

  virtual Vec force(const Vec& q, const Vec& v, const Vec& u) const = 0;
  virtual Mat force_dq(const Vec& q, const Vec& v, const Vec& u) const = 0;
  virtual Mat force_dv(const Vec& q, const Vec& v, const Vec& u) const = 0;
  /// The control matrix F1; independent of u by affinity.
  virtual Mat force_du(const Vec& q, const Vec& v) const = 0;

  /// Closed-form inverse Legendre transform, when the model has one.
  virtual std::optional<Vec> velocity_closed_form(const Vec& /*q*/, const Vec& /*p*/) const {
    return std::nullopt;
  }
};

struct InverseLegendreOptions {
  double tol = 1e-12;
  int max_iter = 50;
  bool use_closed_form = true;
};

/// p = dL/dv(q, v).
Vec legendre(const MechanicalSystem& system, const Vec& q, const Vec& v);

/// v with legendre(q, v) = p. Newton on the velocity Hessian unless the model
/// registers a closed form. Throws SingularMass or NoConvergence.
Vec inverse_legendre(const MechanicalSystem& system, const Vec& q, const Vec& p,
                     const InverseLegendreOptions& options = {});

/// f, g and their Jacobians at one point. Jacobian (i, j) = d out_i / d in_j.
struct RhsEval {
  Vec f, g;
  Mat f_q, f_p;
  Mat g_q, g_p, g_u;
};

/// The partitioned first-order form q' = f(q, p), p' = g(q, p, u).
class PartitionedRhs {
 public:
  explicit PartitionedRhs(const MechanicalSystem& system, InverseLegendreOptions options = {})
      : system_(&system), options_(options) {}

  const MechanicalSystem& system() const { return *system_; }
  int dim_q() const { return system_->dim_q(); }
  int dim_u() const { return system_->dim_u(); }

  Vec f(const Vec& q, const Vec& p) const;
  Vec g(const Vec& q, const Vec& p, const Vec& u) const;

  /// Values and all Jacobians. Velocity Jacobians come from implicit
  /// differentiation of dL/dv(q, f(q, p)) = p.
  RhsEval evaluate(const Vec& q, const Vec& p, const Vec& u) const;

 private:
  const MechanicalSystem* system_;
  InverseLegendreOptions options_;
};

inline PartitionedRhs rhs(const MechanicalSystem& system) { return PartitionedRhs(system); }

struct RunningGrad {
  Vec dq, dp, du;
};

struct TerminalGrad {
  Vec dq, dp;
};

/// Running cost C(q, p, u) and final cost Phi(q, p), both in momentum form.
class CostPair {
 public:
  virtual ~CostPair() = default;

  virtual double running(const Vec& q, const Vec& p, const Vec& u) const = 0;
  virtual RunningGrad running_grad(const Vec& q, const Vec& p, const Vec& u) const = 0;
  virtual Mat running_duu(const Vec& q, const Vec& p, const Vec& u) const = 0;
  /// True when C is exactly quadratic in u, so one Newton step solves
  /// the control stationarity condition.
  virtual bool quadratic_in_u() const { return false; }

  virtual double terminal(const Vec& q, const Vec& p) const = 0;
  virtual TerminalGrad terminal_grad(const Vec& q, const Vec& p) const = 0;
};

/// C = wq |q|^2 + wp |p|^2 + wu |u|^2,
/// Phi = kq/2 |q - q_target|^2 + kp/2 |p - p_target|^2.
class QuadraticCost final : public CostPair {
 public:
  struct Weights {
    double wq = 0.0;
    double wp = 1.0;
    double wu = 1.0;
    double kq = 0.0;
    double kp = 0.0;
  };

  QuadraticCost(int dim_q, int dim_u, Weights weights, Vec q_target = {}, Vec p_target = {});

  double running(const Vec& q, const Vec& p, const Vec& u) const override;
  RunningGrad running_grad(const Vec& q, const Vec& p, const Vec& u) const override;
  Mat running_duu(const Vec& q, const Vec& p, const Vec& u) const override;
  bool quadratic_in_u() const override { return true; }
  double terminal(const Vec& q, const Vec& p) const override;
  TerminalGrad terminal_grad(const Vec& q, const Vec& p) const override;

  const Weights& weights() const { return weights_; }

 private:
  int dim_u_;
  Weights weights_;
  Vec q_target_, p_target_;
};

}  // namespace hovi
