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
#include "hovi/mechanics.hpp"

#include <cmath>

#include "hovi/error.hpp"

namespace hovi {

Vec legendre(const MechanicalSystem& system, const Vec& q, const Vec& v) {
  return system.dL_dv(q, v);
}

Vec inverse_legendre(const MechanicalSystem& system, const Vec& q, const Vec& p,
                     const InverseLegendreOptions& options) {
  if (options.use_closed_form) {
    if (auto v = system.velocity_closed_form(q, p)) return *std::move(v);
  }
  Vec v = p;  // exact for unit mass
  double residual = 0.0;
  for (int it = 0; it < options.max_iter; ++it) {
    const Vec r = system.dL_dv(q, v) - p;
    residual = r.lpNorm<Eigen::Infinity>();
    if (residual <= options.tol) return v;
    Eigen::PartialPivLU<Mat> lu(system.d2L_dv2(q, v));
    if (!(lu.rcond() > 1e-14)) {
      throw Error(ErrorKind::SingularMass, "velocity Hessian is singular");
    }
    v -= lu.solve(r);
  }
  const double final_residual = (system.dL_dv(q, v) - p).lpNorm<Eigen::Infinity>();
  if (final_residual <= options.tol) return v;
  throw Error(ErrorKind::NoConvergence, "inverse Legendre transform did not converge",
              final_residual);
}

Vec PartitionedRhs::f(const Vec& q, const Vec& p) const {
  return inverse_legendre(*system_, q, p, options_);
}

Vec PartitionedRhs::g(const Vec& q, const Vec& p, const Vec& u) const {
  const Vec v = f(q, p);
  return system_->dL_dq(q, v) + system_->force(q, v, u);
}

RhsEval PartitionedRhs::evaluate(const Vec& q, const Vec& p, const Vec& u) const {
  const MechanicalSystem& sys = *system_;
  RhsEval out;
  const Vec v = f(q, p);
  out.f = v;
  out.g = sys.dL_dq(q, v) + sys.force(q, v, u);

  Eigen::PartialPivLU<Mat> mass(sys.d2L_dv2(q, v));
  if (!(mass.rcond() > 1e-14)) throw Error(ErrorKind::SingularMass, "velocity Hessian is singular");
  const int n = sys.dim_q();
  out.f_p = mass.solve(Mat::Identity(n, n));
  out.f_q = -mass.solve(sys.d2L_dvdq(q, v));

  // d(dL/dq)/dv is the transpose of the mixed Hessian.
  const Mat g_v = sys.d2L_dvdq(q, v).transpose() + sys.force_dv(q, v, u);
  out.g_q = sys.d2L_dq2(q, v) + sys.force_dq(q, v, u) + g_v * out.f_q;
  out.g_p = g_v * out.f_p;
  out.g_u = sys.force_du(q, v);
  return out;
}

QuadraticCost::QuadraticCost(int dim_q, int dim_u, Weights weights, Vec q_target, Vec p_target)
    : dim_u_(dim_u),
      weights_(weights),
      q_target_(q_target.size() ? std::move(q_target) : Vec::Zero(dim_q)),
      p_target_(p_target.size() ? std::move(p_target) : Vec::Zero(dim_q)) {
  if (q_target_.size() != dim_q || p_target_.size() != dim_q) {
    throw Error(ErrorKind::DimensionMismatch, "terminal target has the wrong size");
  }
}

double QuadraticCost::running(const Vec& q, const Vec& p, const Vec& u) const {
  return weights_.wq * q.squaredNorm() + weights_.wp * p.squaredNorm() +
         weights_.wu * u.squaredNorm();
}

RunningGrad QuadraticCost::running_grad(const Vec& q, const Vec& p, const Vec& u) const {
  return {2.0 * weights_.wq * q, 2.0 * weights_.wp * p, 2.0 * weights_.wu * u};
}

Mat QuadraticCost::running_duu(const Vec&, const Vec&, const Vec&) const {
  return 2.0 * weights_.wu * Mat::Identity(dim_u_, dim_u_);
}

double QuadraticCost::terminal(const Vec& q, const Vec& p) const {
  return 0.5 * weights_.kq * (q - q_target_).squaredNorm() +
         0.5 * weights_.kp * (p - p_target_).squaredNorm();
}

TerminalGrad QuadraticCost::terminal_grad(const Vec& q, const Vec& p) const {
  return {weights_.kq * (q - q_target_), weights_.kp * (p - p_target_)};
}

}  // namespace hovi
