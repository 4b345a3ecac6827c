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
#include "hovi/integrators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "hovi/error.hpp"

namespace hovi {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

double inf_norm(const Vec& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

Vec row(const Mat& m, int i) { return m.row(i).transpose(); }

struct NewtonOutcome {
  int iterations = 0;
  double residual = 0.0;
};

// Newton with the stopping rule shared by both schemes: the residual must
// be below tol and the last correction negligible, so the returned stages
// sit at roundoff level rather than merely at tol.
template <class Residual, class Jacobian>
NewtonOutcome newton(Vec& x, const Residual& residual, const Jacobian& jacobian, double tol,
                     int max_iter) {
  double last_update = std::numeric_limits<double>::infinity();
  double r = 0.0;
  for (int it = 0; it <= max_iter; ++it) {
    const Vec R = residual(x);
    r = inf_norm(R);
    if (!std::isfinite(r)) break;
    const double scale = 1.0 + inf_norm(x);
    if (r <= 1e-15 * scale || (r <= tol && last_update <= 1e-10 * scale)) return {it, r};
    if (it == max_iter) break;
    Eigen::PartialPivLU<Mat> lu(jacobian(x));
    if (!(lu.rcond() > 1e-14)) {
      throw Error(ErrorKind::SingularJacobian, "stage Jacobian is singular", r);
    }
    const Vec dx = lu.solve(R);
    x -= dx;
    last_update = inf_norm(dx);
    if (r <= tol && last_update <= 4e-16 * scale) return {it + 1, r};
  }
  if (r <= tol) return {max_iter, r};
  throw Error(ErrorKind::NoConvergence, "stage equations did not converge", r);
}

}  // namespace

SchemeKind parse_scheme_kind(std::string_view name) {
  const std::string key = lower(name);
  if (key == "sprk") return SchemeKind::Sprk;
  if (key == "sg") return SchemeKind::Sg;
  throw Error(ErrorKind::InvalidArgument, "unknown scheme '" + std::string(name) + "'");
}

std::string_view scheme_kind_name(SchemeKind kind) {
  return kind == SchemeKind::Sprk ? "sprk" : "sg";
}

FieldEval MechanicalField::evaluate(const Vec& q, const Vec& p, const Vec& u) const {
  RhsEval e = rhs_.evaluate(q, p, u);
  return {std::move(e.f), std::move(e.g), std::move(e.f_q), std::move(e.f_p), std::move(e.g_q),
          std::move(e.g_p)};
}

Stepper::Stepper(const PartitionedField& field, StepperConfig config)
    : field_(&field), config_(std::move(config)) {
  if (!(config_.tol > 0.0) || config_.max_iter < 1) {
    throw Error(ErrorKind::InvalidArgument, "stepper needs tol > 0 and max_iter >= 1");
  }
  const CollocationScheme& sc = config_.scheme;
  b_ = sc.b;
  if (config_.kind == SchemeKind::Sprk) {
    SprkCoefficients co = sprk_coefficients(sc);
    a_ = std::move(co.a);
    a_bar_ = std::move(co.a_bar);
  } else {
    SgCoefficients co = sg_coefficients(sc);
    a_ = std::move(co.a);
    a_bar_ = std::move(co.a_bar);
    alpha_ = std::move(co.alpha);
    beta_ = std::move(co.beta);
  }
  Vec shifted = sc.c.array() + 1.0;
  if (config_.kind == SchemeKind::Sg) {
    // one extra row: the stage polynomial at the end of the next step
    shifted.conservativeResize(sc.s + 1);
    shifted[sc.s] = 2.0;
  }
  extrapolate_ = interpolation_matrix(sc.c, shifted);
}

StepResult Stepper::step(const Vec& q0, const Vec& p0, const Mat& W, double h,
                         const StepResult* previous) const {
  const int n = field_->dim();
  if (q0.size() != n || p0.size() != n || W.rows() != config_.scheme.s) {
    throw Error(ErrorKind::DimensionMismatch, "step inputs do not match the field");
  }
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "step size must be positive");
  if (config_.predictor != Predictor::Extrapolation) previous = nullptr;
  return config_.kind == SchemeKind::Sprk ? step_sprk(q0, p0, W, h, previous)
                                          : step_sg(q0, p0, W, h, previous);
}

StepResult Stepper::step_sprk(const Vec& q0, const Vec& p0, const Mat& W, double h,
                              const StepResult* previous) const {
  const int n = field_->dim();
  const int s = config_.scheme.s;
  const int sn = s * n;

  Vec x(2 * sn);
  for (int i = 0; i < s; ++i) {
    x.segment(i * n, n) = q0;
    x.segment(sn + i * n, n) = p0;
  }
  if (previous) {
    const Mat Qg = extrapolate_.topRows(s) * previous->stages.Q;
    const Mat Pg = extrapolate_.topRows(s) * previous->stages.P;
    for (int i = 0; i < s; ++i) {
      x.segment(i * n, n) = row(Qg, i);
      x.segment(sn + i * n, n) = row(Pg, i);
    }
  }

  std::vector<FieldEval> ev(s);
  auto evaluate_all = [&](const Vec& z) {
    for (int i = 0; i < s; ++i) {
      ev[i] = field_->evaluate(z.segment(i * n, n), z.segment(sn + i * n, n), row(W, i));
    }
  };
  auto residual = [&](const Vec& z) {
    evaluate_all(z);
    Vec R(2 * sn);
    for (int i = 0; i < s; ++i) {
      Vec rq = z.segment(i * n, n) - q0;
      Vec rp = z.segment(sn + i * n, n) - p0;
      for (int j = 0; j < s; ++j) {
        rq -= h * a_(i, j) * ev[j].f;
        rp -= h * a_bar_(i, j) * ev[j].g;
      }
      R.segment(i * n, n) = rq;
      R.segment(sn + i * n, n) = rp;
    }
    return R;
  };
  // evaluate_all has already run for z inside residual
  auto jacobian = [&](const Vec&) {
    Mat J = Mat::Identity(2 * sn, 2 * sn);
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < s; ++j) {
        J.block(i * n, j * n, n, n) -= h * a_(i, j) * ev[j].f_q;
        J.block(i * n, sn + j * n, n, n) -= h * a_(i, j) * ev[j].f_p;
        J.block(sn + i * n, j * n, n, n) -= h * a_bar_(i, j) * ev[j].g_q;
        J.block(sn + i * n, sn + j * n, n, n) -= h * a_bar_(i, j) * ev[j].g_p;
      }
    }
    return J;
  };
  const NewtonOutcome out = newton(x, residual, jacobian, config_.tol, config_.max_iter);
  evaluate_all(x);

  StepResult res;
  res.iterations = out.iterations;
  res.residual = out.residual;
  StageBlock& st = res.stages;
  st.Q.resize(s, n);
  st.P.resize(s, n);
  st.Qdot.resize(s, n);
  st.Pdot.resize(s, n);
  st.U = W;
  res.q1 = q0;
  res.p1 = p0;
  for (int i = 0; i < s; ++i) {
    st.Q.row(i) = x.segment(i * n, n).transpose();
    st.P.row(i) = x.segment(sn + i * n, n).transpose();
    st.Qdot.row(i) = ev[i].f.transpose();
    st.Pdot.row(i) = ev[i].g.transpose();
    res.q1 += h * b_[i] * ev[i].f;
    res.p1 += h * b_[i] * ev[i].g;
  }
  return res;
}

StepResult Stepper::step_sg(const Vec& q0, const Vec& p0, const Mat& W, double h,
                            const StepResult* previous) const {
  const int n = field_->dim();
  const int s = config_.scheme.s;
  const int sn = s * n;

  // unknowns: Q_1..Q_s, P_1..P_s, p_1
  Vec x(2 * sn + n);
  for (int i = 0; i < s; ++i) {
    x.segment(i * n, n) = q0;
    x.segment(sn + i * n, n) = p0;
  }
  x.segment(2 * sn, n) = p0;
  if (previous) {
    const Mat Qg = extrapolate_.topRows(s) * previous->stages.Q;
    const Mat Pg = extrapolate_ * previous->stages.P;
    for (int i = 0; i < s; ++i) {
      x.segment(i * n, n) = row(Qg, i);
      x.segment(sn + i * n, n) = row(Pg, i);
    }
    x.segment(2 * sn, n) = row(Pg, s);
  }

  std::vector<FieldEval> ev(s);
  auto residual = [&](const Vec& z) {
    for (int i = 0; i < s; ++i) {
      ev[i] = field_->evaluate(z.segment(i * n, n), z.segment(sn + i * n, n), row(W, i));
    }
    const auto p1 = z.segment(2 * sn, n);
    Vec R(2 * sn + n);
    Vec r0 = -q0;
    for (int j = 0; j < s; ++j) r0 += alpha_[j] * z.segment(j * n, n);
    R.segment(2 * sn, n) = r0;
    for (int i = 0; i < s; ++i) {
      Vec rf = h * ev[i].f;
      Vec rg = h * b_[i] * ev[i].g - beta_[i] * p1 + alpha_[i] * p0;
      for (int j = 0; j < s; ++j) {
        rf -= a_(i, j) * z.segment(j * n, n);
        rg -= b_[i] * a_bar_(i, j) * z.segment(sn + j * n, n);
      }
      R.segment(i * n, n) = rf;
      R.segment(sn + i * n, n) = rg;
    }
    return R;
  };
  auto jacobian = [&](const Vec&) {
    const Mat I = Mat::Identity(n, n);
    Mat J = Mat::Zero(2 * sn + n, 2 * sn + n);
    for (int j = 0; j < s; ++j) J.block(2 * sn, j * n, n, n) = alpha_[j] * I;
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < s; ++j) {
        J.block(i * n, j * n, n, n) = -a_(i, j) * I;
        J.block(sn + i * n, sn + j * n, n, n) = -b_[i] * a_bar_(i, j) * I;
      }
      J.block(i * n, i * n, n, n) += h * ev[i].f_q;
      J.block(i * n, sn + i * n, n, n) += h * ev[i].f_p;
      J.block(sn + i * n, i * n, n, n) += h * b_[i] * ev[i].g_q;
      J.block(sn + i * n, sn + i * n, n, n) += h * b_[i] * ev[i].g_p;
      J.block(sn + i * n, 2 * sn, n, n) = -beta_[i] * I;
    }
    return J;
  };
  const NewtonOutcome out = newton(x, residual, jacobian, config_.tol, config_.max_iter);
  residual(x);

  StepResult res;
  res.iterations = out.iterations;
  res.residual = out.residual;
  StageBlock& st = res.stages;
  st.Q.resize(s, n);
  st.P.resize(s, n);
  st.Qdot.resize(s, n);
  st.Pdot.resize(s, n);
  st.U = W;
  res.q1 = Vec::Zero(n);
  for (int i = 0; i < s; ++i) {
    st.Q.row(i) = x.segment(i * n, n).transpose();
    st.P.row(i) = x.segment(sn + i * n, n).transpose();
    st.Qdot.row(i) = ev[i].f.transpose();
    st.Pdot.row(i) = ev[i].g.transpose();
    res.q1 += beta_[i] * x.segment(i * n, n);
  }
  res.p1 = x.segment(2 * sn, n);
  return res;
}

double Stepper::relation_residual(const Vec& q0, const Vec& p0, const Vec& q1, const Vec& p1,
                                  const Mat& Q, const Mat& P, const Mat& W, double h) const {
  const int s = config_.scheme.s;
  std::vector<FieldEval> ev(s);
  for (int i = 0; i < s; ++i) ev[i] = field_->evaluate(row(Q, i), row(P, i), row(W, i));
  double worst = 0.0;
  if (config_.kind == SchemeKind::Sprk) {
    Vec rq1 = q1 - q0;
    Vec rp1 = p1 - p0;
    for (int i = 0; i < s; ++i) {
      Vec rq = row(Q, i) - q0;
      Vec rp = row(P, i) - p0;
      for (int j = 0; j < s; ++j) {
        rq -= h * a_(i, j) * ev[j].f;
        rp -= h * a_bar_(i, j) * ev[j].g;
      }
      worst = std::max({worst, inf_norm(rq), inf_norm(rp)});
      rq1 -= h * b_[i] * ev[i].f;
      rp1 -= h * b_[i] * ev[i].g;
    }
    return std::max({worst, inf_norm(rq1), inf_norm(rp1)});
  }
  Vec r0 = -q0;
  Vec r1 = -q1;
  for (int j = 0; j < s; ++j) {
    r0 += alpha_[j] * row(Q, j);
    r1 += beta_[j] * row(Q, j);
  }
  worst = std::max(inf_norm(r0), inf_norm(r1));
  for (int i = 0; i < s; ++i) {
    Vec rf = ev[i].f;
    Vec rg = ev[i].g - (beta_[i] * p1 - alpha_[i] * p0) / (h * b_[i]);
    for (int j = 0; j < s; ++j) {
      rf -= a_(i, j) * row(Q, j) / h;
      rg -= a_bar_(i, j) * row(P, j) / h;
    }
    worst = std::max({worst, inf_norm(rf), inf_norm(rg)});
  }
  return worst;
}

StepResult sprk_step(const MechanicalSystem& system, const StepperConfig& config, const Vec& q0,
                     const Vec& p0, const Mat& U_stage, double h) {
  MechanicalField field(system);
  StepperConfig cfg = config;
  cfg.kind = SchemeKind::Sprk;
  return Stepper(field, cfg).step(q0, p0, U_stage, h);
}

StepResult sg_step(const MechanicalSystem& system, const StepperConfig& config, const Vec& q0,
                   const Vec& p0, const Mat& U_stage, double h) {
  MechanicalField field(system);
  StepperConfig cfg = config;
  cfg.kind = SchemeKind::Sg;
  return Stepper(field, cfg).step(q0, p0, U_stage, h);
}

DiscreteTrajectory integrate(const MechanicalSystem& system, const StepperConfig& config,
                             const Vec& q0, const Vec& p0, const ControlFn& control_fn, double T,
                             int N) {
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "integrate needs N >= 1");
  if (!(T > 0.0)) throw Error(ErrorKind::InvalidArgument, "integrate needs T > 0");
  MechanicalField field(system);
  const Stepper stepper(field, config);
  const int s = config.scheme.s;
  const int m = system.dim_u();

  DiscreteTrajectory traj;
  traj.h = T / N;
  traj.N = N;
  traj.t.resize(N + 1);
  traj.q.resize(N + 1);
  traj.p.resize(N + 1);
  traj.stages.resize(N);
  traj.q[0] = q0;
  traj.p[0] = p0;
  traj.t[0] = 0.0;

  StepResult last;
  for (int k = 0; k < N; ++k) {
    const double tk = k * traj.h;
    Mat W(s, m);
    for (int i = 0; i < s; ++i) {
      const Vec u = control_fn ? control_fn(tk + config.scheme.c[i] * traj.h) : Vec::Zero(m);
      if (u.size() != m) throw Error(ErrorKind::DimensionMismatch, "control has the wrong size");
      W.row(i) = u.transpose();
    }
    try {
      last = stepper.step(traj.q[k], traj.p[k], W, traj.h, k > 0 ? &last : nullptr);
    } catch (const Error& e) {
      throw Error(e.kind(), "step " + std::to_string(k) + ": " + e.what(), e.residual());
    }
    traj.q[k + 1] = last.q1;
    traj.p[k + 1] = last.p1;
    traj.stages[k] = last.stages;
    traj.t[k + 1] = (k + 1) * traj.h;
  }
  return traj;
}

double trajectory_residual(const MechanicalSystem& system, const StepperConfig& config,
                           const DiscreteTrajectory& trajectory) {
  MechanicalField field(system);
  const Stepper stepper(field, config);
  double worst = 0.0;
  for (int k = 0; k < trajectory.N; ++k) {
    const StageBlock& st = trajectory.stages[k];
    worst = std::max(worst, stepper.relation_residual(trajectory.q[k], trajectory.p[k],
                                                      trajectory.q[k + 1], trajectory.p[k + 1],
                                                      st.Q, st.P, st.U, trajectory.h));
  }
  return worst;
}

}  // namespace hovi
