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
#include "hovi/transcription.hpp"

#include <utility>

#include "hovi/error.hpp"

namespace hovi {
namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void add_block(Triplets& out, int row0, int col0, const Mat& block) {
  for (int j = 0; j < block.cols(); ++j) {
    for (int i = 0; i < block.rows(); ++i) {
      if (block(i, j) != 0.0) out.emplace_back(row0 + i, col0 + j, block(i, j));
    }
  }
}

void add_identity(Triplets& out, int row0, int col0, int n, double value) {
  if (value == 0.0) return;
  for (int i = 0; i < n; ++i) out.emplace_back(row0 + i, col0 + i, value);
}

}  // namespace

Transcription::Transcription(OcpDefinition definition) : def_(std::move(definition)) {
  if (!def_.system || !def_.cost) {
    throw Error(ErrorKind::InvalidArgument, "problem needs a system and a cost");
  }
  if (!(def_.T > 0.0) || def_.N < 1) {
    throw Error(ErrorKind::InvalidArgument, "problem needs T > 0 and N >= 1");
  }
  if (def_.r < 0 || def_.t < 0) {
    throw Error(ErrorKind::InvalidArgument, "control and cost point counts must be positive");
  }
  const MechanicalSystem& sys = *def_.system;
  const CollocationScheme& sc = def_.scheme;
  NlpLayout& L = layout_;
  L.n = sys.dim_q();
  L.m = sys.dim_u();
  L.s = sc.s;
  L.r = def_.control_nodes();
  L.N = def_.N;
  if (sc.s < 1 || sc.c.size() != sc.s) {
    throw Error(ErrorKind::InvalidArgument, "problem needs a collocation scheme");
  }
  if (def_.q_init.size() != L.n || def_.p_init.size() != L.n) {
    throw Error(ErrorKind::DimensionMismatch, "initial state has the wrong size");
  }
  L.num_vars = L.N * L.node_stride() + 2 * L.n;
  L.num_cons = 2 * L.n + L.N * L.step_cons();
  h_ = def_.T / def_.N;

  b_ = sc.b;
  if (def_.kind == SchemeKind::Sg) {
    SgCoefficients co = sg_coefficients(sc);
    a_ = std::move(co.a);
    a_bar_ = std::move(co.a_bar);
    alpha_ = std::move(co.alpha);
    beta_ = std::move(co.beta);
  } else {
    SprkCoefficients co = sprk_coefficients(sc);
    a_ = std::move(co.a);
    a_bar_ = std::move(co.a_bar);
  }

  signs_ = Vec::Ones(L.num_cons);
  if (def_.kind == SchemeKind::Sg) {
    signs_.head(2 * L.n).setConstant(-1.0);
    for (int k = 0; k < L.N; ++k) signs_.segment(L.c_second(k), L.n).setConstant(-1.0);
  }

  if (L.r == L.s) {
    ctrl_nodes_ = sc.c;
    stage_from_ctrl_ = Mat::Identity(L.s, L.s);
  } else {
    ctrl_nodes_ = make_auxiliary_rule(sc.family, L.r).c;
    stage_from_ctrl_ = interpolation_matrix(ctrl_nodes_, sc.c);
  }

  const int t = def_.cost_points();
  cost_at_stages_ = (t == L.s);
  if (cost_at_stages_) {
    cost_nodes_ = sc.c;
    cost_weights_ = sc.b;
    cost_from_stage_ = Mat::Identity(L.s, L.s);
  } else {
    const CollocationScheme aux = make_auxiliary_rule(sc.family, t);
    cost_nodes_ = aux.c;
    cost_weights_ = aux.b;
    cost_from_stage_ = interpolation_matrix(sc.c, cost_nodes_);
    cost_integral_.resize(t, L.s);
    for (int l = 0; l < t; ++l) {
      for (int j = 0; j < L.s; ++j) cost_integral_(l, j) = lagrange_integral(sc.c, j, cost_nodes_[l]);
    }
  }
  cost_from_ctrl_ = interpolation_matrix(ctrl_nodes_, cost_nodes_);
}

Mat Transcription::control_nodes(const Vec& x, int k) const {
  const NlpLayout& L = layout_;
  Mat out(L.r, L.m);
  for (int j = 0; j < L.r; ++j) out.row(j) = x.segment(L.U(k, j), L.m).transpose();
  return out;
}

Mat Transcription::stage_controls(const Vec& x, int k) const {
  return stage_from_ctrl_ * control_nodes(x, k);
}

std::vector<Transcription::CostPoint> Transcription::cost_points(const Vec& x, int k) const {
  const NlpLayout& L = layout_;
  const int t = static_cast<int>(cost_nodes_.size());
  const Mat Ubar = control_nodes(x, k);
  std::vector<CostPoint> pts(t);
  if (cost_at_stages_) {
    const Mat U = stage_from_ctrl_ * Ubar;
    for (int i = 0; i < t; ++i) {
      pts[i].q = x.segment(L.Q(k, i), L.n);
      pts[i].p = x.segment(L.P(k, i), L.n);
      pts[i].u = U.row(i).transpose();
    }
    return pts;
  }
  const PartitionedRhs rhs(*def_.system);
  std::vector<Vec> f;
  if (def_.kind == SchemeKind::Sprk) {
    for (int j = 0; j < L.s; ++j) f.push_back(rhs.f(x.segment(L.Q(k, j), L.n), x.segment(L.P(k, j), L.n)));
  }
  for (int l = 0; l < t; ++l) {
    CostPoint& pt = pts[l];
    pt.p = Vec::Zero(L.n);
    pt.u = (cost_from_ctrl_.row(l) * Ubar).transpose();
    if (def_.kind == SchemeKind::Sg) {
      pt.q = Vec::Zero(L.n);
      for (int j = 0; j < L.s; ++j) pt.q += cost_from_stage_(l, j) * x.segment(L.Q(k, j), L.n);
    } else {
      pt.q = x.segment(L.q(k), L.n);
      for (int j = 0; j < L.s; ++j) pt.q += h_ * cost_integral_(l, j) * f[j];
    }
    for (int j = 0; j < L.s; ++j) pt.p += cost_from_stage_(l, j) * x.segment(L.P(k, j), L.n);
  }
  return pts;
}

double Transcription::cost(const Vec& x) const {
  if (x.size() != layout_.num_vars) throw Error(ErrorKind::DimensionMismatch, "variable vector size");
  const CostPair& C = *def_.cost;
  double J = 0.0;
  for (int k = 0; k < layout_.N; ++k) {
    const auto pts = cost_points(x, k);
    for (size_t l = 0; l < pts.size(); ++l) {
      J += h_ * cost_weights_[static_cast<int>(l)] * C.running(pts[l].q, pts[l].p, pts[l].u);
    }
  }
  const int N = layout_.N;
  return J + C.terminal(x.segment(layout_.q(N), layout_.n), x.segment(layout_.p(N), layout_.n));
}

Vec Transcription::cost_gradient(const Vec& x) const {
  if (x.size() != layout_.num_vars) throw Error(ErrorKind::DimensionMismatch, "variable vector size");
  const NlpLayout& L = layout_;
  const CostPair& C = *def_.cost;
  const PartitionedRhs rhs(*def_.system);
  Vec grad = Vec::Zero(L.num_vars);
  for (int k = 0; k < L.N; ++k) {
    const auto pts = cost_points(x, k);
    std::vector<RhsEval> ev;
    if (!cost_at_stages_ && def_.kind == SchemeKind::Sprk) {
      for (int j = 0; j < L.s; ++j) {
        ev.push_back(rhs.evaluate(x.segment(L.Q(k, j), L.n), x.segment(L.P(k, j), L.n),
                                  Vec::Zero(L.m)));
      }
    }
    for (int l = 0; l < static_cast<int>(pts.size()); ++l) {
      const RunningGrad gr = C.running_grad(pts[l].q, pts[l].p, pts[l].u);
      const double w = h_ * cost_weights_[l];
      for (int j = 0; j < L.r; ++j) grad.segment(L.U(k, j), L.m) += w * cost_from_ctrl_(l, j) * gr.du;
      if (cost_at_stages_) {
        grad.segment(L.Q(k, l), L.n) += w * gr.dq;
        grad.segment(L.P(k, l), L.n) += w * gr.dp;
        continue;
      }
      for (int j = 0; j < L.s; ++j) grad.segment(L.P(k, j), L.n) += w * cost_from_stage_(l, j) * gr.dp;
      if (def_.kind == SchemeKind::Sg) {
        for (int j = 0; j < L.s; ++j) grad.segment(L.Q(k, j), L.n) += w * cost_from_stage_(l, j) * gr.dq;
      } else {
        grad.segment(L.q(k), L.n) += w * gr.dq;
        for (int j = 0; j < L.s; ++j) {
          const double c = w * h_ * cost_integral_(l, j);
          grad.segment(L.Q(k, j), L.n) += c * ev[j].f_q.transpose() * gr.dq;
          grad.segment(L.P(k, j), L.n) += c * ev[j].f_p.transpose() * gr.dq;
        }
      }
    }
  }
  const int N = L.N;
  const TerminalGrad tg = C.terminal_grad(x.segment(L.q(N), L.n), x.segment(L.p(N), L.n));
  grad.segment(L.q(N), L.n) += tg.dq;
  grad.segment(L.p(N), L.n) += tg.dp;
  return grad;
}

Vec Transcription::constraints(const Vec& x) const {
  const NlpLayout& L = layout_;
  if (x.size() != L.num_vars) throw Error(ErrorKind::DimensionMismatch, "variable vector size");
  const PartitionedRhs rhs(*def_.system);
  const int n = L.n;
  const int s = L.s;
  Vec c(L.num_cons);
  c.segment(L.c_init_q(), n) = x.segment(L.q(0), n) - def_.q_init;
  c.segment(L.c_init_p(), n) = x.segment(L.p(0), n) - def_.p_init;
  for (int k = 0; k < L.N; ++k) {
    const Mat U = stage_controls(x, k);
    const auto qk = x.segment(L.q(k), n);
    const auto pk = x.segment(L.p(k), n);
    const auto qk1 = x.segment(L.q(k + 1), n);
    const auto pk1 = x.segment(L.p(k + 1), n);
    std::vector<Vec> f(s), g(s);
    for (int i = 0; i < s; ++i) {
      const Vec Qi = x.segment(L.Q(k, i), n);
      const Vec Pi = x.segment(L.P(k, i), n);
      f[i] = rhs.f(Qi, Pi);
      g[i] = rhs.g(Qi, Pi, U.row(i).transpose());
    }
    if (def_.kind == SchemeKind::Sg) {
      Vec c1 = qk;
      Vec c2 = qk1;
      for (int j = 0; j < s; ++j) {
        c1 -= alpha_[j] * x.segment(L.Q(k, j), n);
        c2 -= beta_[j] * x.segment(L.Q(k, j), n);
      }
      c.segment(L.c_first(k), n) = c1;
      c.segment(L.c_second(k), n) = c2;
      for (int i = 0; i < s; ++i) {
        Vec cf = h_ * f[i];
        Vec cg = h_ * g[i] - (beta_[i] * pk1 - alpha_[i] * pk) / b_[i];
        for (int j = 0; j < s; ++j) {
          cf -= a_(i, j) * x.segment(L.Q(k, j), n);
          cg -= a_bar_(i, j) * x.segment(L.P(k, j), n);
        }
        c.segment(L.c_stage_q(k, i), n) = cf;
        c.segment(L.c_stage_p(k, i), n) = cg;
      }
    } else {
      Vec c1 = qk1 - qk;
      Vec c2 = pk1 - pk;
      for (int j = 0; j < s; ++j) {
        c1 -= h_ * b_[j] * f[j];
        c2 -= h_ * b_[j] * g[j];
      }
      c.segment(L.c_first(k), n) = c1;
      c.segment(L.c_second(k), n) = c2;
      for (int i = 0; i < s; ++i) {
        Vec cq = x.segment(L.Q(k, i), n) - qk;
        Vec cp = x.segment(L.P(k, i), n) - pk;
        for (int j = 0; j < s; ++j) {
          cq -= h_ * a_(i, j) * f[j];
          cp -= h_ * a_bar_(i, j) * g[j];
        }
        c.segment(L.c_stage_q(k, i), n) = cq;
        c.segment(L.c_stage_p(k, i), n) = cp;
      }
    }
  }
  return c;
}

SparseMat Transcription::constraint_jacobian(const Vec& x) const {
  const NlpLayout& L = layout_;
  if (x.size() != L.num_vars) throw Error(ErrorKind::DimensionMismatch, "variable vector size");
  const PartitionedRhs rhs(*def_.system);
  const int n = L.n;
  const int s = L.s;
  Triplets T;
  add_identity(T, L.c_init_q(), L.q(0), n, 1.0);
  add_identity(T, L.c_init_p(), L.p(0), n, 1.0);
  for (int k = 0; k < L.N; ++k) {
    const Mat U = stage_controls(x, k);
    std::vector<RhsEval> ev(s);
    for (int i = 0; i < s; ++i) {
      ev[i] = rhs.evaluate(x.segment(L.Q(k, i), n), x.segment(L.P(k, i), n), U.row(i).transpose());
    }
    // d g_i / d Ubar_j through the stage-control interpolation
    auto add_control = [&](int row0, int i, double scale) {
      for (int j = 0; j < L.r; ++j) {
        const double w = scale * stage_from_ctrl_(i, j);
        if (w != 0.0) add_block(T, row0, L.U(k, j), w * ev[i].g_u);
      }
    };
    if (def_.kind == SchemeKind::Sg) {
      add_identity(T, L.c_first(k), L.q(k), n, 1.0);
      add_identity(T, L.c_second(k), L.q(k + 1), n, 1.0);
      for (int j = 0; j < s; ++j) {
        add_identity(T, L.c_first(k), L.Q(k, j), n, -alpha_[j]);
        add_identity(T, L.c_second(k), L.Q(k, j), n, -beta_[j]);
      }
      for (int i = 0; i < s; ++i) {
        const int rf = L.c_stage_q(k, i);
        const int rg = L.c_stage_p(k, i);
        for (int j = 0; j < s; ++j) {
          Mat dq = -a_(i, j) * Mat::Identity(n, n);
          Mat dp = -a_bar_(i, j) * Mat::Identity(n, n);
          if (i == j) {
            dq += h_ * ev[i].f_q;
            add_block(T, rf, L.P(k, i), h_ * ev[i].f_p);
            add_block(T, rg, L.Q(k, i), h_ * ev[i].g_q);
            dp += h_ * ev[i].g_p;
          }
          add_block(T, rf, L.Q(k, j), dq);
          add_block(T, rg, L.P(k, j), dp);
        }
        add_identity(T, rg, L.p(k + 1), n, -beta_[i] / b_[i]);
        add_identity(T, rg, L.p(k), n, alpha_[i] / b_[i]);
        add_control(rg, i, h_);
      }
    } else {
      add_identity(T, L.c_first(k), L.q(k + 1), n, 1.0);
      add_identity(T, L.c_first(k), L.q(k), n, -1.0);
      add_identity(T, L.c_second(k), L.p(k + 1), n, 1.0);
      add_identity(T, L.c_second(k), L.p(k), n, -1.0);
      for (int j = 0; j < s; ++j) {
        add_block(T, L.c_first(k), L.Q(k, j), -h_ * b_[j] * ev[j].f_q);
        add_block(T, L.c_first(k), L.P(k, j), -h_ * b_[j] * ev[j].f_p);
        add_block(T, L.c_second(k), L.Q(k, j), -h_ * b_[j] * ev[j].g_q);
        add_block(T, L.c_second(k), L.P(k, j), -h_ * b_[j] * ev[j].g_p);
        add_control(L.c_second(k), j, -h_ * b_[j]);
      }
      for (int i = 0; i < s; ++i) {
        const int rq = L.c_stage_q(k, i);
        const int rp = L.c_stage_p(k, i);
        add_identity(T, rq, L.Q(k, i), n, 1.0);
        add_identity(T, rq, L.q(k), n, -1.0);
        add_identity(T, rp, L.P(k, i), n, 1.0);
        add_identity(T, rp, L.p(k), n, -1.0);
        for (int j = 0; j < s; ++j) {
          add_block(T, rq, L.Q(k, j), -h_ * a_(i, j) * ev[j].f_q);
          add_block(T, rq, L.P(k, j), -h_ * a_(i, j) * ev[j].f_p);
          add_block(T, rp, L.Q(k, j), -h_ * a_bar_(i, j) * ev[j].g_q);
          add_block(T, rp, L.P(k, j), -h_ * a_bar_(i, j) * ev[j].g_p);
          add_control(rp, j, -h_ * a_bar_(i, j));
        }
      }
    }
  }
  SparseMat A(L.num_cons, L.num_vars);
  A.setFromTriplets(T.begin(), T.end());
  return A;
}

double Transcription::lagrangian(const Vec& x, const Vec& y) const {
  if (y.size() != layout_.num_cons) throw Error(ErrorKind::DimensionMismatch, "multiplier size");
  return cost(x) + (signs_.array() * y.array()).matrix().dot(constraints(x));
}

Vec Transcription::lagrangian_gradient(const Vec& x, const Vec& y) const {
  if (y.size() != layout_.num_cons) throw Error(ErrorKind::DimensionMismatch, "multiplier size");
  const Vec weighted = (signs_.array() * y.array()).matrix();
  return cost_gradient(x) + constraint_jacobian(x).transpose() * weighted;
}

DiscreteTrajectory Transcription::trajectory(const Vec& x) const {
  const NlpLayout& L = layout_;
  const PartitionedRhs rhs(*def_.system);
  DiscreteTrajectory tr;
  tr.h = h_;
  tr.N = L.N;
  for (int k = 0; k <= L.N; ++k) {
    tr.t.push_back(k * h_);
    tr.q.push_back(x.segment(L.q(k), L.n));
    tr.p.push_back(x.segment(L.p(k), L.n));
  }
  for (int k = 0; k < L.N; ++k) {
    StageBlock st;
    st.Q.resize(L.s, L.n);
    st.P.resize(L.s, L.n);
    st.Qdot.resize(L.s, L.n);
    st.Pdot.resize(L.s, L.n);
    st.U = stage_controls(x, k);
    for (int i = 0; i < L.s; ++i) {
      const Vec Qi = x.segment(L.Q(k, i), L.n);
      const Vec Pi = x.segment(L.P(k, i), L.n);
      st.Q.row(i) = Qi.transpose();
      st.P.row(i) = Pi.transpose();
      st.Qdot.row(i) = rhs.f(Qi, Pi).transpose();
      st.Pdot.row(i) = rhs.g(Qi, Pi, st.U.row(i).transpose()).transpose();
    }
    tr.stages.push_back(std::move(st));
  }
  return tr;
}

Vec Transcription::pack(const DiscreteTrajectory& tr, const std::vector<Mat>& ctrl) const {
  const NlpLayout& L = layout_;
  if (tr.N != L.N || static_cast<int>(tr.stages.size()) != L.N ||
      static_cast<int>(ctrl.size()) != L.N) {
    throw Error(ErrorKind::DimensionMismatch, "trajectory does not match the layout");
  }
  Vec x(L.num_vars);
  for (int k = 0; k <= L.N; ++k) {
    x.segment(L.q(k), L.n) = tr.q[k];
    x.segment(L.p(k), L.n) = tr.p[k];
  }
  for (int k = 0; k < L.N; ++k) {
    for (int i = 0; i < L.s; ++i) {
      x.segment(L.Q(k, i), L.n) = tr.stages[k].Q.row(i).transpose();
      x.segment(L.P(k, i), L.n) = tr.stages[k].P.row(i).transpose();
    }
    if (ctrl[k].rows() != L.r || ctrl[k].cols() != L.m) {
      throw Error(ErrorKind::DimensionMismatch, "control block has the wrong shape");
    }
    for (int j = 0; j < L.r; ++j) x.segment(L.U(k, j), L.m) = ctrl[k].row(j).transpose();
  }
  return x;
}

}  // namespace hovi
