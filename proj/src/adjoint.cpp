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
#include "hovi/adjoint.hpp"

#include <algorithm>
#include <cmath>

#include "hovi/error.hpp"

namespace hovi {
namespace {

double inf_norm(const Vec& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }
double inf_norm(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Vec row(const Mat& m, int i) { return m.row(i).transpose(); }

void require_positive_weights(const CollocationScheme& scheme) {
  for (int i = 0; i < scheme.s; ++i) {
    if (!(scheme.b[i] > 0.0)) {
      throw Error(ErrorKind::ZeroWeight, "adjoint transformation needs positive weights");
    }
  }
}

void require_stage_controls(const OcpDefinition& ocp) {
  const int s = ocp.scheme.s;
  if (ocp.control_nodes() != s || ocp.cost_points() != s) {
    throw Error(ErrorKind::InvalidArgument,
                "adjoint system needs control nodes and cost points at the stages");
  }
}

// Step-major unknowns of the state-adjoint system.
struct BvpLayout {
  int n, s, N;
  int stride() const { return 4 * n + 4 * s * n; }
  int q(int k) const { return k * stride(); }
  int p(int k) const { return q(k) + n; }
  int lambda(int k) const { return q(k) + 2 * n; }
  int psi(int k) const { return q(k) + 3 * n; }
  int Q(int k, int i) const { return q(k) + 4 * n + i * n; }
  int P(int k, int i) const { return Q(k, 0) + (s + i) * n; }
  int Gamma(int k, int i) const { return Q(k, 0) + (2 * s + i) * n; }
  int chi(int k, int i) const { return Q(k, 0) + (3 * s + i) * n; }
  int size() const { return N * stride() + 4 * n; }
};

}  // namespace

TransformedMultipliers transform(const KktSolution& kkt, const CollocationScheme& scheme) {
  require_positive_weights(scheme);
  const SgCoefficients co = sg_coefficients(scheme);
  const int N = static_cast<int>(kkt.Psi.size());
  if (static_cast<int>(kkt.Lambda.size()) != N || static_cast<int>(kkt.lambda.size()) != N + 1) {
    throw Error(ErrorKind::DimensionMismatch, "multiplier groups have inconsistent lengths");
  }
  const Eigen::ArrayXd inv_b = scheme.b.array().inverse();
  TransformedMultipliers out;
  out.lambda = kkt.lambda;
  out.psi_plus.assign(N + 1, Vec());
  for (int k = 0; k < N; ++k) {
    if (kkt.Psi[k].rows() != scheme.s || kkt.Lambda[k].rows() != scheme.s) {
      throw Error(ErrorKind::DimensionMismatch, "stage multipliers do not match the scheme");
    }
    out.Gamma.push_back(inv_b.matrix().asDiagonal() * kkt.Lambda[k]);
    out.chi.push_back(inv_b.matrix().asDiagonal() * kkt.Psi[k]);
    out.psi_minus.push_back(out.chi[k].transpose() * co.alpha);
    out.psi_plus[k + 1] = out.chi[k].transpose() * co.beta;
  }
  for (int k = 0; k < N; ++k) out.psi.push_back(out.psi_minus[k]);
  out.psi.push_back(out.psi_plus[N]);
  for (int k = 1; k < N; ++k) {
    out.matching_residual =
        std::max(out.matching_residual, inf_norm(Vec(out.psi_minus[k] - out.psi_plus[k])));
  }
  return out;
}

RawMultipliers inverse_transform(const TransformedMultipliers& adj, const CollocationScheme& scheme) {
  require_positive_weights(scheme);
  RawMultipliers out;
  out.lambda = adj.lambda;
  const int N = static_cast<int>(adj.chi.size());
  for (int k = 0; k < N; ++k) {
    out.mu.push_back(adj.lambda[k]);
    out.Lambda.push_back(scheme.b.asDiagonal() * adj.Gamma[k]);
    out.Psi.push_back(scheme.b.asDiagonal() * adj.chi[k]);
  }
  out.psi0 = adj.psi.empty() ? Vec() : adj.psi[0];
  return out;
}

Vec feedback_control(const MechanicalSystem& system, const CostPair& cost, const Vec& q,
                     const Vec& p, const Vec& chi, double tol) {
  const int m = system.dim_u();
  if (m == 0) return Vec::Zero(0);
  const Vec v = inverse_legendre(system, q, p);
  const Mat g_u = system.force_du(q, v);
  Vec u = Vec::Zero(m);
  const int max_iter = cost.quadratic_in_u() ? 1 : 50;
  for (int it = 0; it < max_iter; ++it) {
    const Vec r = cost.running_grad(q, p, u).du + g_u.transpose() * chi;
    if (!cost.quadratic_in_u() && inf_norm(r) <= tol) return u;
    Eigen::LDLT<Mat> ldlt(cost.running_duu(q, p, u));
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      throw Error(ErrorKind::SingularJacobian, "control Hessian is not positive definite");
    }
    u -= ldlt.solve(r);
  }
  if (cost.quadratic_in_u()) return u;
  const double r = inf_norm(Vec(cost.running_grad(q, p, u).du + g_u.transpose() * chi));
  if (r <= tol) return u;
  throw Error(ErrorKind::NoConvergence, "feedback control did not converge", r);
}

Vec AdjointField::pack(const Vec& q, const Vec& p, const Vec& u) {
  Vec w(q.size() + p.size() + u.size());
  w << q, p, u;
  return w;
}

FieldEval AdjointField::evaluate(const Vec& psi, const Vec& lambda, const Vec& w) const {
  const int n = system_->dim_q();
  const int m = system_->dim_u();
  if (w.size() != 2 * n + m) throw Error(ErrorKind::DimensionMismatch, "adjoint stage parameter");
  const Vec q = w.head(n);
  const Vec p = w.segment(n, n);
  const Vec u = w.tail(m);
  const RhsEval e = rhs_.evaluate(q, p, u);
  const RunningGrad gr = cost_->running_grad(q, p, u);
  FieldEval out;
  out.f = -gr.dp - e.f_p.transpose() * lambda - e.g_p.transpose() * psi;
  out.g = -gr.dq - e.f_q.transpose() * lambda - e.g_q.transpose() * psi;
  out.f_q = -e.g_p.transpose();
  out.f_p = -e.f_p.transpose();
  out.g_q = -e.g_q.transpose();
  out.g_p = -e.f_q.transpose();
  return out;
}

double adjoint_residual(const OcpDefinition& ocp, const DiscreteTrajectory& primal,
                        const TransformedMultipliers& adj) {
  require_stage_controls(ocp);
  const MechanicalSystem& sys = *ocp.system;
  const CostPair& C = *ocp.cost;
  const SgCoefficients co = sg_coefficients(ocp.scheme);
  const Vec& b = ocp.scheme.b;
  const int s = ocp.scheme.s;
  const int N = primal.N;
  const double h = primal.h;
  if (static_cast<int>(adj.chi.size()) != N || static_cast<int>(adj.Gamma.size()) != N ||
      static_cast<int>(adj.lambda.size()) != N + 1 || static_cast<int>(adj.psi.size()) != N + 1) {
    throw Error(ErrorKind::DimensionMismatch, "adjoint and trajectory lengths differ");
  }
  const PartitionedRhs rhs(sys);
  double worst = 0.0;
  auto take = [&worst](const Vec& r) { worst = std::max(worst, inf_norm(r)); };

  for (int k = 0; k < N; ++k) {
    const StageBlock& st = primal.stages[k];
    const Mat& Gm = adj.Gamma[k];
    const Mat& chi = adj.chi[k];
    if (chi.rows() != s || Gm.rows() != s || st.Q.rows() != s) {
      throw Error(ErrorKind::DimensionMismatch, "stage counts differ");
    }
    take(adj.psi[k] - chi.transpose() * co.alpha);
    take(adj.psi[k + 1] - chi.transpose() * co.beta);
    for (int i = 0; i < s; ++i) {
      const Vec Qi = row(st.Q, i), Pi = row(st.P, i), Ui = row(st.U, i);
      const RhsEval e = rhs.evaluate(Qi, Pi, Ui);
      const RunningGrad gr = C.running_grad(Qi, Pi, Ui);
      const Vec Gi = row(Gm, i), ci = row(chi, i);
      Vec r3 = -gr.dq - e.f_q.transpose() * Gi - e.g_q.transpose() * ci -
               (co.beta[i] * adj.lambda[k + 1] - co.alpha[i] * adj.lambda[k]) / (h * b[i]);
      Vec r4 = -gr.dp - e.f_p.transpose() * Gi - e.g_p.transpose() * ci;
      for (int j = 0; j < s; ++j) {
        r3 -= co.a_bar(i, j) * row(Gm, j) / h;
        r4 -= co.a(i, j) * row(chi, j) / h;
      }
      take(r3);
      take(r4);
      take(gr.du + e.g_u.transpose() * ci);
    }
  }
  const TerminalGrad tg = C.terminal_grad(primal.q[N], primal.p[N]);
  take(adj.lambda[N] - tg.dq);
  take(adj.psi[N] - tg.dp);
  return worst;
}

double adjoint_scheme_residual(const OcpDefinition& ocp, const DiscreteTrajectory& primal,
                               const TransformedMultipliers& adj) {
  require_stage_controls(ocp);
  const AdjointField field(*ocp.system, *ocp.cost);
  StepperConfig cfg;
  cfg.kind = SchemeKind::Sg;
  cfg.scheme = ocp.scheme;
  const Stepper stepper(field, cfg);
  const int n = ocp.system->dim_q();
  const int m = ocp.system->dim_u();
  const int s = ocp.scheme.s;
  double worst = 0.0;
  for (int k = 0; k < primal.N; ++k) {
    const StageBlock& st = primal.stages[k];
    Mat W(s, 2 * n + m);
    for (int i = 0; i < s; ++i) {
      W.row(i) = AdjointField::pack(row(st.Q, i), row(st.P, i), row(st.U, i)).transpose();
    }
    worst = std::max(worst, stepper.relation_residual(adj.psi[k], adj.lambda[k], adj.psi[k + 1],
                                                      adj.lambda[k + 1], adj.chi[k], adj.Gamma[k],
                                                      W, primal.h));
  }
  return worst;
}

BvpSolution solve_state_adjoint_bvp(const OcpDefinition& ocp, const BvpOptions& opt) {
  if (ocp.kind != SchemeKind::Sg) {
    throw Error(ErrorKind::SchemeMismatch, "state-adjoint system is built on the sG scheme");
  }
  if (!ocp.system || !ocp.cost) throw Error(ErrorKind::InvalidArgument, "problem is incomplete");
  require_positive_weights(ocp.scheme);
  const MechanicalSystem& sys = *ocp.system;
  const CostPair& C = *ocp.cost;
  const SgCoefficients co = sg_coefficients(ocp.scheme);
  const Vec& b = ocp.scheme.b;
  const int n = sys.dim_q();
  const int s = ocp.scheme.s;
  const int N = ocp.N;
  const double h = ocp.T / N;
  const BvpLayout L{n, s, N};
  const PartitionedRhs rhs(sys);

  auto residual = [&](const Vec& z) {
    Vec R(L.size());
    int r = 0;
    auto put = [&](const Vec& v) {
      R.segment(r, v.size()) = v;
      r += static_cast<int>(v.size());
    };
    put(z.segment(L.q(0), n) - ocp.q_init);
    put(z.segment(L.p(0), n) - ocp.p_init);
    for (int k = 0; k < N; ++k) {
      Vec r0 = -z.segment(L.q(k), n), r1 = -z.segment(L.q(k + 1), n);
      Vec r2 = -z.segment(L.psi(k), n), r3 = -z.segment(L.psi(k + 1), n);
      for (int j = 0; j < s; ++j) {
        r0 += co.alpha[j] * z.segment(L.Q(k, j), n);
        r1 += co.beta[j] * z.segment(L.Q(k, j), n);
        r2 += co.alpha[j] * z.segment(L.chi(k, j), n);
        r3 += co.beta[j] * z.segment(L.chi(k, j), n);
      }
      put(r0);
      put(r1);
      put(r2);
      put(r3);
      for (int i = 0; i < s; ++i) {
        const Vec Qi = z.segment(L.Q(k, i), n), Pi = z.segment(L.P(k, i), n);
        const Vec Gi = z.segment(L.Gamma(k, i), n), ci = z.segment(L.chi(k, i), n);
        const Vec ui = feedback_control(sys, C, Qi, Pi, ci);
        const RhsEval e = rhs.evaluate(Qi, Pi, ui);
        const RunningGrad gr = C.running_grad(Qi, Pi, ui);
        const Vec eta = -gr.dp - e.f_p.transpose() * Gi - e.g_p.transpose() * ci;
        const Vec nu = -gr.dq - e.f_q.transpose() * Gi - e.g_q.transpose() * ci;
        Vec rf = h * e.f;
        Vec rg = h * b[i] * e.g - co.beta[i] * z.segment(L.p(k + 1), n) +
                 co.alpha[i] * z.segment(L.p(k), n);
        Vec reta = h * eta;
        Vec rnu = h * b[i] * nu - co.beta[i] * z.segment(L.lambda(k + 1), n) +
                  co.alpha[i] * z.segment(L.lambda(k), n);
        for (int j = 0; j < s; ++j) {
          rf -= co.a(i, j) * z.segment(L.Q(k, j), n);
          rg -= b[i] * co.a_bar(i, j) * z.segment(L.P(k, j), n);
          reta -= co.a(i, j) * z.segment(L.chi(k, j), n);
          rnu -= b[i] * co.a_bar(i, j) * z.segment(L.Gamma(k, j), n);
        }
        put(rf);
        put(rg);
        put(reta);
        put(rnu);
      }
    }
    const Vec qN = z.segment(L.q(N), n), pN = z.segment(L.p(N), n);
    const TerminalGrad tg = C.terminal_grad(qN, pN);
    put(z.segment(L.lambda(N), n) - tg.dq);
    put(z.segment(L.psi(N), n) - tg.dp);
    return R;
  };

  // state from an uncontrolled sG run, adjoint at zero
  Vec z = Vec::Zero(L.size());
  {
    StepperConfig cfg;
    cfg.kind = SchemeKind::Sg;
    cfg.scheme = ocp.scheme;
    const DiscreteTrajectory tr = integrate(sys, cfg, ocp.q_init, ocp.p_init, nullptr, ocp.T, N);
    for (int k = 0; k <= N; ++k) {
      z.segment(L.q(k), n) = tr.q[k];
      z.segment(L.p(k), n) = tr.p[k];
    }
    for (int k = 0; k < N; ++k) {
      for (int i = 0; i < s; ++i) {
        z.segment(L.Q(k, i), n) = row(tr.stages[k].Q, i);
        z.segment(L.P(k, i), n) = row(tr.stages[k].P, i);
      }
    }
  }

  BvpSolution out;
  Vec R = residual(z);
  double r = inf_norm(R);
  int it = 0;
  while (!(r <= opt.tol)) {
    if (!std::isfinite(r) || it >= opt.max_iter) {
      throw Error(ErrorKind::NoConvergence, "state-adjoint Newton did not converge", r);
    }
    const Mat J = fd_jacobian(residual, z, opt.fd_step, opt.exec);
    Eigen::PartialPivLU<Mat> lu(J);
    if (!(lu.rcond() > 1e-14)) {
      throw Error(ErrorKind::SingularJacobian, "state-adjoint Jacobian is singular", r);
    }
    z -= lu.solve(R);
    R = residual(z);
    r = inf_norm(R);
    ++it;
  }
  out.iterations = it;
  out.residual = r;

  DiscreteTrajectory& tr = out.trajectory;
  tr.h = h;
  tr.N = N;
  for (int k = 0; k <= N; ++k) {
    tr.t.push_back(k * h);
    tr.q.push_back(z.segment(L.q(k), n));
    tr.p.push_back(z.segment(L.p(k), n));
    out.lambda.push_back(z.segment(L.lambda(k), n));
    out.psi.push_back(z.segment(L.psi(k), n));
  }
  for (int k = 0; k < N; ++k) {
    StageBlock st;
    st.Q.resize(s, n);
    st.P.resize(s, n);
    st.Qdot.resize(s, n);
    st.Pdot.resize(s, n);
    st.U.resize(s, sys.dim_u());
    Mat G(s, n), X(s, n);
    for (int i = 0; i < s; ++i) {
      const Vec Qi = z.segment(L.Q(k, i), n), Pi = z.segment(L.P(k, i), n);
      const Vec ci = z.segment(L.chi(k, i), n);
      const Vec ui = feedback_control(sys, C, Qi, Pi, ci);
      st.Q.row(i) = Qi.transpose();
      st.P.row(i) = Pi.transpose();
      st.U.row(i) = ui.transpose();
      st.Qdot.row(i) = rhs.f(Qi, Pi).transpose();
      st.Pdot.row(i) = rhs.g(Qi, Pi, ui).transpose();
      G.row(i) = z.segment(L.Gamma(k, i), n).transpose();
      X.row(i) = ci.transpose();
    }
    tr.stages.push_back(std::move(st));
    out.Gamma.push_back(std::move(G));
    out.chi.push_back(std::move(X));
  }
  return out;
}

CommutationReport commutation_check(const OcpDefinition& ocp, const KktOptions& kkt_options,
                                    const BvpOptions& bvp_options) {
  if (ocp.kind != SchemeKind::Sg) {
    throw Error(ErrorKind::SchemeMismatch, "commutation check is defined for sG only");
  }
  if (ocp.control_nodes() > ocp.cost_points()) {
    throw Error(ErrorKind::NonCoerciveVariant,
                "cost quadrature has fewer points than control nodes");
  }
  require_stage_controls(ocp);

  const Transcription nlp(ocp);
  KktSolution kkt;
  BvpSolution bvp;
  for_each_index(
      2,
      [&](int branch) {
        if (branch == 0) {
          kkt = solve_kkt(nlp, kkt_options);
        } else {
          bvp = solve_state_adjoint_bvp(ocp, bvp_options);
        }
      },
      kkt_options.exec);

  const TransformedMultipliers adj = transform(kkt, ocp.scheme);
  CommutationReport rep;
  rep.N = ocp.N;
  rep.adjoint_residual = adjoint_residual(ocp, kkt.trajectory, adj);
  rep.matching_residual = adj.matching_residual;

  const DiscreteTrajectory& a = kkt.trajectory;
  const DiscreteTrajectory& b = bvp.trajectory;
  double scale = 0.0;
  for (int k = 0; k <= ocp.N; ++k) {
    rep.primal_deviation = std::max({rep.primal_deviation, inf_norm(Vec(a.q[k] - b.q[k])),
                                     inf_norm(Vec(a.p[k] - b.p[k]))});
    rep.dual_deviation = std::max({rep.dual_deviation, inf_norm(Vec(adj.lambda[k] - bvp.lambda[k])),
                                   inf_norm(Vec(adj.psi[k] - bvp.psi[k]))});
    scale = std::max({scale, inf_norm(a.q[k]), inf_norm(a.p[k]), inf_norm(adj.lambda[k]),
                      inf_norm(adj.psi[k])});
  }
  for (int k = 0; k < ocp.N; ++k) {
    const StageBlock& sa = a.stages[k];
    const StageBlock& sb = b.stages[k];
    rep.primal_deviation =
        std::max({rep.primal_deviation, inf_norm(Mat(sa.Q - sb.Q)), inf_norm(Mat(sa.P - sb.P)),
                  inf_norm(Mat(sa.U - sb.U))});
    rep.dual_deviation = std::max({rep.dual_deviation, inf_norm(Mat(adj.Gamma[k] - bvp.Gamma[k])),
                                   inf_norm(Mat(adj.chi[k] - bvp.chi[k]))});
    for (int i = 0; i < ocp.scheme.s; ++i) {
      const Vec u = feedback_control(*ocp.system, *ocp.cost, row(sa.Q, i), row(sa.P, i),
                                     row(adj.chi[k], i));
      rep.feedback_deviation = std::max(rep.feedback_deviation, inf_norm(Vec(u - row(sa.U, i))));
    }
  }
  const RawMultipliers raw = inverse_transform(adj, ocp.scheme);
  for (int k = 0; k <= ocp.N; ++k) {
    rep.round_trip = std::max(rep.round_trip, inf_norm(Vec(raw.lambda[k] - kkt.lambda[k])));
  }
  for (int k = 0; k < ocp.N; ++k) {
    rep.round_trip = std::max({rep.round_trip, inf_norm(Mat(raw.Lambda[k] - kkt.Lambda[k])),
                               inf_norm(Mat(raw.Psi[k] - kkt.Psi[k]))});
  }
  rep.max_deviation = std::max(rep.primal_deviation, rep.dual_deviation);
  rep.scale = 1.0 + scale;
  rep.gate = 1e-8 * (1.0 + rep.scale);
  rep.pass = rep.adjoint_residual <= rep.gate && rep.max_deviation <= rep.gate;
  return rep;
}

}  // namespace hovi
