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
#include "hovi/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hovi/error.hpp"

namespace hovi {
namespace {

double inf_norm(const Vec& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// The LU condition estimate can miss an exactly rank deficient matrix, so
// the smallest pivot relative to the largest is checked as well.
double singularity_measure(const Eigen::PartialPivLU<Mat>& lu) {
  const Vec piv = lu.matrixLU().diagonal().cwiseAbs();
  const double ratio = piv.maxCoeff() > 0.0 ? piv.minCoeff() / piv.maxCoeff() : 0.0;
  return std::min(lu.rcond(), ratio);
}

Vec initial_primal(const Transcription& nlp, InitStrategy init) {
  const NlpLayout& L = nlp.layout();
  if (init == InitStrategy::Zeros) return Vec::Zero(L.num_vars);
  const OcpDefinition& def = nlp.definition();
  StepperConfig cfg;
  cfg.kind = def.kind;
  cfg.scheme = def.scheme;
  const DiscreteTrajectory tr =
      integrate(*def.system, cfg, def.q_init, def.p_init, nullptr, def.T, def.N);
  return nlp.pack(tr, std::vector<Mat>(L.N, Mat::Zero(L.r, L.m)));
}

}  // namespace

void unpack_multipliers(const Transcription& nlp, KktSolution& sol) {
  const NlpLayout& L = nlp.layout();
  const int n = L.n;
  sol.lambda.assign(L.N + 1, Vec());
  sol.mu.assign(L.N, Vec());
  sol.Lambda.assign(L.N, Mat(L.s, n));
  sol.Psi.assign(L.N, Mat(L.s, n));
  sol.lambda[0] = sol.y.segment(L.c_init_q(), n);
  sol.psi0 = sol.y.segment(L.c_init_p(), n);
  for (int k = 0; k < L.N; ++k) {
    sol.mu[k] = sol.y.segment(L.c_first(k), n);
    sol.lambda[k + 1] = sol.y.segment(L.c_second(k), n);
    for (int i = 0; i < L.s; ++i) {
      sol.Lambda[k].row(i) = sol.y.segment(L.c_stage_q(k, i), n).transpose();
      sol.Psi[k].row(i) = sol.y.segment(L.c_stage_p(k, i), n).transpose();
    }
  }
}

KktSolution solve_kkt(const Transcription& nlp, const KktOptions& opt) {
  const NlpLayout& L = nlp.layout();
  const int nv = L.num_vars;
  const int nc = L.num_cons;
  const Vec& signs = nlp.multiplier_signs();

  Vec x = initial_primal(nlp, opt.init);
  Vec y = Vec::Zero(nc);

  auto residual = [&](const Vec& xx, const Vec& yy) {
    Vec F(nv + nc);
    F.head(nv) = nlp.lagrangian_gradient(xx, yy);
    F.tail(nc) = nlp.constraints(xx);
    return F;
  };

  KktSolution sol;
  Vec F = residual(x, y);
  double r = inf_norm(F);
  sol.residual_history.push_back(r);
  int it = 0;
  while (!(r <= opt.tol)) {
    if (!std::isfinite(r)) throw Error(ErrorKind::NoConvergence, "KKT residual is not finite", r);
    if (it >= opt.max_iter) {
      throw Error(ErrorKind::MaxIterations, "KKT Newton hit the iteration cap", r);
    }
    const Mat H = fd_jacobian([&](const Vec& xx) { return nlp.lagrangian_gradient(xx, y); }, x,
                              opt.hessian_step, opt.exec);
    const Mat A = Mat(nlp.constraint_jacobian(x));
    Mat K = Mat::Zero(nv + nc, nv + nc);
    K.topLeftCorner(nv, nv) = 0.5 * (H + H.transpose());
    K.topRightCorner(nv, nc) = A.transpose() * signs.asDiagonal();
    K.bottomLeftCorner(nc, nv) = A;
    Eigen::PartialPivLU<Mat> lu(K);
    sol.rcond = singularity_measure(lu);
    if (!(sol.rcond > opt.rcond_min)) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "KKT matrix is singular (rcond %.3g)", sol.rcond);
      throw Error(ErrorKind::SingularKkt, buf, r);
    }
    const Vec dz = -lu.solve(F);

    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 12; ++ls) {
      const Vec xn = x + step * dz.head(nv);
      const Vec yn = y + step * dz.tail(nc);
      const Vec Fn = residual(xn, yn);
      const double rn = inf_norm(Fn);
      if (std::isfinite(rn) && rn <= (1.0 - 1e-4 * step) * r) {
        x = xn;
        y = yn;
        F = Fn;
        r = rn;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++it;
    if (!accepted) {
      throw Error(ErrorKind::NoConvergence, "KKT line search stalled", r);
    }
    sol.residual_history.push_back(r);
  }

  sol.x = std::move(x);
  sol.y = std::move(y);
  sol.iterations = it;
  sol.residual = r;
  sol.trajectory = nlp.trajectory(sol.x);
  for (int k = 0; k < L.N; ++k) {
    sol.control_nodes.push_back(nlp.control_nodes(sol.x, k));
    sol.max_abs_control =
        std::max({sol.max_abs_control, max_abs(sol.control_nodes.back()),
                  max_abs(sol.trajectory.stages[k].U)});
  }
  sol.diverged = !(sol.max_abs_control <= opt.divergence_bound);
  unpack_multipliers(nlp, sol);
  return sol;
}

}  // namespace hovi
