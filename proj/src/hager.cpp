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
#include "hovi/hager.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "hovi/error.hpp"
#include "hovi/models.hpp"
#include "hovi/order_study.hpp"

namespace hovi {

double HagerExact::q(double t) const { return (std::cosh(t) - 1.0) / std::cosh(T); }
double HagerExact::p(double t) const { return std::sinh(t) / std::cosh(T); }
double HagerExact::u(double t) const { return std::cosh(t) / std::cosh(T) - 1.0; }
double HagerExact::lambda(double) const { return 0.0; }
double HagerExact::psi(double t) const { return -2.0 * u(t); }

HagerExact hager_exact(double T) {
  if (!(T > 0.0)) throw Error(ErrorKind::InvalidArgument, "horizon must be positive");
  return HagerExact{T};
}

std::vector<std::string> hager_variant_ids() {
  return {"c3t1", "c3t2", "c3t3", "c3t4", "c2t1", "c2t2", "c2t3", "c2t4"};
}

HagerVariant parse_hager_variant(std::string_view id) {
  if (id.size() == 4 && id[0] == 'c' && id[2] == 't' && (id[1] == '2' || id[1] == '3') &&
      id[3] >= '1' && id[3] <= '4') {
    return HagerVariant{std::string(id), id[1] - '0', id[3] - '0'};
  }
  throw Error(ErrorKind::UnknownVariant, "no cost variant named '" + std::string(id) + "'");
}

double hager_cost_variant(std::string_view id, const Vec& qdot, const Vec& u, double h) {
  const HagerVariant v = parse_hager_variant(id);
  if (qdot.size() != 3 || u.size() != v.r) {
    throw Error(ErrorKind::DimensionMismatch, "expected three velocities and r controls");
  }
  const CollocationScheme stages = make_scheme(Family::GaussLobatto, 3);
  const CollocationScheme rule = make_auxiliary_rule(Family::GaussLobatto, v.t);
  const Vec ctrl_nodes = make_auxiliary_rule(Family::GaussLobatto, v.r).c;
  const Vec qd = interpolation_matrix(stages.c, rule.c) * qdot;
  const Vec uu = interpolation_matrix(ctrl_nodes, rule.c) * u;
  return h * rule.b.dot((qd.array().square() + uu.array().square()).matrix());
}

OcpDefinition hager_problem(const HagerVariant& variant, double T, int N, SchemeKind kind,
                            Family family, int s) {
  OcpDefinition def;
  def.system = std::make_shared<HagerModel>();
  QuadraticCost::Weights w;
  w.wq = 0.0;
  w.wp = 1.0;
  w.wu = 1.0;
  def.cost = std::make_shared<QuadraticCost>(1, 1, w);
  def.q_init = Vec::Zero(1);
  def.p_init = Vec::Zero(1);
  def.T = T;
  def.N = N;
  def.kind = kind;
  def.scheme = make_scheme(family, s);
  def.r = variant.r;
  def.t = variant.t;
  def.variant = variant.id;
  return def;
}

std::string_view to_string(CaseStatus status) {
  switch (status) {
    case CaseStatus::Ok: return "ok";
    case CaseStatus::Singular: return "singular";
    case CaseStatus::Diverged: return "diverged";
    case CaseStatus::Failed: return "failed";
  }
  return "failed";
}

HagerCase run_hager_case(const HagerVariant& variant, double T, int N, const KktOptions& options) {
  HagerCase out;
  out.N = N;
  const HagerExact ex = hager_exact(T);
  try {
    const Transcription nlp(hager_problem(variant, T, N));
    const KktSolution sol = solve_kkt(nlp, options);
    const DiscreteTrajectory& tr = sol.trajectory;
    const Vec& c = nlp.definition().scheme.c;
    for (int k = 0; k <= N; ++k) {
      out.q_error = std::max(out.q_error, std::abs(tr.q[k][0] - ex.q(tr.t[k])));
      out.p_error = std::max(out.p_error, std::abs(tr.p[k][0] - ex.p(tr.t[k])));
    }
    for (int k = 0; k < N; ++k) {
      for (int i = 0; i < c.size(); ++i) {
        const double t = tr.t[k] + c[i] * tr.h;
        out.u_error = std::max(out.u_error, std::abs(tr.stages[k].U(i, 0) - ex.u(t)));
      }
    }
    out.max_abs_control = sol.max_abs_control;
    out.iterations = sol.iterations;
    out.residual = sol.residual;
    out.status = sol.diverged ? CaseStatus::Diverged : CaseStatus::Ok;
  } catch (const Error& e) {
    out.status = e.kind() == ErrorKind::SingularKkt ? CaseStatus::Singular : CaseStatus::Failed;
    out.residual = e.residual();
    out.message = e.what();
  }
  return out;
}

std::vector<HagerCase> run_hager_experiment(const HagerVariant& variant, double T,
                                            const std::vector<int>& N_list,
                                            const KktOptions& options, Exec exec) {
  std::vector<HagerCase> out(N_list.size());
  for_each_index(
      static_cast<int>(N_list.size()),
      [&](int i) { out[i] = run_hager_case(variant, T, N_list[i], options); }, exec);

  std::vector<double> n, u;
  for (const HagerCase& c : out) {
    if (c.status != CaseStatus::Ok) continue;
    if (!u.empty() && !(c.max_abs_control > u.back() && c.N > n.back())) return out;
    n.push_back(c.N);
    u.push_back(c.max_abs_control);
  }
  if (u.size() < 3 || !(u.front() > 0.0)) return out;
  const double slope = fit_slope(n, u);
  if (slope > kControlGrowthSlope) {
    for (HagerCase& c : out) {
      if (c.status != CaseStatus::Ok) continue;
      c.status = CaseStatus::Diverged;
      c.message = "max|U| grows like N^" + std::to_string(slope);
    }
  }
  return out;
}

}  // namespace hovi
