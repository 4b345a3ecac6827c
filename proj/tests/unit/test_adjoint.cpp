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
#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include "hovi/adjoint.hpp"
#include "hovi/error.hpp"
#include "hovi/hager.hpp"
#include "hovi/models.hpp"
#include "oracles.hpp"

using namespace hovi;

namespace {

// C = |p|^2 + |u|^2 + |u|^4 / 4, no final cost.
class QuarticControlCost final : public CostPair {
 public:
  double running(const Vec&, const Vec& p, const Vec& u) const override {
    return p.squaredNorm() + u.squaredNorm() + 0.25 * u.array().pow(4).sum();
  }
  RunningGrad running_grad(const Vec& q, const Vec& p, const Vec& u) const override {
    return {Vec::Zero(q.size()), 2 * p, Vec(2 * u.array() + u.array().cube())};
  }
  Mat running_duu(const Vec&, const Vec&, const Vec& u) const override {
    return Vec(2 + 3 * u.array().square()).asDiagonal();
  }
  double terminal(const Vec&, const Vec&) const override { return 0.0; }
  TerminalGrad terminal_grad(const Vec& q, const Vec& p) const override {
    return {Vec::Zero(q.size()), Vec::Zero(p.size())};
  }
};

OcpDefinition hager(int N, const std::string& variant = "c3t3") {
  return hager_problem(parse_hager_variant(variant), 1.0, N);
}

}  // namespace

TEST(Adjoint, TransformRoundTrip) {
  std::mt19937_64 rng(31);
  for (Family f : {Family::GaussLobatto, Family::GaussLegendre, Family::Radau}) {
    const CollocationScheme sc = make_scheme(f, 3);
    KktSolution k;
    const int N = 5, n = 2;
    for (int i = 0; i <= N; ++i) k.lambda.push_back(test::uniform(rng, n));
    for (int i = 0; i < N; ++i) {
      k.Lambda.push_back(Mat::Random(3, n));
      k.Psi.push_back(Mat::Random(3, n));
    }
    const RawMultipliers raw = inverse_transform(transform(k, sc), sc);
    for (int i = 0; i < N; ++i) {
      EXPECT_LE((raw.Lambda[i] - k.Lambda[i]).cwiseAbs().maxCoeff(), 1e-13);
      EXPECT_LE((raw.Psi[i] - k.Psi[i]).cwiseAbs().maxCoeff(), 1e-13);
      EXPECT_EQ(raw.mu[i], k.lambda[i]);
    }
  }
}

TEST(Adjoint, ZeroWeightRejected) {
  CollocationScheme sc = make_scheme(Family::GaussLobatto, 3);
  sc.b << 0.5, 0.0, 0.5;
  KktSolution k;
  k.lambda = {Vec::Zero(1), Vec::Zero(1)};
  k.Lambda = {Mat::Zero(3, 1)};
  k.Psi = {Mat::Zero(3, 1)};
  try {
    transform(k, sc);
    FAIL() << "expected ZeroWeight";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroWeight);
  }
}

TEST(Adjoint, TransformedMultipliersSolveAdjointSystem) {
  const OcpDefinition def = hager(8);
  const Transcription nlp(def);
  const KktSolution sol = solve_kkt(nlp);
  const TransformedMultipliers adj = transform(sol, def.scheme);
  EXPECT_LE(adjoint_residual(def, sol.trajectory, adj), 1e-9);
  EXPECT_LE(adj.matching_residual, 1e-9);
  // the same variables read as one sG step of the adjoint field per interval
  EXPECT_LE(adjoint_scheme_residual(def, sol.trajectory, adj), 1e-9);
  // a perturbed costate is rejected
  TransformedMultipliers bad = adj;
  bad.chi[3](1, 0) += 1e-4;
  EXPECT_GT(adjoint_residual(def, sol.trajectory, bad), 1e-6);
}

TEST(Adjoint, ContinuousCostateSatisfiesAdjointOde) {
  const double T = 1.0;
  const HagerExact ex = hager_exact(T);
  const HagerModel sys;
  QuadraticCost::Weights w;
  const QuadraticCost cost(1, 1, w);
  const AdjointField field(sys, cost);
  const double e = 1e-5;
  for (int i = 0; i < 256; ++i) {
    const double t = e + (T - 2 * e) * i / 255.0;
    const Vec q = Vec::Constant(1, ex.q(t)), p = Vec::Constant(1, ex.p(t));
    const Vec u = Vec::Constant(1, ex.u(t));
    const Vec psi = Vec::Constant(1, ex.psi(t)), lam = Vec::Constant(1, ex.lambda(t));
    const FieldEval fe = field.evaluate(psi, lam, AdjointField::pack(q, p, u));
    EXPECT_NEAR(fe.f[0], (ex.psi(t + e) - ex.psi(t - e)) / (2 * e), 1e-8) << t;
    EXPECT_NEAR(fe.g[0], (ex.lambda(t + e) - ex.lambda(t - e)) / (2 * e), 1e-12) << t;
    EXPECT_NEAR(feedback_control(sys, cost, q, p, psi)[0], u[0], 1e-14) << t;
  }
  EXPECT_NEAR(ex.psi(T), 0.0, 1e-15);
}

TEST(Adjoint, FieldJacobians) {
  std::mt19937_64 rng(32);
  const ScalarMass sys;
  QuadraticCost::Weights w{0.5, 1.0, 1.0, 0.0, 0.0};
  const QuadraticCost cost(1, 1, w);
  const AdjointField field(sys, cost);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec wv = AdjointField::pack(test::uniform(rng, 1), test::uniform(rng, 1),
                                      test::uniform(rng, 1));
    const Vec psi = test::uniform(rng, 1), lam = test::uniform(rng, 1);
    const FieldEval fe = field.evaluate(psi, lam, wv);
    auto f_psi = [&](const Vec& x) { return field.evaluate(x, lam, wv).f; };
    auto f_lam = [&](const Vec& x) { return field.evaluate(psi, x, wv).f; };
    auto g_psi = [&](const Vec& x) { return field.evaluate(x, lam, wv).g; };
    auto g_lam = [&](const Vec& x) { return field.evaluate(psi, x, wv).g; };
    EXPECT_LT(test::rel_error(fe.f_q, test::central_jacobian(f_psi, psi)), 1e-6);
    EXPECT_LT(test::rel_error(fe.f_p, test::central_jacobian(f_lam, lam)), 1e-6);
    EXPECT_LT(test::rel_error(fe.g_q, test::central_jacobian(g_psi, psi)), 1e-6);
    EXPECT_LT(test::rel_error(fe.g_p, test::central_jacobian(g_lam, lam)), 1e-6);
  }
}

TEST(Adjoint, DiscreteCostateConverges) {
  const HagerExact ex = hager_exact(1.0);
  std::vector<double> err;
  for (int N : {4, 8, 16, 32}) {
    const OcpDefinition def = hager(N);
    const KktSolution sol = solve_kkt(Transcription(def));
    const TransformedMultipliers adj = transform(sol, def.scheme);
    double e = 0.0;
    for (int k = 0; k <= N; ++k) {
      const double t = sol.trajectory.t[k];
      e = std::max({e, std::abs(adj.psi[k][0] - ex.psi(t)), std::abs(adj.lambda[k][0])});
    }
    err.push_back(e);
  }
  for (size_t i = 1; i < err.size(); ++i) EXPECT_LT(err[i], err[i - 1]);
  // at least the state order carries over to the costate
  EXPECT_GT(std::log2(err[2] / err[3]), 3.0);
}

TEST(Adjoint, QuadraticFinalCostSetsTerminalCostate) {
  OcpDefinition def;
  def.system = make_model("harmonic");
  QuadraticCost::Weights w{0.0, 0.5, 1.0, 2.0, 3.0};
  def.cost = std::make_shared<QuadraticCost>(1, 1, w, Vec::Constant(1, 0.4), Vec::Constant(1, -0.3));
  def.q_init = Vec::Constant(1, 1.0);
  def.p_init = Vec::Zero(1);
  def.T = 1.5;
  def.N = 6;
  def.scheme = make_scheme(Family::GaussLobatto, 3);
  const KktSolution sol = solve_kkt(Transcription(def));
  const TransformedMultipliers adj = transform(sol, def.scheme);
  const Vec& qN = sol.trajectory.q.back();
  const Vec& pN = sol.trajectory.p.back();
  EXPECT_NEAR(adj.lambda.back()[0], 2.0 * (qN[0] - 0.4), 1e-9);
  EXPECT_NEAR(adj.psi.back()[0], 3.0 * (pN[0] + 0.3), 1e-9);
  const CommutationReport rep = commutation_check(def);
  EXPECT_TRUE(rep.pass) << rep.max_deviation;
}

TEST(Adjoint, BvpMatchesKktOnNonlinearModel) {
  OcpDefinition def;
  def.system = make_model("scalarmass");
  QuadraticCost::Weights w{0.5, 1.0, 1.0, 1.0, 0.0};
  def.cost = std::make_shared<QuadraticCost>(1, 1, w);
  def.q_init = Vec::Constant(1, 0.5);
  def.p_init = Vec::Constant(1, 0.3);
  def.N = 6;
  def.scheme = make_scheme(Family::GaussLegendre, 2);
  const BvpSolution bvp = solve_state_adjoint_bvp(def);
  EXPECT_LE(bvp.residual, 1e-10);
  const CommutationReport rep = commutation_check(def);
  EXPECT_TRUE(rep.pass) << rep.adjoint_residual << " " << rep.max_deviation;
  EXPECT_LE(rep.feedback_deviation, 1e-9);
}

TEST(Adjoint, FeedbackControlNonQuadraticCost) {
  const HagerModel sys;
  const QuarticControlCost cost;
  const Vec q = Vec::Zero(1), p = Vec::Zero(1), chi = Vec::Constant(1, -3.0);
  const Vec u = feedback_control(sys, cost, q, p, chi);
  // 2u + u^3 + chi = 0
  EXPECT_NEAR(2 * u[0] + u[0] * u[0] * u[0] - 3.0, 0.0, 1e-12);
  EXPECT_NEAR(u[0], 1.0, 1e-12);
}

TEST(Adjoint, CommutationOnHager) {
  for (int N : {4, 8}) {
    const CommutationReport rep = commutation_check(hager(N));
    EXPECT_TRUE(rep.pass) << N;
    EXPECT_LE(rep.round_trip, 1e-13);
    EXPECT_LE(rep.adjoint_residual, rep.gate);
  }
}

TEST(Adjoint, CommutationGuards) {
  auto kind_of = [](const OcpDefinition& d) {
    try {
      commutation_check(d);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::UsageError;
  };
  EXPECT_EQ(kind_of(hager_problem(parse_hager_variant("c3t3"), 1.0, 4, SchemeKind::Sprk)),
            ErrorKind::SchemeMismatch);
  EXPECT_EQ(kind_of(hager(4, "c3t1")), ErrorKind::NonCoerciveVariant);
  EXPECT_EQ(kind_of(hager(4, "c2t3")), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of(hager(4, "c3t4")), ErrorKind::InvalidArgument);
}
