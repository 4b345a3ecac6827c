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
#include <random>

#include "hovi/error.hpp"
#include "hovi/mechanics.hpp"
#include "hovi/models.hpp"
#include "oracles.hpp"

using namespace hovi;
using hovi::test::central_jacobian;
using hovi::test::rel_error;

namespace {

// Random state away from the Kepler singularity.
Vec random_q(std::mt19937_64& rng, const MechanicalSystem& sys) {
  Vec q = test::uniform(rng, sys.dim_q());
  if (sys.id() == "kepler") q = q.normalized() * (0.6 + 0.4 * std::abs(q[0]));
  return q;
}

}  // namespace

TEST(Mechanics, LagrangianDerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(11);
  for (const auto& sys : builtin_models()) {
    SCOPED_TRACE(std::string(sys->id()));
    for (int trial = 0; trial < 100; ++trial) {
      const Vec q = random_q(rng, *sys);
      const Vec v = test::uniform(rng, sys->dim_q());
      const Vec u = test::uniform(rng, sys->dim_u());
      auto L_of_q = [&](const Vec& x) { return Vec::Constant(1, sys->lagrangian(x, v)); };
      auto L_of_v = [&](const Vec& x) { return Vec::Constant(1, sys->lagrangian(q, x)); };
      EXPECT_LT(rel_error(sys->dL_dq(q, v).transpose(), central_jacobian(L_of_q, q)), 1e-6);
      EXPECT_LT(rel_error(sys->dL_dv(q, v).transpose(), central_jacobian(L_of_v, v)), 1e-6);
      auto dv_of_v = [&](const Vec& x) { return sys->dL_dv(q, x); };
      auto dv_of_q = [&](const Vec& x) { return sys->dL_dv(x, v); };
      auto dq_of_q = [&](const Vec& x) { return sys->dL_dq(x, v); };
      EXPECT_LT(rel_error(sys->d2L_dv2(q, v), central_jacobian(dv_of_v, v)), 1e-6);
      EXPECT_LT(rel_error(sys->d2L_dvdq(q, v), central_jacobian(dv_of_q, q)), 1e-6);
      EXPECT_LT(rel_error(sys->d2L_dq2(q, v), central_jacobian(dq_of_q, q)), 1e-6);
      auto F_q = [&](const Vec& x) { return sys->force(x, v, u); };
      auto F_v = [&](const Vec& x) { return sys->force(q, x, u); };
      auto F_u = [&](const Vec& x) { return sys->force(q, v, x); };
      EXPECT_LT(rel_error(sys->force_dq(q, v, u), central_jacobian(F_q, q)), 1e-6);
      EXPECT_LT(rel_error(sys->force_dv(q, v, u), central_jacobian(F_v, v)), 1e-6);
      EXPECT_LT(rel_error(sys->force_du(q, v), central_jacobian(F_u, u)), 1e-6);
    }
  }
}

TEST(Mechanics, PartitionedRhsJacobians) {
  std::mt19937_64 rng(12);
  for (const auto& sys : builtin_models()) {
    SCOPED_TRACE(std::string(sys->id()));
    const PartitionedRhs r(*sys);
    for (int trial = 0; trial < 100; ++trial) {
      const Vec q = random_q(rng, *sys);
      const Vec p = test::uniform(rng, sys->dim_q());
      const Vec u = test::uniform(rng, sys->dim_u());
      const RhsEval e = r.evaluate(q, p, u);
      EXPECT_LT(rel_error(e.f, r.f(q, p)), 1e-15);
      EXPECT_LT(rel_error(e.g, r.g(q, p, u)), 1e-15);
      EXPECT_LT(rel_error(e.f_q, central_jacobian([&](const Vec& x) { return r.f(x, p); }, q)), 1e-6);
      EXPECT_LT(rel_error(e.f_p, central_jacobian([&](const Vec& x) { return r.f(q, x); }, p)), 1e-6);
      EXPECT_LT(rel_error(e.g_q, central_jacobian([&](const Vec& x) { return r.g(x, p, u); }, q)),
                1e-6);
      EXPECT_LT(rel_error(e.g_p, central_jacobian([&](const Vec& x) { return r.g(q, x, u); }, p)),
                1e-6);
      EXPECT_LT(rel_error(e.g_u, central_jacobian([&](const Vec& x) { return r.g(q, p, x); }, u)),
                1e-6);
    }
  }
}

TEST(Mechanics, LegendreRoundTrip) {
  std::mt19937_64 rng(13);
  InverseLegendreOptions newton;
  newton.use_closed_form = false;
  for (const auto& sys : builtin_models()) {
    for (int trial = 0; trial < 20; ++trial) {
      const Vec q = random_q(rng, *sys);
      const Vec v = test::uniform(rng, sys->dim_q());
      const Vec p = legendre(*sys, q, v);
      EXPECT_LT((inverse_legendre(*sys, q, p) - v).norm(), 1e-12);
      EXPECT_LT((inverse_legendre(*sys, q, p, newton) - v).norm(), 1e-11);
    }
  }
}

TEST(Mechanics, ScalarMassModel) {
  const ScalarMass sm;
  Vec q(1), v(1);
  q << 0.8;
  v << -0.4;
  const double mass = 1 + 0.5 * 0.64;
  EXPECT_NEAR(sm.lagrangian(q, v), 0.5 * mass * 0.16 - 0.5 * 0.64, 1e-15);
  EXPECT_NEAR(legendre(sm, q, v)[0], mass * v[0], 1e-15);
}

TEST(Mechanics, KeplerRejectsCollision) {
  const Kepler k;
  const Vec q = Vec::Zero(2), v = Vec::Ones(2);
  EXPECT_THROW(k.dL_dq(q, v), Error);
}

TEST(Mechanics, ConservedQuantities) {
  const HarmonicOscillator osc;
  EXPECT_NEAR(energy(osc, Vec::Constant(1, 0.6), Vec::Constant(1, 0.8)), 0.5, 1e-15);
  const auto [q, p] = kepler_circular(0.0);
  EXPECT_NEAR(angular_momentum(q, p), 1.0, 1e-15);
  EXPECT_NEAR(energy(Kepler(), q, p), -0.5, 1e-15);
  EXPECT_THROW(angular_momentum(Vec::Ones(3), Vec::Ones(3)), Error);
  const auto [q1, p1] = kepler_circular(1.3);
  EXPECT_NEAR(q1[0], std::cos(1.3), 1e-15);
  EXPECT_NEAR(p1[0], -std::sin(1.3), 1e-15);
}

TEST(Mechanics, QuadraticCostDerivatives) {
  std::mt19937_64 rng(14);
  QuadraticCost::Weights w{0.3, 1.1, 0.7, 2.0, 0.5};
  const QuadraticCost C(2, 2, w, Vec::Constant(2, 0.2), Vec::Constant(2, -0.1));
  for (int trial = 0; trial < 100; ++trial) {
    const Vec q = test::uniform(rng, 2), p = test::uniform(rng, 2), u = test::uniform(rng, 2);
    const RunningGrad g = C.running_grad(q, p, u);
    auto Cq = [&](const Vec& x) { return Vec::Constant(1, C.running(x, p, u)); };
    auto Cp = [&](const Vec& x) { return Vec::Constant(1, C.running(q, x, u)); };
    auto Cu = [&](const Vec& x) { return Vec::Constant(1, C.running(q, p, x)); };
    EXPECT_LT(rel_error(g.dq.transpose(), central_jacobian(Cq, q)), 1e-6);
    EXPECT_LT(rel_error(g.dp.transpose(), central_jacobian(Cp, p)), 1e-6);
    EXPECT_LT(rel_error(g.du.transpose(), central_jacobian(Cu, u)), 1e-6);
    auto gu = [&](const Vec& x) { return C.running_grad(q, p, x).du; };
    EXPECT_LT(rel_error(C.running_duu(q, p, u), central_jacobian(gu, u)), 1e-6);
    const TerminalGrad tg = C.terminal_grad(q, p);
    auto Pq = [&](const Vec& x) { return Vec::Constant(1, C.terminal(x, p)); };
    auto Pp = [&](const Vec& x) { return Vec::Constant(1, C.terminal(q, x)); };
    EXPECT_LT(rel_error(tg.dq.transpose(), central_jacobian(Pq, q)), 1e-6);
    EXPECT_LT(rel_error(tg.dp.transpose(), central_jacobian(Pp, p)), 1e-6);
  }
}

TEST(Models, Registry) {
  EXPECT_EQ(model_ids().size(), 4u);
  for (const auto& id : model_ids()) EXPECT_EQ(make_model(id)->id(), id);
  EXPECT_THROW(make_model("pendulum"), Error);
}
