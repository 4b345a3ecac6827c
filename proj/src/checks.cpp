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
#include "hovi/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hovi/integrators.hpp"
#include "hovi/models.hpp"

namespace hovi {

std::pair<Vec, Vec> verlet_step(const Vec& q0, const Vec& p0, double h) {
  const Vec p_half = p0 - 0.5 * h * q0;
  const Vec q1 = q0 + h * p_half;
  const Vec p1 = p_half - 0.5 * h * q1;
  return {q1, p1};
}

VerletReport verlet_check(int samples, std::uint64_t seed, double h, Exec exec) {
  VerletReport out;
  out.samples.resize(std::max(samples, 0));
  // draw serially so the points do not depend on the thread count
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (VerletSample& s : out.samples) {
    s.q0 = unit(rng);
    s.p0 = unit(rng);
  }
  const HarmonicOscillator osc;
  StepperConfig cfg;
  cfg.scheme = make_scheme(Family::GaussLobatto, 2);
  const Mat U = Mat::Zero(2, osc.dim_u());
  for_each_index(
      samples,
      [&](int i) {
        VerletSample& s = out.samples[i];
        const Vec q0 = Vec::Constant(1, s.q0), p0 = Vec::Constant(1, s.p0);
        const auto [q1, p1] = verlet_step(q0, p0, h);
        auto dev = [&](const StepResult& r) {
          return std::max((r.q1 - q1).cwiseAbs().maxCoeff(), (r.p1 - p1).cwiseAbs().maxCoeff());
        };
        s.sg_dev = dev(sg_step(osc, cfg, q0, p0, U, h));
        s.sprk_dev = dev(sprk_step(osc, cfg, q0, p0, U, h));
      },
      exec);
  for (const VerletSample& s : out.samples) {
    out.max_dev = std::max({out.max_dev, s.sg_dev, s.sprk_dev});
  }
  return out;
}

CoefficientIdentities coefficient_identities(const CollocationScheme& sc) {
  CoefficientIdentities out;
  const SprkCoefficients rk = sprk_coefficients(sc);
  const Vec& b = sc.b;
  out.weight_sum = std::abs(b.sum() - 1.0);
  for (int i = 0; i < sc.s; ++i) {
    for (int j = 0; j < sc.s; ++j) {
      out.sprk_conjugacy = std::max(
          out.sprk_conjugacy,
          std::abs(b[i] * rk.a_bar(i, j) + rk.b_bar[j] * rk.a(j, i) - b[i] * rk.b_bar[j]));
    }
  }
  out.sg_defined = sc.c[0] != sc.c[sc.s - 1];
  if (!out.sg_defined) return out;
  const SgCoefficients sg = sg_coefficients(sc);
  for (int i = 0; i < sc.s; ++i) {
    for (int j = 0; j < sc.s; ++j) {
      out.sg_conjugacy = std::max(out.sg_conjugacy,
                                  std::abs(b[i] * sg.a(i, j) + sg.b_bar[j] * sg.a_bar(j, i)));
    }
  }
  out.alpha_sum = std::abs(sg.alpha.sum() - 1.0);
  out.beta_sum = std::abs(sg.beta.sum() - 1.0);
  return out;
}

}  // namespace hovi
