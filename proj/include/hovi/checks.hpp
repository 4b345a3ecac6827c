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

#include <cstdint>
#include <utility>
#include <vector>

#include "hovi/parallel.hpp"
#include "hovi/quadrature.hpp"

namespace hovi {

/// Leap-frog step of q'' = -q with unit mass.
std::pair<Vec, Vec> verlet_step(const Vec& q0, const Vec& p0, double h);

struct VerletSample {
  double q0 = 0.0, p0 = 0.0;
  double sg_dev = 0.0, sprk_dev = 0.0;  ///< max over q1, p1
};

struct VerletReport {
  std::vector<VerletSample> samples;
  double max_dev = 0.0;
};

/// One sG and one spRK step (Lobatto, s = 2) of the harmonic oscillator
/// from samples uniform points in [-1,1]^2, compared with verlet_step.
VerletReport verlet_check(int samples, std::uint64_t seed, double h = 0.1,
                          Exec exec = Exec::Serial);

/// Residuals of the algebraic identities of one rule's coefficient tables.
struct CoefficientIdentities {
  double weight_sum = 0.0;     ///< |sum b - 1|
  double sprk_conjugacy = 0.0; ///< max |b_i abar_ij + b_j a_ji - b_i b_j|
  double sg_conjugacy = 0.0;   ///< max |b_i a_ij + b_j abar_ji|
  double alpha_sum = 0.0;      ///< |sum alpha - 1|
  double beta_sum = 0.0;       ///< |sum beta - 1|
  bool sg_defined = true;      ///< false for a single node; the sG fields are then zero
};

CoefficientIdentities coefficient_identities(const CollocationScheme& scheme);

}  // namespace hovi
