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

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hovi/mechanics.hpp"

namespace hovi {

/// L = v^2/2 - q^2/2, F = u.
class HarmonicOscillator final : public MechanicalSystem {
 public:
  std::string_view id() const override { return "harmonic"; }
  int dim_q() const override { return 1; }
  int dim_u() const override { return 1; }
  double lagrangian(const Vec& q, const Vec& v) const override;
  Vec dL_dq(const Vec& q, const Vec& v) const override;
  Vec dL_dv(const Vec& q, const Vec& v) const override;
  Mat d2L_dv2(const Vec& q, const Vec& v) const override;
  Mat d2L_dvdq(const Vec& q, const Vec& v) const override;
  Mat d2L_dq2(const Vec& q, const Vec& v) const override;
  Vec force(const Vec& q, const Vec& v, const Vec& u) const override;
  Mat force_dq(const Vec& q, const Vec& v, const Vec& u) const override;
  Mat force_dv(const Vec& q, const Vec& v, const Vec& u) const override;
  Mat force_du(const Vec& q, const Vec& v) const override;
  std::optional<Vec> velocity_closed_form(const Vec& q, const Vec& p) const override;
};

/// Planar two-body problem in relative coordinates with unit masses:
/// L = |v|^2/2 + 1/|q|, F = u. Configurations with |q| < 1e-8 are rejected.
class Kepler final : public MechanicalSystem {
 public:
  std::string_view id() const override { return "kepler"; }
  int dim_q() const override { return 2; }
  int dim_u() const override { return 2; }
  double lagrangian(const Vec& q, const Vec& v) const override;
  Vec dL_dq(const Vec& q, const Vec& v) const override;
  Vec dL_dv(const Vec& q, const Vec& v) const override;
  Mat d2L_dv2(const Vec& q, const Vec& v) const override;
  Mat d2L_dvdq(const Vec& q, const Vec& v) const override;
  Mat d2L_dq2(const Vec& q, const Vec& v) const override;
  Vec force(const Vec& q, const Vec& v, const Vec& u) const override;
  Mat force_dq(const Vec& q, const Vec& v, const Vec& u) const override;
  Mat force_dv(const Vec& q, const Vec& v, const Vec& u) const override;
  Mat force_du(const Vec& q, const Vec& v) const override;
  std::optional<Vec> velocity_closed_form(const Vec& q, const Vec& p) const override;
};

/// L = v^2/2 + q, F = u, so q'' = 1 + u.
class HagerModel final : public MechanicalSystem {
 public:
  std::string_view id() const override { return "hager"; }
  int dim_q() const override { return 1; }
  int dim_u() const override { return 1; }
  double lagrangian(const Vec& q, const Vec& v) const override;
  Vec dL_dq(const Vec& q, const Vec& v) const override;
  Vec dL_dv(const Vec& q, const Vec& v) const override;
  Mat d2L_dv2(const Vec& q, const Vec& v) const override;
  Mat d2L_dvdq(const Vec& q, const Vec& v) const override;
  Mat d2L_dq2(const Vec& q, const Vec& v) const override;
  Vec force(const Vec& q, const Vec& v, const Vec& u) const override;
  Mat force_dq(const Vec& q, const Vec& v, const Vec& u) const override;
  Mat force_dv(const Vec& q, const Vec& v, const Vec& u) const override;
  Mat force_du(const Vec& q, const Vec& v) const override;
  std::optional<Vec> velocity_closed_form(const Vec& q, const Vec& p) const override;
};

/// L = mass(q) |v|^2 / 2 - V(q) with mass(q) = 1 + |q|^2/2, V(q) = |q|^2/2,
/// F = u.
class ScalarMass final : public MechanicalSystem {
 public:
  explicit ScalarMass(int dim = 1) : dim_(dim) {}

  static double mass(const Vec& q) { return 1.0 + 0.5 * q.squaredNorm(); }

  std::string_view id() const override { return "scalarmass"; }
  int dim_q() const override { return dim_; }
  int dim_u() const override { return dim_; }
  double lagrangian(const Vec& q, const Vec& v) const override;
  Vec dL_dq(const Vec& q, const Vec& v) const override;
  Vec dL_dv(const Vec& q, const Vec& v) const override;
  Mat d2L_dv2(const Vec& q, const Vec& v) const override;
  Mat d2L_dvdq(const Vec& q, const Vec& v) const override;
  Mat d2L_dq2(const Vec& q, const Vec& v) const override;
  Vec force(const Vec& q, const Vec& v, const Vec& u) const override;
  Mat force_dq(const Vec& q, const Vec& v, const Vec& u) const override;
  Mat force_dv(const Vec& q, const Vec& v, const Vec& u) const override;
  Mat force_du(const Vec& q, const Vec& v) const override;
  std::optional<Vec> velocity_closed_form(const Vec& q, const Vec& p) const override;

 private:
  int dim_;
};

/// Model ids in catalog order: harmonic, kepler, hager, scalarmass.
std::vector<std::string> model_ids();

/// Throws UnknownModel for ids outside model_ids().
std::shared_ptr<const MechanicalSystem> make_model(std::string_view id);

std::vector<std::shared_ptr<const MechanicalSystem>> builtin_models();

/// Total energy p.v - L at the state (q, p).
double energy(const MechanicalSystem& system, const Vec& q, const Vec& p);

/// q x p for a planar configuration.
double angular_momentum(const Vec& q, const Vec& p);

/// Exact unforced harmonic-oscillator flow.
std::pair<Vec, Vec> harmonic_flow(double t, const Vec& q0, const Vec& p0);

/// Unit circular Kepler orbit starting at q = (1, 0), p = (0, 1).
std::pair<Vec, Vec> kepler_circular(double t);

}  // namespace hovi
