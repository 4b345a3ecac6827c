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
#include "hovi/models.hpp"

#include <cmath>

#include "hovi/error.hpp"

namespace hovi {
namespace {

Mat zeros(int rows, int cols) { return Mat::Zero(rows, cols); }
Mat eye(int n) { return Mat::Identity(n, n); }

}  // namespace

// harmonic

double HarmonicOscillator::lagrangian(const Vec& q, const Vec& v) const {
  return 0.5 * v.squaredNorm() - 0.5 * q.squaredNorm();
}
Vec HarmonicOscillator::dL_dq(const Vec& q, const Vec&) const { return -q; }
Vec HarmonicOscillator::dL_dv(const Vec&, const Vec& v) const { return v; }
Mat HarmonicOscillator::d2L_dv2(const Vec&, const Vec&) const { return eye(1); }
Mat HarmonicOscillator::d2L_dvdq(const Vec&, const Vec&) const { return zeros(1, 1); }
Mat HarmonicOscillator::d2L_dq2(const Vec&, const Vec&) const { return -eye(1); }
Vec HarmonicOscillator::force(const Vec&, const Vec&, const Vec& u) const { return u; }
Mat HarmonicOscillator::force_dq(const Vec&, const Vec&, const Vec&) const { return zeros(1, 1); }
Mat HarmonicOscillator::force_dv(const Vec&, const Vec&, const Vec&) const { return zeros(1, 1); }
Mat HarmonicOscillator::force_du(const Vec&, const Vec&) const { return eye(1); }
std::optional<Vec> HarmonicOscillator::velocity_closed_form(const Vec&, const Vec& p) const {
  return p;
}

// kepler

namespace {

double checked_radius(const Vec& q) {
  const double r = q.norm();
  if (r < 1e-8) throw Error(ErrorKind::InvalidArgument, "Kepler configuration at collision");
  return r;
}

}  // namespace

double Kepler::lagrangian(const Vec& q, const Vec& v) const {
  return 0.5 * v.squaredNorm() + 1.0 / checked_radius(q);
}
Vec Kepler::dL_dq(const Vec& q, const Vec&) const {
  const double r = checked_radius(q);
  return -q / (r * r * r);
}
Vec Kepler::dL_dv(const Vec&, const Vec& v) const { return v; }
Mat Kepler::d2L_dv2(const Vec&, const Vec&) const { return eye(2); }
Mat Kepler::d2L_dvdq(const Vec&, const Vec&) const { return zeros(2, 2); }
Mat Kepler::d2L_dq2(const Vec& q, const Vec&) const {
  const double r = checked_radius(q);
  const double r3 = r * r * r;
  return -eye(2) / r3 + 3.0 * q * q.transpose() / (r3 * r * r);
}
Vec Kepler::force(const Vec&, const Vec&, const Vec& u) const { return u; }
Mat Kepler::force_dq(const Vec&, const Vec&, const Vec&) const { return zeros(2, 2); }
Mat Kepler::force_dv(const Vec&, const Vec&, const Vec&) const { return zeros(2, 2); }
Mat Kepler::force_du(const Vec&, const Vec&) const { return eye(2); }
std::optional<Vec> Kepler::velocity_closed_form(const Vec&, const Vec& p) const { return p; }

// hager

double HagerModel::lagrangian(const Vec& q, const Vec& v) const {
  return 0.5 * v.squaredNorm() + q[0];
}
Vec HagerModel::dL_dq(const Vec&, const Vec&) const { return Vec::Ones(1); }
Vec HagerModel::dL_dv(const Vec&, const Vec& v) const { return v; }
Mat HagerModel::d2L_dv2(const Vec&, const Vec&) const { return eye(1); }
Mat HagerModel::d2L_dvdq(const Vec&, const Vec&) const { return zeros(1, 1); }
Mat HagerModel::d2L_dq2(const Vec&, const Vec&) const { return zeros(1, 1); }
Vec HagerModel::force(const Vec&, const Vec&, const Vec& u) const { return u; }
Mat HagerModel::force_dq(const Vec&, const Vec&, const Vec&) const { return zeros(1, 1); }
Mat HagerModel::force_dv(const Vec&, const Vec&, const Vec&) const { return zeros(1, 1); }
Mat HagerModel::force_du(const Vec&, const Vec&) const { return eye(1); }
std::optional<Vec> HagerModel::velocity_closed_form(const Vec&, const Vec& p) const { return p; }

// scalar mass

double ScalarMass::lagrangian(const Vec& q, const Vec& v) const {
  return 0.5 * mass(q) * v.squaredNorm() - 0.5 * q.squaredNorm();
}
Vec ScalarMass::dL_dq(const Vec& q, const Vec& v) const {
  // grad mass = q, grad V = q
  return 0.5 * v.squaredNorm() * q - q;
}
Vec ScalarMass::dL_dv(const Vec& q, const Vec& v) const { return mass(q) * v; }
Mat ScalarMass::d2L_dv2(const Vec& q, const Vec&) const { return mass(q) * eye(dim_); }
Mat ScalarMass::d2L_dvdq(const Vec& q, const Vec& v) const { return v * q.transpose(); }
Mat ScalarMass::d2L_dq2(const Vec&, const Vec& v) const {
  return (0.5 * v.squaredNorm() - 1.0) * eye(dim_);
}
Vec ScalarMass::force(const Vec&, const Vec&, const Vec& u) const { return u; }
Mat ScalarMass::force_dq(const Vec&, const Vec&, const Vec&) const { return zeros(dim_, dim_); }
Mat ScalarMass::force_dv(const Vec&, const Vec&, const Vec&) const { return zeros(dim_, dim_); }
Mat ScalarMass::force_du(const Vec&, const Vec&) const { return eye(dim_); }
std::optional<Vec> ScalarMass::velocity_closed_form(const Vec& q, const Vec& p) const {
  return p / mass(q);
}

// catalog

std::vector<std::string> model_ids() { return {"harmonic", "kepler", "hager", "scalarmass"}; }

std::shared_ptr<const MechanicalSystem> make_model(std::string_view id) {
  if (id == "harmonic") return std::make_shared<HarmonicOscillator>();
  if (id == "kepler") return std::make_shared<Kepler>();
  if (id == "hager") return std::make_shared<HagerModel>();
  if (id == "scalarmass") return std::make_shared<ScalarMass>();
  throw Error(ErrorKind::UnknownModel, "no model named '" + std::string(id) + "'");
}

std::vector<std::shared_ptr<const MechanicalSystem>> builtin_models() {
  std::vector<std::shared_ptr<const MechanicalSystem>> out;
  for (const auto& id : model_ids()) out.push_back(make_model(id));
  return out;
}

double energy(const MechanicalSystem& system, const Vec& q, const Vec& p) {
  const Vec v = inverse_legendre(system, q, p);
  return p.dot(v) - system.lagrangian(q, v);
}

double angular_momentum(const Vec& q, const Vec& p) {
  if (q.size() != 2 || p.size() != 2) {
    throw Error(ErrorKind::DimensionMismatch, "angular momentum needs a planar state");
  }
  return q[0] * p[1] - q[1] * p[0];
}

std::pair<Vec, Vec> harmonic_flow(double t, const Vec& q0, const Vec& p0) {
  const double c = std::cos(t);
  const double s = std::sin(t);
  return {c * q0 + s * p0, -s * q0 + c * p0};
}

std::pair<Vec, Vec> kepler_circular(double t) {
  Vec q(2), p(2);
  q << std::cos(t), std::sin(t);
  p << -std::sin(t), std::cos(t);
  return {q, p};
}

}  // namespace hovi
