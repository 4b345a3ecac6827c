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
#include "hovi/order_study.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hovi/error.hpp"
#include "hovi/hager.hpp"
#include "hovi/models.hpp"

namespace hovi {

OrderProblem order_problem(std::string_view model, double T) {
  if (!(T > 0.0)) throw Error(ErrorKind::InvalidArgument, "horizon must be positive");
  OrderProblem pr;
  pr.system = make_model(model);
  pr.T = T;
  if (model == "harmonic") {
    pr.q0 = Vec::Ones(1);
    pr.p0 = Vec::Zero(1);
    const Vec q0 = pr.q0, p0 = pr.p0;
    pr.reference = [=] { return harmonic_flow(T, q0, p0); };
  } else if (model == "kepler") {
    std::tie(pr.q0, pr.p0) = kepler_circular(0.0);
    pr.reference = [=] { return kepler_circular(T); };
  } else if (model == "hager") {
    const HagerExact ex = hager_exact(T);
    pr.q0 = Vec::Zero(1);
    pr.p0 = Vec::Zero(1);
    pr.control = [ex](double t) { return Vec::Constant(1, ex.u(t)); };
    pr.reference = [ex, T] { return std::pair<Vec, Vec>(Vec::Constant(1, ex.q(T)), Vec::Constant(1, ex.p(T))); };
  } else {
    pr.q0 = Vec::Constant(1, 0.5);
    pr.p0 = Vec::Constant(1, 0.3);
    auto system = pr.system;
    const Vec q0 = pr.q0, p0 = pr.p0;
    pr.reference = [system, q0, p0, T] {
      StepperConfig cfg;
      cfg.kind = SchemeKind::Sprk;
      cfg.scheme = make_scheme(Family::GaussLegendre, 4);
      const DiscreteTrajectory tr = integrate(*system, cfg, q0, p0, nullptr, T, 400);
      return std::pair<Vec, Vec>(tr.q.back(), tr.p.back());
    };
  }
  return pr;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "slope fit needs matching samples");
  }
  const int n = static_cast<int>(x.size());
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::DegenerateFit, "step sizes must differ");
  return sxy / sxx;
}

std::vector<double> geometric_steps(double hmax, double hmin, int points) {
  if (points < 2 || !(hmin > 0.0) || !(hmax > hmin)) {
    throw Error(ErrorKind::InvalidArgument, "need hmax > hmin > 0 and at least two points");
  }
  std::vector<double> h(points);
  const double ratio = std::pow(hmin / hmax, 1.0 / (points - 1));
  for (int i = 0; i < points; ++i) h[i] = hmax * std::pow(ratio, i);
  h.back() = hmin;
  return h;
}

OrderStudy measure_order(const OrderProblem& problem, const StepperConfig& config,
                         const std::vector<double>& h_list, Exec exec) {
  if (h_list.size() < 3) throw Error(ErrorKind::InvalidArgument, "order study needs three step sizes");
  const double ratio = h_list[1] / h_list[0];
  for (size_t i = 1; i < h_list.size(); ++i) {
    if (!(h_list[i] > 0.0) || std::abs(h_list[i] / h_list[i - 1] - ratio) > 1e-6 * ratio) {
      throw Error(ErrorKind::InvalidArgument, "step sizes must form a geometric sequence");
    }
  }
  std::vector<int> steps(h_list.size());
  for (size_t i = 0; i < h_list.size(); ++i) {
    const double count = problem.T / h_list[i];
    steps[i] = static_cast<int>(std::lround(count));
    if (steps[i] < 1 || std::abs(count - steps[i]) > 1e-8 * count) {
      throw Error(ErrorKind::InvalidArgument,
                  "T/h is not an integer for h = " + std::to_string(h_list[i]));
    }
  }
  const auto [q_ref, p_ref] = problem.reference();

  OrderStudy out;
  out.h = h_list;
  out.error.assign(h_list.size(), 0.0);
  for_each_index(
      static_cast<int>(h_list.size()),
      [&](int i) {
        const DiscreteTrajectory tr = integrate(*problem.system, config, problem.q0, problem.p0,
                                                problem.control, problem.T, steps[i]);
        out.error[i] = std::max((tr.q.back() - q_ref).lpNorm<Eigen::Infinity>(),
                                (tr.p.back() - p_ref).lpNorm<Eigen::Infinity>());
      },
      exec);
  for (double e : out.error) {
    if (!(e >= 1e-13)) {
      throw Error(ErrorKind::DegenerateFit, "error at the floating-point floor; enlarge h or T", e);
    }
  }
  out.slope = fit_slope(out.h, out.error);
  return out;
}

}  // namespace hovi
