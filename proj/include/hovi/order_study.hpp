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

#include <functional>
#include <memory>
#include <string_view>
#include <utility>
#include <vector>

#include "hovi/integrators.hpp"
#include "hovi/parallel.hpp"

namespace hovi {

/// An initial value problem with a reference state at the final time.
struct OrderProblem {
  std::shared_ptr<const MechanicalSystem> system;
  Vec q0, p0;
  double T = 1.0;
  ControlFn control;  ///< may be empty (no control)
  std::function<std::pair<Vec, Vec>()> reference;
};

/// Built-in problems: harmonic (exact flow from (1,0)), kepler (unit
/// circular orbit), hager (optimal control fed open loop, exact optimum) and
/// scalarmass (reference from a fine 4-stage Gauss spRK run).
OrderProblem order_problem(std::string_view model, double T);

struct OrderStudy {
  std::vector<double> h;
  std::vector<double> error;  ///< max of |q_N - q(T)|, |p_N - p(T)| (infinity norms)
  double slope = 0.0;
};

/// Least-squares slope of log(y) against log(x).
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

/// points step sizes from hmax down to hmin, equally spaced in log h.
std::vector<double> geometric_steps(double hmax, double hmin, int points);

/// Integrates once per step size (each T/h must be an integer) and fits
/// the global error slope. Throws DegenerateFit when an error drops below
/// 1e-13 and InvalidArgument for fewer than three or non-geometric steps.
OrderStudy measure_order(const OrderProblem& problem, const StepperConfig& config,
                         const std::vector<double>& h_list, Exec exec = Exec::Serial);

}  // namespace hovi
