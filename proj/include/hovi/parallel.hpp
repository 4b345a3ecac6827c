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

#include "hovi/quadrature.hpp"

namespace hovi {

/// Execution policy for the data-parallel kernels. Serial is the reference.
enum class Exec { Serial, Parallel };

/// Thread count used by Exec::Parallel; 0 means the OpenMP default.
void set_parallel_jobs(int jobs);
int parallel_jobs();

using VecFn = std::function<Vec(const Vec&)>;

/// Central-difference Jacobian, one column per coordinate with step
/// rel_step * max(1, |x_j|). fn must be reentrant under Exec::Parallel.
Mat fd_jacobian(const VecFn& fn, const Vec& x, double rel_step = 1e-6,
                Exec exec = Exec::Serial);

/// Runs body(i) for i in [0, count). The first exception thrown by any
/// iteration is rethrown after the loop.
void for_each_index(int count, const std::function<void(int)>& body, Exec exec = Exec::Serial);

}  // namespace hovi
