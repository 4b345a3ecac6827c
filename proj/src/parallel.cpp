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
#include "hovi/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>

#include <omp.h>

namespace hovi {
namespace {

std::atomic<int> g_jobs{0};

int thread_count() {
  const int jobs = g_jobs.load();
  return jobs > 0 ? jobs : omp_get_max_threads();
}

}  // namespace

void set_parallel_jobs(int jobs) { g_jobs.store(std::max(0, jobs)); }
int parallel_jobs() { return thread_count(); }

void for_each_index(int count, const std::function<void(int)>& body, Exec exec) {
  if (exec == Exec::Serial) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
  for (int i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

Mat fd_jacobian(const VecFn& fn, const Vec& x, double rel_step, Exec exec) {
  const Vec f0 = fn(x);
  Mat jac(f0.size(), x.size());
  for_each_index(
      static_cast<int>(x.size()),
      [&](int j) {
        const double step = rel_step * std::max(1.0, std::abs(x[j]));
        Vec xp = x;
        Vec xm = x;
        xp[j] += step;
        xm[j] -= step;
        jac.col(j) = (fn(xp) - fn(xm)) / (xp[j] - xm[j]);
      },
      exec);
  return jac;
}

}  // namespace hovi
