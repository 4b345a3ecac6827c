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
#include <random>

#include "hovi/quadrature.hpp"

namespace hovi::test {

// Kept separate from the library's fd_jacobian so the two can check each other.
inline Mat central_jacobian(const std::function<Vec(const Vec&)>& fn, const Vec& x,
                            double step = 1e-6) {
  const Vec f0 = fn(x);
  Mat J(f0.size(), x.size());
  for (int j = 0; j < x.size(); ++j) {
    const double e = step * std::max(1.0, std::abs(x[j]));
    Vec xp = x, xm = x;
    xp[j] += e;
    xm[j] -= e;
    J.col(j) = (fn(xp) - fn(xm)) / (2 * e);
  }
  return J;
}

inline double rel_error(const Mat& a, const Mat& b) {
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

inline Vec uniform(std::mt19937_64& rng, int n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

}  // namespace hovi::test
