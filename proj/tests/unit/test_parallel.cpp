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
#include <stdexcept>

#include "hovi/parallel.hpp"

using namespace hovi;

namespace {

Vec field(const Vec& x) {
  Vec y(3);
  y << std::sin(x[0]) * x[1], x[0] * x[0] + std::exp(x[1]), x[1] * x[1] * x[1];
  return y;
}

Mat field_jacobian(const Vec& x) {
  Mat J(3, 2);
  J << std::cos(x[0]) * x[1], std::sin(x[0]), 2 * x[0], std::exp(x[1]), 0, 3 * x[1] * x[1];
  return J;
}

}  // namespace

TEST(Parallel, FdJacobianMatchesAnalytic) {
  Vec x(2);
  x << 0.3, -1.2;
  const Mat J = fd_jacobian(field, x);
  EXPECT_LT((J - field_jacobian(x)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Parallel, SerialAndParallelAreIdentical) {
  set_parallel_jobs(4);
  Vec x = Vec::LinSpaced(40, -1.0, 1.0);
  auto fn = [](const Vec& z) { return Vec(z.array().sin() * z.sum()); };
  const Mat a = fd_jacobian(fn, x, 1e-6, Exec::Serial);
  const Mat b = fd_jacobian(fn, x, 1e-6, Exec::Parallel);
  EXPECT_EQ(a, b);
  std::vector<double> out(100);
  for_each_index(100, [&](int i) { out[i] = std::sqrt(i); }, Exec::Parallel);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(out[i], std::sqrt(i));
  set_parallel_jobs(0);
}

TEST(Parallel, ExceptionsPropagate) {
  for (Exec e : {Exec::Serial, Exec::Parallel}) {
    EXPECT_THROW(for_each_index(
                     10, [](int i) { if (i == 7) throw std::runtime_error("boom"); }, e),
                 std::runtime_error);
  }
  set_parallel_jobs(3);
  EXPECT_EQ(parallel_jobs(), 3);
  set_parallel_jobs(0);
}
