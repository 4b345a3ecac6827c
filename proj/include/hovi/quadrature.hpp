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

#include <string_view>

#include <Eigen/Dense>

namespace hovi {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Family { GaussLegendre, GaussLobatto, Radau, Chebyshev };

/// Accepts "gauss", "legendre", "gauss-legendre", "lobatto", "gauss-lobatto",
/// "radau", "chebyshev" (case-insensitive).
Family parse_family(std::string_view name);
std::string_view family_name(Family family);

/// Smallest admissible stage count: 2 for the endpoint families.
int min_stages(Family family);

/// Largest monomial degree integrated exactly by the s-point rule.
int exactness_degree(Family family, int s);

/// Nodes and weights of one quadrature rule on [0,1].
///
/// Radau is the right variant (c_s = 1). Chebyshev is the
/// Chebyshev-Gauss-Lobatto point set with Clenshaw-Curtis weights.
struct CollocationScheme {
  Family family = Family::GaussLegendre;
  int s = 0;
  Vec c;  ///< strictly increasing nodes
  Vec b;  ///< weights, sum to one
};

/// Throws UnsupportedStageCount when s < min_stages(family).
CollocationScheme make_scheme(Family family, int s);

/// Same family when s is admissible, otherwise the s-point Gauss rule
/// (the midpoint rule for s = 1). Used for auxiliary control and cost rules.
CollocationScheme make_auxiliary_rule(Family family, int s);

/// Lagrange basis polynomial l^j over the nodes c (j is 0-based).
double lagrange_eval(const Vec& c, int j, double t);
double lagrange_deriv(const Vec& c, int j, double t);

/// Antiderivative of l^j from 0 to t, exact for the degree s-1 integrand.
double lagrange_integral(const Vec& c, int j, double t);

/// (i,j) = l^j(x_i): maps values at c to values at x.
Mat interpolation_matrix(const Vec& c, const Vec& x);

/// Coefficient tables of the partitioned Runge-Kutta scheme.
struct SprkCoefficients {
  Mat a;      ///< a(i,j) = integral of l^j over [0, c_i]
  Mat a_bar;  ///< conjugate table
  Vec b_bar;  ///< equals b
};

/// Coefficient tables of the Galerkin scheme.
struct SgCoefficients {
  Mat a;      ///< a(i,j) = derivative of l^j at c_i
  Mat a_bar;  ///< b_i a_ij + b_j a_bar_ji = 0
  Vec b_bar;
  Vec alpha;  ///< l^j(0)
  Vec beta;   ///< l^j(1)
  double gamma = 0.0;
};

SprkCoefficients sprk_coefficients(const CollocationScheme& scheme);
SgCoefficients sg_coefficients(const CollocationScheme& scheme);

}  // namespace hovi
