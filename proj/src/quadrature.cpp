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
#include "hovi/quadrature.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "hovi/error.hpp"

namespace hovi {
namespace {

constexpr double kNodeTol = 1e-14;
constexpr int kMaxNewton = 100;

struct LegendreValues {
  double p;       // P_n(x)
  double p_prev;  // P_{n-1}(x)
  double dp;      // P_n'(x), valid for |x| < 1
};

LegendreValues legendre(int n, double x) {
  double p_prev = 1.0;
  double p = x;
  if (n == 0) return {1.0, 0.0, 0.0};
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
    p_prev = p;
    p = next;
  }
  const double dp = n * (x * p - p_prev) / (x * x - 1.0);
  return {p, p_prev, dp};
}

// Newton on g(x) from x0 until the update falls below the node tolerance.
template <class Fn>
double newton_root(Fn&& value_and_slope, double x0) {
  double x = x0;
  for (int it = 0; it < kMaxNewton; ++it) {
    const auto [g, dg] = value_and_slope(x);
    const double dx = g / dg;
    x -= dx;
    if (std::abs(dx) <= kNodeTol) break;
  }
  return x;
}

// Nodes on [-1,1] ascending together with weights summing to 2.
struct ReferenceRule {
  std::vector<double> x;
  std::vector<double> w;
};

ReferenceRule gauss_legendre(int s) {
  ReferenceRule rule;
  for (int i = 0; i < s; ++i) {
    const double guess = -std::cos(std::numbers::pi * (i + 0.75) / (s + 0.5));
    const double x = newton_root(
        [s](double t) {
          const auto v = legendre(s, t);
          return std::pair{v.p, v.dp};
        },
        guess);
    const double dp = legendre(s, x).dp;
    rule.x.push_back(x);
    rule.w.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  return rule;
}

ReferenceRule gauss_lobatto(int s) {
  const int n = s - 1;
  ReferenceRule rule;
  rule.x.push_back(-1.0);
  rule.w.push_back(2.0 / (n * (n + 1.0)));
  for (int i = n - 1; i >= 1; --i) {
    const double guess = std::cos(std::numbers::pi * i / n);
    // Roots of P_n': Newton with P_n'' from the Legendre ODE.
    const double x = newton_root(
        [n](double t) {
          const auto v = legendre(n, t);
          const double d2p = (2.0 * t * v.dp - n * (n + 1.0) * v.p) / (1.0 - t * t);
          return std::pair{v.dp, d2p};
        },
        guess);
    const double p = legendre(n, x).p;
    rule.x.push_back(x);
    rule.w.push_back(2.0 / (n * (n + 1.0) * p * p));
  }
  rule.x.push_back(1.0);
  rule.w.push_back(2.0 / (n * (n + 1.0)));
  return rule;
}

// Right Radau: roots of P_s - P_{s-1}, including x = 1.
ReferenceRule radau_right(int s) {
  ReferenceRule rule;
  if (s == 1) {
    rule.x = {1.0};
    rule.w = {2.0};
    return rule;
  }
  for (int i = s - 1; i >= 1; --i) {
    const double guess = std::cos(2.0 * std::numbers::pi * i / (2.0 * s - 1.0));
    const double x = newton_root(
        [s](double t) {
          const auto hi = legendre(s, t);
          const auto lo = legendre(s - 1, t);
          return std::pair{hi.p - lo.p, hi.dp - lo.dp};
        },
        guess);
    const double p = legendre(s - 1, x).p;
    rule.x.push_back(x);
    rule.w.push_back((1.0 + x) / (s * s * p * p));
  }
  rule.x.push_back(1.0);
  rule.w.push_back(2.0 / (s * s));
  return rule;
}

// Chebyshev-Gauss-Lobatto points with Clenshaw-Curtis weights.
ReferenceRule clenshaw_curtis(int s) {
  const int n = s - 1;
  ReferenceRule rule;
  rule.x.resize(s);
  rule.w.resize(s);
  for (int i = 0; i <= n; ++i) {
    const double theta = std::numbers::pi * i / n;
    double w;
    if (i == 0 || i == n) {
      w = (n % 2 == 0) ? 1.0 / (n * n - 1.0) : 1.0 / (n * n);
    } else {
      double v = 1.0;
      if (n % 2 == 0) {
        for (int k = 1; k < n / 2; ++k) v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
        v -= std::cos(n * theta) / (n * n - 1.0);
      } else {
        for (int k = 1; k <= (n - 1) / 2; ++k) v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
      }
      w = 2.0 * v / n;
    }
    // cos(theta) decreases with i; store ascending.
    rule.x[n - i] = (i == 0) ? 1.0 : (i == n ? -1.0 : std::cos(theta));
    rule.w[n - i] = w;
  }
  // Symmetrize against the cosine round-off.
  for (int i = 0; i < s / 2; ++i) {
    const double x = 0.5 * (rule.x[s - 1 - i] - rule.x[i]);
    rule.x[i] = -x;
    rule.x[s - 1 - i] = x;
  }
  if (s % 2 == 1) rule.x[s / 2] = 0.0;
  return rule;
}

std::string lower(std::string_view in) {
  std::string out(in);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

}  // namespace

Family parse_family(std::string_view name) {
  const std::string key = lower(name);
  if (key == "gauss" || key == "legendre" || key == "gauss-legendre" || key == "gausslegendre") {
    return Family::GaussLegendre;
  }
  if (key == "lobatto" || key == "gauss-lobatto" || key == "gausslobatto") return Family::GaussLobatto;
  if (key == "radau") return Family::Radau;
  if (key == "chebyshev" || key == "cheb") return Family::Chebyshev;
  throw Error(ErrorKind::InvalidArgument, "unknown quadrature family '" + std::string(name) + "'");
}

std::string_view family_name(Family family) {
  switch (family) {
    case Family::GaussLegendre: return "gauss";
    case Family::GaussLobatto: return "lobatto";
    case Family::Radau: return "radau";
    case Family::Chebyshev: return "chebyshev";
  }
  return "?";
}

int min_stages(Family family) {
  return (family == Family::GaussLobatto || family == Family::Chebyshev) ? 2 : 1;
}

int exactness_degree(Family family, int s) {
  switch (family) {
    case Family::GaussLegendre: return 2 * s - 1;
    case Family::GaussLobatto: return 2 * s - 3;
    case Family::Radau: return 2 * s - 2;
    // Interpolatory on s symmetric points: odd s picks up one extra degree.
    case Family::Chebyshev: return (s % 2 == 1) ? s : s - 1;
  }
  return 0;
}

CollocationScheme make_scheme(Family family, int s) {
  if (s < min_stages(family)) {
    throw Error(ErrorKind::UnsupportedStageCount,
                std::string(family_name(family)) + " needs at least " +
                    std::to_string(min_stages(family)) + " stages, got " + std::to_string(s));
  }
  ReferenceRule rule;
  switch (family) {
    case Family::GaussLegendre: rule = gauss_legendre(s); break;
    case Family::GaussLobatto: rule = gauss_lobatto(s); break;
    case Family::Radau: rule = radau_right(s); break;
    case Family::Chebyshev: rule = clenshaw_curtis(s); break;
  }
  CollocationScheme scheme;
  scheme.family = family;
  scheme.s = s;
  scheme.c.resize(s);
  scheme.b.resize(s);
  for (int i = 0; i < s; ++i) {
    scheme.c[i] = 0.5 * (rule.x[i] + 1.0);
    scheme.b[i] = 0.5 * rule.w[i];
  }
  if (rule.x.front() == -1.0) scheme.c[0] = 0.0;
  if (rule.x.back() == 1.0) scheme.c[s - 1] = 1.0;
  return scheme;
}

CollocationScheme make_auxiliary_rule(Family family, int s) {
  if (s < 1) throw Error(ErrorKind::UnsupportedStageCount, "rule needs at least one point");
  if (s >= min_stages(family)) return make_scheme(family, s);
  return make_scheme(Family::GaussLegendre, s);
}

double lagrange_eval(const Vec& c, int j, double t) {
  double value = 1.0;
  for (int i = 0; i < c.size(); ++i) {
    if (i != j) value *= (t - c[i]) / (c[j] - c[i]);
  }
  return value;
}

double lagrange_deriv(const Vec& c, int j, double t) {
  double sum = 0.0;
  for (int m = 0; m < c.size(); ++m) {
    if (m == j) continue;
    double term = 1.0 / (c[j] - c[m]);
    for (int i = 0; i < c.size(); ++i) {
      if (i != j && i != m) term *= (t - c[i]) / (c[j] - c[i]);
    }
    sum += term;
  }
  return sum;
}

double lagrange_integral(const Vec& c, int j, double t) {
  const int s = static_cast<int>(c.size());
  // s Gauss points integrate degree 2s-1 >= s-1 exactly.
  static thread_local CollocationScheme gauss;
  if (gauss.s != s) gauss = make_scheme(Family::GaussLegendre, s);
  double sum = 0.0;
  for (int k = 0; k < s; ++k) sum += gauss.b[k] * lagrange_eval(c, j, t * gauss.c[k]);
  return t * sum;
}

Mat interpolation_matrix(const Vec& c, const Vec& x) {
  Mat m(x.size(), c.size());
  for (int i = 0; i < x.size(); ++i) {
    for (int j = 0; j < c.size(); ++j) m(i, j) = lagrange_eval(c, j, x[i]);
  }
  return m;
}

namespace {

void require_nonzero_weights(const CollocationScheme& scheme) {
  for (int i = 0; i < scheme.s; ++i) {
    if (scheme.b[i] == 0.0) {
      throw Error(ErrorKind::ZeroWeight, "quadrature weight b_" + std::to_string(i + 1) + " is zero");
    }
  }
}

}  // namespace

SprkCoefficients sprk_coefficients(const CollocationScheme& scheme) {
  require_nonzero_weights(scheme);
  const int s = scheme.s;
  SprkCoefficients coeff;
  coeff.a.resize(s, s);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) coeff.a(i, j) = lagrange_integral(scheme.c, j, scheme.c[i]);
  }
  coeff.b_bar = scheme.b;
  coeff.a_bar.resize(s, s);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      coeff.a_bar(i, j) = coeff.b_bar[j] - coeff.b_bar[j] * coeff.a(j, i) / scheme.b[i];
    }
  }
  return coeff;
}

SgCoefficients sg_coefficients(const CollocationScheme& scheme) {
  require_nonzero_weights(scheme);
  const int s = scheme.s;
  if (scheme.c[0] == scheme.c[s - 1]) {
    throw Error(ErrorKind::DegenerateNodes, "first and last collocation points coincide");
  }
  SgCoefficients coeff;
  coeff.a.resize(s, s);
  coeff.alpha.resize(s);
  coeff.beta.resize(s);
  for (int j = 0; j < s; ++j) {
    for (int i = 0; i < s; ++i) coeff.a(i, j) = lagrange_deriv(scheme.c, j, scheme.c[i]);
    coeff.alpha[j] = lagrange_eval(scheme.c, j, 0.0);
    coeff.beta[j] = lagrange_eval(scheme.c, j, 1.0);
  }
  coeff.b_bar = scheme.b;
  coeff.a_bar.resize(s, s);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) coeff.a_bar(j, i) = -scheme.b[i] / coeff.b_bar[j] * coeff.a(i, j);
  }
  coeff.gamma = coeff.alpha[0] * coeff.beta[s - 1] - coeff.alpha[s - 1] * coeff.beta[0];
  return coeff;
}

}  // namespace hovi
