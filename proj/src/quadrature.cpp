#include "edg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace edg {

namespace {

void check_degree(int degree) {
  if (degree < 0 || degree > kMaxQuadratureDegree) {
    throw std::invalid_argument("unsupported quadrature degree " + std::to_string(degree));
  }
}

}  // namespace

namespace {

// Legendre polynomial P_n and its derivative at x in (-1,1).
std::pair<long double, long double> legendre(int n, long double x) {
  long double p0 = 1.0L, p1 = x;
  for (int j = 2; j <= n; ++j) {
    const long double p2 = ((2.0L * j - 1.0L) * x * p1 - (j - 1.0L) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0L)};
}

// Gauss nodes and weights on [0,1] in extended precision. The rules are
// shared by every cell, so their rounding error does not average out.
struct ExtendedRule {
  std::vector<long double> points, weights;
};

ExtendedRule gauss_legendre_extended(int npoints) {
  ExtendedRule r{std::vector<long double>(npoints), std::vector<long double>(npoints)};
  if (npoints == 1) {
    r.points[0] = 0.5L;
    r.weights[0] = 1.0L;
    return r;
  }
  // Nodes on [-1,1] are symmetric; Newton on P_n for the upper half.
  for (int i = 0; i < (npoints + 1) / 2; ++i) {
    long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (npoints + 0.5L));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(npoints, x);
      const long double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-19L) break;
    }
    const long double dp = legendre(npoints, x).second;
    const long double w = 1.0L / ((1.0L - x * x) * dp * dp);  // already halved for [0,1]
    r.points[i] = 0.5L * (1.0L - x);
    r.points[npoints - 1 - i] = 0.5L * (1.0L + x);
    r.weights[i] = w;
    r.weights[npoints - 1 - i] = w;
  }
  if (npoints % 2 == 1) r.points[npoints / 2] = 0.5L;
  return r;
}

}  // namespace

QuadratureRule gauss_legendre(int npoints) {
  if (npoints < 1) throw std::invalid_argument("gauss_legendre: npoints must be >= 1");
  const ExtendedRule g = gauss_legendre_extended(npoints);
  QuadratureRule rule;
  rule.points.resize(1, npoints);
  rule.weights.resize(npoints);
  rule.degree = 2 * npoints - 1;
  for (int i = 0; i < npoints; ++i) {
    rule.points(0, i) = static_cast<double>(g.points[i]);
    rule.weights(i) = static_cast<double>(g.weights[i]);
  }
  return rule;
}

QuadratureRule segment_quadrature(int degree) {
  check_degree(degree);
  QuadratureRule rule = gauss_legendre(degree / 2 + 1);
  return rule;
}

QuadratureRule triangle_quadrature(int degree) {
  check_degree(degree);
  // The Duffy factor (1 - s) raises the s-degree by one.
  const int n = (degree + 3) / 2;
  const ExtendedRule g = gauss_legendre_extended(n);
  QuadratureRule rule;
  rule.points.resize(2, n * n);
  rule.weights.resize(n * n);
  rule.degree = degree;
  int q = 0;
  for (int i = 0; i < n; ++i) {
    const long double s = g.points[i];
    for (int j = 0; j < n; ++j) {
      const long double t = g.points[j];
      rule.points(0, q) = static_cast<double>(s);
      rule.points(1, q) = static_cast<double>(t * (1.0L - s));
      rule.weights(q) = static_cast<double>(g.weights[i] * g.weights[j] * (1.0L - s));
      ++q;
    }
  }
  return rule;
}

}  // namespace edg
