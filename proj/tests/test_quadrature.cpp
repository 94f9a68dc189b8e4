#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "edg/quadrature.hpp"

using namespace edg;

namespace {

double integrate_triangle(const QuadratureRule& q, int a, int b) {
  long double s = 0.0L;
  for (int i = 0; i < q.size(); ++i) {
    s += static_cast<long double>(q.weights(i)) * std::pow(static_cast<long double>(q.points(0, i)), a) *
         std::pow(static_cast<long double>(q.points(1, i)), b);
  }
  return static_cast<double>(s);
}

// int over the reference triangle of x^a y^b = a! b! / (a + b + 2)!
double beta_integral(int a, int b) {
  return std::tgamma(a + 1) * std::tgamma(b + 1) / std::tgamma(a + b + 3);
}

}  // namespace

TEST_CASE("triangle rule integrates simple monomials") {
  CHECK(integrate_triangle(triangle_quadrature(1), 1, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(integrate_triangle(triangle_quadrature(4), 2, 2) == doctest::Approx(1.0 / 180.0).epsilon(1e-14));
  CHECK(triangle_quadrature(0).weights.sum() == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("segment rule integrates x^3 on [0,1]") {
  const QuadratureRule q = segment_quadrature(3);
  double s = 0.0;
  for (int i = 0; i < q.size(); ++i) s += q.weights(i) * std::pow(q.points(0, i), 3);
  CHECK(s == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("triangle rules are exact up to their degree") {
  for (int deg = 0; deg <= 16; ++deg) {
    const QuadratureRule q = triangle_quadrature(deg);
    CHECK(q.degree >= deg);
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b)
        CHECK(std::abs(integrate_triangle(q, a, b) - beta_integral(a, b)) <= 2e-15 * beta_integral(a, b));
  }
}

TEST_CASE("segment rules are exact up to their degree") {
  for (int deg = 0; deg <= 30; ++deg) {
    const QuadratureRule q = segment_quadrature(deg);
    for (int a = 0; a <= deg; ++a) {
      double s = 0.0;
      for (int i = 0; i < q.size(); ++i) s += q.weights(i) * std::pow(q.points(0, i), a);
      CHECK(std::abs(s - 1.0 / (a + 1)) <= 1e-14);
    }
  }
}

TEST_CASE("gauss points lie inside the reference entity") {
  const QuadratureRule q = triangle_quadrature(9);
  for (int i = 0; i < q.size(); ++i) {
    CHECK(q.points(0, i) > 0.0);
    CHECK(q.points(1, i) > 0.0);
    CHECK(q.points(0, i) + q.points(1, i) < 1.0);
    CHECK(q.weights(i) > 0.0);
  }
}

TEST_CASE("invalid degrees are rejected") {
  CHECK_THROWS_AS(triangle_quadrature(-1), std::invalid_argument);
  CHECK_THROWS_AS(segment_quadrature(kMaxQuadratureDegree + 1), std::invalid_argument);
  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}
