#include "edg/manufactured.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace edg {

namespace {

// t^2 (t-1)^2 and its first three derivatives.
struct Profile {
  double v, d1, d2, d3;
};

Profile profile(double t) {
  return {t * t * (t - 1) * (t - 1), 2 * t * (t - 1) * (2 * t - 1), 2 * (6 * t * t - 6 * t + 1), 24 * t - 12};
}

}  // namespace

ManufacturedCase manufactured_case_2d(double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("manufactured_case_2d: viscosity must be positive");
  ManufacturedCase c;
  c.name = "curl-xi";
  c.nu = nu;
  c.u = [](const Eigen::Vector2d& x) {
    const Profile X = profile(x(0)), Y = profile(x(1));
    return Eigen::Vector2d(-X.v * Y.d1, X.d1 * Y.v);
  };
  c.grad_u = [](const Eigen::Vector2d& x) {
    const Profile X = profile(x(0)), Y = profile(x(1));
    Eigen::Matrix2d g;
    g << -X.d1 * Y.d1, -X.v * Y.d2,
          X.d2 * Y.v,   X.d1 * Y.d1;
    return g;
  };
  c.p = [](const Eigen::Vector2d& x) { return std::pow(x(0), 5) + std::pow(x(1), 5) - 1.0 / 3.0; };
  c.f = [nu](const Eigen::Vector2d& x) {
    const Profile X = profile(x(0)), Y = profile(x(1));
    return Eigen::Vector2d(nu * (X.d2 * Y.d1 + X.v * Y.d3) + 5 * std::pow(x(0), 4),
                           -nu * (X.d3 * Y.v + X.d1 * Y.d2) + 5 * std::pow(x(1), 4));
  };
  return c;
}

ScalarField default_psi() {
  return [](const Eigen::Vector2d& x) { return std::cos(std::numbers::pi * x(0)) * std::cos(std::numbers::pi * x(1)); };
}

VectorField default_psi_gradient() {
  return [](const Eigen::Vector2d& x) {
    const double pi = std::numbers::pi;
    return Eigen::Vector2d(-pi * std::sin(pi * x(0)) * std::cos(pi * x(1)),
                           -pi * std::cos(pi * x(0)) * std::sin(pi * x(1)));
  };
}

}  // namespace edg
