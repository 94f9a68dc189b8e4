#pragma once

#include <Eigen/Dense>

namespace edg {

/// Quadrature rule on a reference entity. Points are stored column-wise
/// (1 x n on the segment [0,1], 2 x n on the triangle (0,0),(1,0),(0,1)).
struct QuadratureRule {
  Eigen::MatrixXd points;
  Eigen::VectorXd weights;
  int degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Highest polynomial degree the rule generators accept.
inline constexpr int kMaxQuadratureDegree = 40;

/// n-point Gauss-Legendre rule mapped to [0,1]; exact to degree 2n-1.
QuadratureRule gauss_legendre(int npoints);

/// Gauss rule on [0,1] exact for polynomials up to `degree`.
QuadratureRule segment_quadrature(int degree);

/// Collapsed-coordinate (Duffy) Gauss rule on the reference triangle,
/// exact for polynomials up to `degree`. Weights sum to 1/2.
QuadratureRule triangle_quadrature(int degree);

}  // namespace edg
