#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace edg {

/// Highest polynomial degree supported by the cell and facet bases.
inline constexpr int kMaxDegree = 4;

/// Exponent pairs (a, b) of the monomials x^a y^b with a + b <= degree,
/// ordered by total degree and then by decreasing a.
std::vector<std::array<int, 2>> monomial_exponents(int degree);

/// Dimension of P_k on a triangle.
constexpr int triangle_dim(int k) { return k < 0 ? 0 : (k + 1) * (k + 2) / 2; }

/// Nodal Lagrange basis of P_k on the reference triangle (0,0),(1,0),(0,1).
///
/// Nodes are equispaced; the three vertices come first so that the k = 1
/// basis is the barycentric one. P_0 uses the centroid. Evaluation uses the
/// product form in barycentric coordinates, accurate to a few ulp.
class CellBasis {
 public:
  explicit CellBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(nodes_.cols()); }
  const Eigen::Matrix2Xd& nodes() const { return nodes_; }

  Eigen::VectorXd values(const Eigen::Vector2d& xi) const;
  /// Row i holds the reference gradient of basis function i.
  Eigen::MatrixX2d gradients(const Eigen::Vector2d& xi) const;

 private:
  int degree_;
  Eigen::Matrix2Xd nodes_;
  std::vector<std::array<int, 3>> indices_;  // k * (lambda_1, lambda_2, lambda_0) at each node
};

/// Shared immutable basis instance for degree k (0 <= k <= kMaxDegree).
const CellBasis& cell_basis(int k);

/// Basis values and reference gradients tabulated at a set of points.
struct ShapeTable {
  Eigen::MatrixXd values;  // n_basis x n_points
  Eigen::MatrixXd dx;
  Eigen::MatrixXd dy;
};

ShapeTable eval_cell_basis(int k, const Eigen::Matrix2Xd& points);

/// Lagrange basis of P_m on [0,1] with equispaced nodes t_i = i/m
/// (both endpoints included; P_0 uses the midpoint).
Eigen::VectorXd eval_facet_lagrange(int m, double t);

/// Integrals over [0,1] of the degree-m facet Lagrange basis functions.
Eigen::VectorXd facet_lagrange_integrals(int m);

/// Node t_i of the degree-m facet Lagrange basis.
double facet_node(int m, int i);

}  // namespace edg
