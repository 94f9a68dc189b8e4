#pragma once

#include <Eigen/Dense>

#include "edg/mesh.hpp"

namespace edg {

/// Cell basis of degree k tabulated at physical quadrature points of one cell.
struct CellValues {
  Eigen::Matrix2Xd points;
  Eigen::VectorXd weights;  // physical (include |det J|)
  Eigen::MatrixXd phi;      // n_basis x n_points
  Eigen::MatrixXd dphi_dx;
  Eigen::MatrixXd dphi_dy;
};

CellValues cell_values(const Mesh& mesh, int cell, int k, int quad_degree);

/// Cell basis of degree k of `cell` tabulated on one of its facets.
struct FacetValues {
  Eigen::VectorXd t;  // facet parameter of each point (global facet orientation)
  Eigen::Matrix2Xd points;
  Eigen::VectorXd weights;  // physical (include facet length)
  Eigen::MatrixXd phi;
  Eigen::MatrixXd dphi_dx;
  Eigen::MatrixXd dphi_dy;
  Eigen::Vector2d normal;  // outward for `cell`
};

FacetValues facet_values(const Mesh& mesh, int cell, int facet, int k, int quad_degree);

/// Facet Lagrange basis of degree m tabulated at parameters t (rows: basis).
Eigen::MatrixXd facet_lagrange_table(int m, const Eigen::VectorXd& t);

/// Cell-local coefficient vectors of a global cell-space vector.
inline Eigen::VectorXd gather(const Eigen::VectorXd& global, const std::vector<int>& dofs) {
  Eigen::VectorXd local(dofs.size());
  for (std::size_t i = 0; i < dofs.size(); ++i) local(i) = dofs[i] < 0 ? 0.0 : global(dofs[i]);
  return local;
}

}  // namespace edg
