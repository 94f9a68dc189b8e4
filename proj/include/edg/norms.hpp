#pragma once

#include <Eigen/Dense>

#include "edg/mesh.hpp"
#include "edg/spaces.hpp"
#include "edg/stokes.hpp"

namespace edg {

struct VelocityErrors {
  double l2 = 0.0;       // ||u - u_h||_{L2(Omega)}
  double h1_semi = 0.0;  // (sum_K ||grad(u - u_h)||_K^2)^{1/2}
};

/// Errors of a cell velocity against exact evaluators (default quadrature degree 2k+4).
VelocityErrors velocity_errors(const Mesh& mesh, const DofMap& velocity, const Eigen::VectorXd& u,
                               const VectorField& exact, const TensorField& exact_gradient, int quad_degree = -1);

/// ||g||_{L2(Omega)} of an evaluator, by cell quadrature of the given degree.
double l2_norm(const Mesh& mesh, const VectorField& g, int quad_degree);

/// ||u_h||_{L2(Omega)} of a discrete cell velocity.
double l2_norm(const Mesh& mesh, const DofMap& velocity, const Eigen::VectorXd& u);

/// |||(v, vbar)|||_1^2 = sum_K ||grad v||_K^2 + sum_K alpha/h_K ||vbar - v||_{dK}^2.
double velocity_pair_norm(const Mesh& mesh, const EdgSpaces& spaces, const Eigen::VectorXd& u,
                          const Eigen::VectorXd& ubar, double alpha);

/// |||(q, qbar)|||_p^2 = ||q||^2 + sum_K h_K ||qbar||_{dK}^2.
double pressure_pair_norm(const Mesh& mesh, const EdgSpaces& spaces, const Eigen::VectorXd& p,
                          const Eigen::VectorXd& pbar);

/// (sum_K ||div u_h||_K^2)^{1/2}.
double cell_divergence_norm(const Mesh& mesh, const DofMap& velocity, const Eigen::VectorXd& u);

/// (sum_{F interior} ||[[u_h . n]]||_F^2)^{1/2}.
double interior_normal_jump_norm(const Mesh& mesh, const DofMap& velocity, const Eigen::VectorXd& u);

/// (sum_{F on the boundary} ||u_h . n||_F^2)^{1/2}.
double boundary_normal_trace_norm(const Mesh& mesh, const DofMap& velocity, const Eigen::VectorXd& u);

/// Normal jump [[u_h . n]] (sum of outward normal components; u.n on boundary
/// facets) at the facet parameters `t`.
Eigen::VectorXd normal_jump(const Mesh& mesh, const DofMap& velocity, const Eigen::VectorXd& u, int facet,
                            const Eigen::VectorXd& t);

struct NormReport {
  double l2_error = 0.0;
  double h1_semi_error = 0.0;
  double velocity_norm = 0.0;  // |||u_h|||_1
  double pressure_norm = 0.0;  // |||p_h|||_p
  double divergence = 0.0;
  double normal_jump = 0.0;
  double boundary_normal = 0.0;
};

/// All diagnostics of one solution; errors are computed when exact evaluators are given.
NormReport compute_norms(const Mesh& mesh, const EdgSpaces& spaces, const StokesSolution& solution,
                         const VectorField& exact = nullptr, const TensorField& exact_gradient = nullptr);

}  // namespace edg
