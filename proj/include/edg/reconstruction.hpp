#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "edg/mesh.hpp"
#include "edg/spaces.hpp"
#include "edg/stokes.hpp"

namespace edg {

/// Bubble projection toward `vertex` of a P_m function on `facet` given by
/// its nodal Lagrange coefficients: c_i -> c_i * phi_V(xi_i), where phi_V is
/// the hat function of the vertex restricted to the facet.
Eigen::VectorXd bubble_project(const Mesh& mesh, int facet, int vertex, const Eigen::VectorXd& coeffs);

/// Bubble operator acting on P_k(F) in the degree-k nodal basis.
///
/// For m = k it is the nodal weighting above. For m = k-1 the P_m part of
/// the argument (its interpolant at the m+1 nodes) is weighted nodally and
/// the remainder, which vanishes at both endpoints, is split evenly between
/// the two vertices. In both cases the operators of the two endpoints sum to
/// the identity and agree with bubble_project on P_m.
Eigen::MatrixXd bubble_matrix(int k, int m, bool toward_first_vertex);

/// Measure-weighted mean over the flux facets of a patch.
struct PatchMean {
  double value = 0.0;
  bool degenerate = false;  // no flux facets
};

/// facet_coeffs[i] holds nodal Lagrange coefficients on spaces.flux_facets[i].
PatchMean pi0_patch(const Mesh& mesh, const PatchSpaces& spaces, const std::vector<Eigen::VectorXd>& facet_coeffs);

/// Dense saddle-point system of one vertex patch.
///
/// Unknown blocks, in order: sigma, normal-trace multipliers, cell pressure,
/// facet pressure, Lambda multipliers, quotient multiplier. The facet-pressure
/// rows carry the right-hand side G^V. Sigma uses the global cell-velocity
/// layout of each patch cell, so `velocity_dofs` maps sigma entries to V_h.
class PatchLocalSystem {
 public:
  PatchLocalSystem(const Mesh& mesh, const EdgSpaces& global, PatchSpaces spaces, int m);

  const PatchSpaces& spaces() const { return spaces_; }
  int m() const { return m_; }
  int size() const { return static_cast<int>(matrix_.rows()); }
  bool empty() const { return spaces_.flux_facets.empty(); }

  int offset_normal() const { return spaces_.sigma_size(); }
  int offset_pressure() const { return offset_normal() + spaces_.normal_constraint_size(); }
  int offset_trace() const { return offset_pressure() + spaces_.cell_pressure_size(); }
  int offset_lambda() const { return offset_trace() + spaces_.trace_pressure_size(); }
  int offset_quotient() const { return offset_lambda() + spaces_.lambda_size(); }

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const Eigen::MatrixXd& mass() const { return mass_; }
  /// Facet-pressure rows of b_1: tau -> (int_F [[tau.n]] psi_l).
  const Eigen::MatrixXd& jump_moments() const { return jump_moments_; }
  /// G^V = rhs_transfer() * jump_moments() * u_patch.
  const Eigen::MatrixXd& rhs_transfer() const { return transfer_; }
  const std::vector<int>& velocity_dofs() const { return velocity_dofs_; }
  double rcond() const { return rcond_; }

  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const { return lu_.solve(rhs); }

 private:
  PatchSpaces spaces_;
  int m_;
  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd mass_;
  Eigen::MatrixXd jump_moments_;
  Eigen::MatrixXd transfer_;
  std::vector<int> velocity_dofs_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double rcond_ = 0.0;
};

/// G^V as coefficients over [cell pressure ; facet pressure] of the patch;
/// the cell-pressure part is zero.
Eigen::VectorXd assemble_GV(const PatchLocalSystem& system, const Eigen::VectorXd& u);

struct PatchSolution {
  Eigen::VectorXd sigma;
  Eigen::VectorXd normal_multipliers;
  Eigen::VectorXd pressure;
  Eigen::VectorXd pressure_trace;
  Eigen::VectorXd lambda;
  double quotient_multiplier = 0.0;
  double residual = 0.0;
};

/// Solves the patch system for a right-hand side from assemble_GV.
/// Throws SolverError if the relative residual exceeds `tolerance`.
PatchSolution solve_patch(const PatchLocalSystem& system, const Eigen::VectorXd& gv, double tolerance = 1e-12);

/// Per-patch invariants used by the local-problem checks.
struct PatchDiagnostics {
  int vertex = -1;
  double residual = 0.0;
  double constant_rhs = 0.0;       // |G^V((1,1))| / ||G^V||
  double orthogonality = 0.0;      // max_eta |(sigma, eta)| / (||sigma|| ||eta||)
  double sigma_norm = 0.0;         // ||sigma||_Sigma
  double jump_norm = 0.0;          // ||[[u.n]]||_{L2(flux facets)}
  double stability_ratio = 0.0;    // sigma_norm / (sqrt(h) jump_norm)
};

PatchDiagnostics patch_diagnostics(const Mesh& mesh, const PatchLocalSystem& system, const Eigen::VectorXd& u);

struct ReconstructionOptions {
  DomainBoundaryFlux boundary = DomainBoundaryFlux::Corrected;
  double patch_tolerance = 1e-12;
};

/// Linear map u_h -> R(u_h) = u_h - sum_V sigma_V(u_h) on cell-velocity coefficients.
///
/// Stored in factored form R = I - S J: J maps u_h to the facet-pressure
/// moments of its normal jumps on every patch, S maps those to the patch
/// corrections (already including G^V's bubble transfer).
class ReconstructionOperator {
 public:
  ReconstructionOperator(Eigen::SparseMatrix<double> solution_map, Eigen::SparseMatrix<double> jump_map);

  int size() const { return static_cast<int>(solution_map_.rows()); }
  Eigen::VectorXd apply(const Eigen::VectorXd& u) const;
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& load) const;
  /// sigma_h = u_h - R(u_h).
  Eigen::VectorXd correction(const Eigen::VectorXd& u) const;
  /// Explicit sparse matrix of R.
  Eigen::SparseMatrix<double> matrix() const;

  const Eigen::SparseMatrix<double>& solution_map() const { return solution_map_; }
  const Eigen::SparseMatrix<double>& jump_map() const { return jump_map_; }

 private:
  Eigen::SparseMatrix<double> solution_map_;
  Eigen::SparseMatrix<double> jump_map_;
};

ReconstructionOperator build_reconstruction_operator(const Mesh& mesh, const EdgSpaces& spaces,
                                                     const ReconstructionOptions& options = {});

/// L*_i = int f . R(phi_i), computed as R^T L.
Eigen::VectorXd modified_load(const ReconstructionOperator& r, const Eigen::VectorXd& load);

/// (sum_V h^2 ||g - Pi^{k-2}_{omega_V} g||^2_{omega_V})^{1/2}, with Pi the
/// L2 projection onto [P_{k-2}(omega_V)]^2.
double con_norm(const VectorField& g, const Mesh& mesh, int k);

}  // namespace edg
