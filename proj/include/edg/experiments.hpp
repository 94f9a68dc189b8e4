#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "edg/manufactured.hpp"
#include "edg/mesh.hpp"
#include "edg/norms.hpp"
#include "edg/reconstruction.hpp"
#include "edg/spaces.hpp"
#include "edg/stokes.hpp"
#include "edg/table.hpp"

namespace edg {

enum class ReconstructMode { On, Off, Both };

struct ExperimentConfig {
  int k = 2;
  int m = 2;
  double nu = 1e-6;
  double alpha = 0.0;  // <= 0 selects default_penalty(k)
  int n0 = 4;
  int levels = 4;      // number of uniform refinements after the initial mesh
  ReconstructMode reconstruct = ReconstructMode::On;
  std::string mesh_path;  // optional imported initial mesh
  std::string out;

  double penalty() const { return alpha > 0.0 ? alpha : default_penalty(k); }
  /// Throws std::invalid_argument for inadmissible settings.
  void validate() const;
};

/// Initial mesh of a configuration: imported if mesh_path is set, else structured n0.
Mesh initial_mesh(const ExperimentConfig& cfg);
/// Mesh of refinement level `level` (structured n0 * 2^level, or refined import).
Mesh level_mesh(const ExperimentConfig& cfg, int level);

/// One mesh with its spaces, factorized global system and (on demand) the
/// reconstruction operator. Solves at any viscosity reuse the factorization.
class Discretization {
 public:
  Discretization(Mesh mesh, int k, int m, double alpha,
                 DomainBoundaryFlux boundary = DomainBoundaryFlux::Corrected);

  const Mesh& mesh() const { return mesh_; }
  const EdgSpaces& spaces() const { return spaces_; }
  const GlobalSystem& system() const { return *system_; }
  const StokesSolver& solver() const { return *solver_; }
  double alpha() const { return alpha_; }
  const ReconstructionOperator& reconstruction();

  /// Standard (reconstruct = false) or modified load of f; quad_degree < 0 selects 2k+4.
  Eigen::VectorXd load(const VectorField& f, bool reconstruct, int quad_degree = -1);
  StokesSolution solve(const VectorField& f, double nu, bool reconstruct, int quad_degree = -1);

 private:
  Mesh mesh_;
  EdgSpaces spaces_;
  double alpha_;
  DomainBoundaryFlux boundary_;
  std::unique_ptr<GlobalSystem> system_;
  std::unique_ptr<StokesSolver> solver_;
  std::optional<ReconstructionOperator> reconstruction_;
};

/// int_Omega g . v_h for a cell velocity v_h, by cell quadrature.
double integrate_dot(const Mesh& mesh, const DofMap& velocity, const VectorField& g, const Eigen::VectorXd& v,
                     int quad_degree = -1);

/// log2 ratios of consecutive errors on meshes whose size halves per level.
std::vector<double> observed_orders(const std::vector<double>& errors);

struct ConvergenceLevel {
  int level = 0;
  int nelems = 0;
  double h = 0.0;
  VelocityErrors errors;
  double velocity_norm = 0.0;  // |||u_h|||_1
  double divergence = 0.0;     // cellwise ||div u_h||
  double residual = 0.0;
};

struct ConvergenceResult {
  bool reconstructed = false;
  std::vector<ConvergenceLevel> levels;
  Table table() const;
  std::vector<double> h1_orders() const;
  std::vector<double> l2_orders() const;
};

/// Manufactured solve on every level. Each level asserts the solution
/// invariants (cellwise divergence relative to |||u_h|||_1) and throws with
/// the level identified on failure.
ConvergenceResult run_convergence(const ExperimentConfig& cfg, bool reconstruct);

/// Viscosities 1, 1e-1, ..., 1e-9.
std::vector<double> default_viscosities();

struct SweepResult {
  bool reconstructed = false;
  int nelems = 0;
  std::vector<double> nu;
  std::vector<VelocityErrors> errors;
  Table table() const;
};

/// One solve per viscosity on the level-0 mesh of cfg.
std::vector<SweepResult> run_nu_sweep(const ExperimentConfig& cfg, const std::vector<double>& viscosities,
                                      const std::vector<bool>& variants);

/// Least-squares slope of log10(error) against log10(1/nu) over nu <= nu_max.
double sweep_slope(const SweepResult& sweep, double nu_max, bool h1 = true);

struct InvarianceReport {
  int nelems = 0;
  double plain = 0.0;          // relative change of u_h
  double reconstructed = 0.0;  // relative change of u_h*
};

/// Solves with f and f + grad psi for both variants on the level-0 mesh.
/// Loads use quadrature degree 2k+12: at small nu the velocity change
/// amplifies load quadrature errors by 1/nu.
InvarianceReport run_invariance(const ExperimentConfig& cfg, const VectorField& grad_psi);

struct PatchCheckLevel {
  int n = 0;
  int nelems = 0;
  int patches = 0;
  double max_residual = 0.0;
  double max_constant_rhs = 0.0;
  double max_orthogonality = 0.0;         // generic discretely divergence-free field (random load)
  double max_orthogonality_smooth = 0.0;  // manufactured solution, jumps near roundoff for large k or n
  double bubble_identity = 0.0;
  double stability_ratio = 0.0;      // sqrt(sum ||sigma_V||^2) / sqrt(h sum ||[[u.n]]||^2_{F_V})
  double max_patch_stability = 0.0;  // max over patches
};

/// Local-problem invariants on one mesh. Residuals, G((c,c)) and stability use the
/// manufactured solution; orthogonality is also measured on the solution for a
/// random load, whose jumps are not small compared with u_h.
PatchCheckLevel patch_check(Discretization& disc, double nu, unsigned seed = 3);

/// Levels n0 * 2^i for i = 0..levels of cfg.
std::vector<PatchCheckLevel> run_patch_check(const ExperimentConfig& cfg);

/// Max partition-of-unity defect of the bubble operators over m = 0..4 and
/// random coefficients, plus the matrix form for all admissible (k, m).
double bubble_identity_defect(unsigned seed = 7);

struct AssumptionLevel {
  int nelems = 0;
  double h = 0.0;
  double velocity_norm = 0.0;
  double divergence = 0.0;      // cellwise ||div R(u_h)||
  double normal_jump = 0.0;     // interior ||[[R(u_h) . n]]||
  double proximity = 0.0;       // ||R(u_h) - u_h|| / (h |||u_h|||_1)
  double pairing_constant = 0.0;  // max over samples of |(g, R(u) - u)| / (con_norm(g) |||u|||_1)
};

/// Assumption-1 diagnostics for the manufactured solve and `samples`
/// discretely divergence-free fields from random loads.
AssumptionLevel assumption_check(Discretization& disc, double nu, int samples = 20, unsigned seed = 11);

/// Smooth test field used in the pairing bound.
VectorField pairing_field();

}  // namespace edg
