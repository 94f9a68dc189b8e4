#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "edg/mesh.hpp"
#include "edg/spaces.hpp"

namespace edg {

using ScalarField = std::function<double(const Eigen::Vector2d&)>;
using VectorField = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;
using TensorField = std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>;

/// Factorization breakdown or an unmet residual tolerance.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Default interior-penalty parameter 4 (k+1)^2.
inline double default_penalty(int k) { return 4.0 * (k + 1) * (k + 1); }

/// Viscous form a_h over (V_h x Vbar_h); unknowns ordered [u ; ubar].
/// Symmetric interior penalty with scaling nu * alpha / h_K.
Eigen::SparseMatrix<double> assemble_a(const Mesh& mesh, const EdgSpaces& spaces, double nu, double alpha);

/// Pressure coupling b_h; rows [p ; pbar], columns u (cell velocity only).
Eigen::SparseMatrix<double> assemble_b(const Mesh& mesh, const EdgSpaces& spaces);

/// Functional (p, pbar) -> sum_K int_K p + sum_F int_F pbar, as a vector over [p ; pbar].
Eigen::VectorXd pressure_mean_functional(const Mesh& mesh, const EdgSpaces& spaces);

/// L_i = int_Omega f . phi_i over the cell-velocity space (degree 2k+4 quadrature).
Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& velocity, const VectorField& f,
                              int quad_degree = -1);

/// Global EDG saddle-point system at unit viscosity.
///
/// Unknowns: [u ; ubar ; p ; pbar ; s] where s is the multiplier of the
/// pressure-mean functional. Because a_h is linear in nu, a solve at
/// viscosity nu uses this matrix with load L/nu and rescales the pressure.
struct GlobalSystem {
  int k = 0;
  int m = 0;
  int num_u = 0;
  int num_ubar = 0;
  int num_p = 0;
  int num_pbar = 0;
  double alpha = 0.0;
  Eigen::SparseMatrix<double> a;  // unit viscosity
  Eigen::SparseMatrix<double> b;
  Eigen::VectorXd mean;
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd cell_pressure_integrals;  // int_K q_i, for the zero-mean shift
  double domain_area = 0.0;

  int size() const { return num_u + num_ubar + num_p + num_pbar + 1; }
  int offset_ubar() const { return num_u; }
  int offset_p() const { return num_u + num_ubar; }
  int offset_pbar() const { return num_u + num_ubar + num_p; }
  int offset_mean() const { return num_u + num_ubar + num_p + num_pbar; }
};

GlobalSystem assemble_system(const Mesh& mesh, const EdgSpaces& spaces, double alpha);

/// Discrete velocity and pressure pairs of one solve.
struct StokesSolution {
  Eigen::VectorXd u;
  Eigen::VectorXd ubar;
  Eigen::VectorXd p;
  Eigen::VectorXd pbar;
  double residual = 0.0;
  int k = 0;
  int m = 0;
  double nu = 1.0;
  double alpha = 0.0;
  bool reconstructed = false;
};

/// Sparse direct factorization of a GlobalSystem, reusable across loads and viscosities.
class StokesSolver {
 public:
  explicit StokesSolver(const GlobalSystem& system, double tolerance = 1e-10);
  ~StokesSolver();
  StokesSolver(StokesSolver&&) noexcept;
  StokesSolver& operator=(StokesSolver&&) noexcept;

  /// Solves with momentum load `load` (over V_h) at viscosity nu. The
  /// pressure pair is shifted so that int_Omega p_h = 0.
  StokesSolution solve(const Eigen::VectorXd& load, double nu) const;

  /// Solves with a full right-hand side over all unknowns (unit viscosity).
  Eigen::VectorXd solve_raw(const Eigen::VectorXd& rhs) const;

  const GlobalSystem& system() const { return *system_; }

 private:
  struct Impl;
  const GlobalSystem* system_;
  double tolerance_;
  std::unique_ptr<Impl> impl_;
};

/// Convenience: factorize and solve once.
StokesSolution solve_stokes(const GlobalSystem& system, const Eigen::VectorXd& load, double nu);

}  // namespace edg
