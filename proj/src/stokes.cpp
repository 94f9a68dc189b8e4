#include "edg/stokes.hpp"

#include <Eigen/UmfPackSupport>

#include <cmath>
#include <sstream>
#include <vector>

#include "edg/basis.hpp"
#include "edg/fe_values.hpp"

namespace edg {

using Triplets = std::vector<Eigen::Triplet<double>>;

Eigen::SparseMatrix<double> assemble_a(const Mesh& mesh, const EdgSpaces& spaces, double nu, double alpha) {
  if (!(alpha > 0.0) || !(nu > 0.0)) throw std::invalid_argument("assemble_a: nu and alpha must be positive");
  const int k = spaces.k;
  const int nk = triangle_dim(k);
  const int nt = k + 1;
  const int nloc = nk + 3 * nt;
  const int nu_dofs = spaces.velocity.size();
  const int n = nu_dofs + spaces.velocity_trace.size();
  Triplets trip;
  trip.reserve(static_cast<std::size_t>(mesh.num_cells()) * 2 * nloc * nloc);

  for (int c = 0; c < mesh.num_cells(); ++c) {
    // Scalar local matrix over [phi (nk) ; trace nodes of the 3 facets].
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(nloc, nloc);
    const CellValues cv = cell_values(mesh, c, k, 2 * k);
    for (int q = 0; q < cv.weights.size(); ++q) {
      s.topLeftCorner(nk, nk) += cv.weights(q) * (cv.dphi_dx.col(q) * cv.dphi_dx.col(q).transpose() +
                                                  cv.dphi_dy.col(q) * cv.dphi_dy.col(q).transpose());
    }
    const double penalty = alpha / mesh.diameter(c);
    for (int i = 0; i < 3; ++i) {
      const int f = mesh.cell_facet(c, i);
      const FacetValues fv = facet_values(mesh, c, f, k, 2 * k + 1);
      const Eigen::MatrixXd psi = facet_lagrange_table(k, fv.t);
      Eigen::VectorXd w(nloc), d(nloc);
      for (int q = 0; q < fv.weights.size(); ++q) {
        w.setZero();
        d.setZero();
        w.head(nk) = fv.phi.col(q);
        w.segment(nk + i * nt, nt) = -psi.col(q);
        d.head(nk) = fv.normal(0) * fv.dphi_dx.col(q) + fv.normal(1) * fv.dphi_dy.col(q);
        s += fv.weights(q) * (penalty * w * w.transpose() - w * d.transpose() - d * w.transpose());
      }
    }
    // Scatter both velocity components.
    const auto& cell_dofs = spaces.velocity.dofs(c);
    for (int comp = 0; comp < 2; ++comp) {
      std::vector<int> g(nloc, -1);
      for (int j = 0; j < nk; ++j) g[j] = cell_dofs[comp * nk + j];
      for (int i = 0; i < 3; ++i) {
        const auto& tr = spaces.velocity_trace.dofs(mesh.cell_facet(c, i));
        for (int l = 0; l < nt; ++l) {
          const int d = tr[comp * nt + l];
          g[nk + i * nt + l] = d < 0 ? -1 : nu_dofs + d;
        }
      }
      for (int r = 0; r < nloc; ++r) {
        if (g[r] < 0) continue;
        for (int col = 0; col < nloc; ++col) {
          if (g[col] < 0 || s(r, col) == 0.0) continue;
          trip.emplace_back(g[r], g[col], nu * s(r, col));
        }
      }
    }
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

Eigen::SparseMatrix<double> assemble_b(const Mesh& mesh, const EdgSpaces& spaces) {
  const int k = spaces.k;
  const int m = spaces.m;
  const int nk = triangle_dim(k);
  const int nq = triangle_dim(k - 1);
  const int np = spaces.pressure.size();
  Triplets trip;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& udofs = spaces.velocity.dofs(c);
    const auto& pdofs = spaces.pressure.dofs(c);
    const CellValues cv = cell_values(mesh, c, k, 2 * k);
    const CellValues pv = cell_values(mesh, c, k - 1, 2 * k);
    // -int_K q div v
    Eigen::MatrixXd bx = Eigen::MatrixXd::Zero(nq, nk), by = Eigen::MatrixXd::Zero(nq, nk);
    for (int q = 0; q < cv.weights.size(); ++q) {
      bx -= cv.weights(q) * pv.phi.col(q) * cv.dphi_dx.col(q).transpose();
      by -= cv.weights(q) * pv.phi.col(q) * cv.dphi_dy.col(q).transpose();
    }
    for (int i = 0; i < nq; ++i) {
      for (int j = 0; j < nk; ++j) {
        trip.emplace_back(pdofs[i], udofs[j], bx(i, j));
        trip.emplace_back(pdofs[i], udofs[nk + j], by(i, j));
      }
    }
    // int_{dK} v.n pbar
    for (int i = 0; i < 3; ++i) {
      const int f = mesh.cell_facet(c, i);
      const FacetValues fv = facet_values(mesh, c, f, k, k + m + 1);
      const Eigen::MatrixXd psi = facet_lagrange_table(m, fv.t);
      Eigen::MatrixXd fx = Eigen::MatrixXd::Zero(m + 1, nk), fy = Eigen::MatrixXd::Zero(m + 1, nk);
      for (int q = 0; q < fv.weights.size(); ++q) {
        fx += fv.weights(q) * fv.normal(0) * psi.col(q) * fv.phi.col(q).transpose();
        fy += fv.weights(q) * fv.normal(1) * psi.col(q) * fv.phi.col(q).transpose();
      }
      const auto& tdofs = spaces.pressure_trace.dofs(f);
      for (int l = 0; l <= m; ++l) {
        for (int j = 0; j < nk; ++j) {
          trip.emplace_back(np + tdofs[l], udofs[j], fx(l, j));
          trip.emplace_back(np + tdofs[l], udofs[nk + j], fy(l, j));
        }
      }
    }
  }
  Eigen::SparseMatrix<double> b(np + spaces.pressure_trace.size(), spaces.velocity.size());
  b.setFromTriplets(trip.begin(), trip.end());
  return b;
}

Eigen::VectorXd pressure_mean_functional(const Mesh& mesh, const EdgSpaces& spaces) {
  const int np = spaces.pressure.size();
  const int m = spaces.m;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(np + spaces.pressure_trace.size());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellValues pv = cell_values(mesh, c, spaces.k - 1, spaces.k);
    const Eigen::VectorXd integrals = pv.phi * pv.weights;
    const auto& d = spaces.pressure.dofs(c);
    for (std::size_t i = 0; i < d.size(); ++i) mean(d[i]) += integrals(i);
  }
  const Eigen::VectorXd t = facet_lagrange_integrals(m);
  for (int f = 0; f < mesh.num_facets(); ++f) {
    const auto& d = spaces.pressure_trace.dofs(f);
    for (int l = 0; l <= m; ++l) mean(np + d[l]) += mesh.facet(f).length * t(l);
  }
  return mean;
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& velocity, const VectorField& f, int quad_degree) {
  const int k = velocity.degree();
  const int nk = triangle_dim(k);
  if (quad_degree < 0) quad_degree = 2 * k + 4;
  Eigen::VectorXd load = Eigen::VectorXd::Zero(velocity.size());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellValues cv = cell_values(mesh, c, k, quad_degree);
    Eigen::VectorXd lx = Eigen::VectorXd::Zero(nk), ly = Eigen::VectorXd::Zero(nk);
    for (int q = 0; q < cv.weights.size(); ++q) {
      const Eigen::Vector2d fq = f(cv.points.col(q));
      lx += cv.weights(q) * fq(0) * cv.phi.col(q);
      ly += cv.weights(q) * fq(1) * cv.phi.col(q);
    }
    const auto& d = velocity.dofs(c);
    for (int j = 0; j < nk; ++j) {
      load(d[j]) += lx(j);
      load(d[nk + j]) += ly(j);
    }
  }
  return load;
}

GlobalSystem assemble_system(const Mesh& mesh, const EdgSpaces& spaces, double alpha) {
  GlobalSystem sys;
  sys.num_u = spaces.velocity.size();
  sys.num_ubar = spaces.velocity_trace.size();
  sys.num_p = spaces.pressure.size();
  sys.num_pbar = spaces.pressure_trace.size();
  sys.alpha = alpha;
  sys.k = spaces.k;
  sys.m = spaces.m;
  sys.a = assemble_a(mesh, spaces, 1.0, alpha);
  sys.b = assemble_b(mesh, spaces);
  sys.mean = pressure_mean_functional(mesh, spaces);
  sys.cell_pressure_integrals = sys.mean.head(sys.num_p);
  for (int c = 0; c < mesh.num_cells(); ++c) sys.domain_area += mesh.area(c);

  Triplets trip;
  trip.reserve(sys.a.nonZeros() + 2 * sys.b.nonZeros() + 2 * sys.mean.size());
  for (int j = 0; j < sys.a.outerSize(); ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.a, j); it; ++it) {
      trip.emplace_back(it.row(), it.col(), it.value());
    }
  }
  const int op = sys.offset_p();
  for (int j = 0; j < sys.b.outerSize(); ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.b, j); it; ++it) {
      trip.emplace_back(op + it.row(), it.col(), it.value());
      trip.emplace_back(it.col(), op + it.row(), it.value());
    }
  }
  const int os = sys.offset_mean();
  for (Eigen::Index i = 0; i < sys.mean.size(); ++i) {
    if (sys.mean(i) == 0.0) continue;
    trip.emplace_back(os, op + i, sys.mean(i));
    trip.emplace_back(op + i, os, sys.mean(i));
  }
  sys.matrix.resize(sys.size(), sys.size());
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.matrix.makeCompressed();
  return sys;
}

// The bordered mean-constraint system is solved by block elimination: the
// dense border row would otherwise dominate the sparse factorization. The
// sparse core K0 (system without the border) has the constant pressure pair
// z as its kernel; one pressure dof is pinned to factorize it and the
// border is then restored exactly.
struct StokesSolver::Impl {
  Eigen::SparseMatrix<double> core;  // referenced by the factorization
  Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu;
  Eigen::VectorXd border;  // mean functional embedded in the core unknowns
  Eigen::VectorXd kernel;  // constant pressure pair
  int pin = -1;

  Eigen::VectorXd eliminate(const Eigen::VectorXd& rhs) const {
    const Eigen::Index n = border.size();
    Eigen::VectorXd b = rhs.head(n);
    const double s = kernel.dot(b) / kernel.dot(border);
    b -= s * border;
    b(pin) = 0.0;
    const Eigen::VectorXd y = lu.solve(b);
    Eigen::VectorXd x(n + 1);
    x.head(n) = y;
    const double beta = (rhs(n) - border.dot(x.head(n))) / border.dot(kernel);
    x.head(n) += beta * kernel;
    x(n) = s;
    return x;
  }
};

StokesSolver::StokesSolver(const GlobalSystem& system, double tolerance)
    : system_(&system), tolerance_(tolerance), impl_(std::make_unique<Impl>()) {
  const int n = system.size() - 1;
  const int np = system.num_p + system.num_pbar;
  impl_->border = Eigen::VectorXd::Zero(n);
  impl_->border.segment(system.offset_p(), np) = system.mean;
  impl_->kernel = Eigen::VectorXd::Zero(n);
  impl_->kernel.segment(system.offset_p(), np).setOnes();
  impl_->pin = n - 1;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(system.matrix.nonZeros());
  for (int col = 0; col < n; ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.matrix, col); it; ++it) {
      const int row = static_cast<int>(it.row());
      if (row >= n || row == impl_->pin || col == impl_->pin) continue;
      trip.emplace_back(row, col, it.value());
    }
  }
  trip.emplace_back(impl_->pin, impl_->pin, 1.0);
  impl_->core.resize(n, n);
  impl_->core.setFromTriplets(trip.begin(), trip.end());
  impl_->lu.compute(impl_->core);
  if (impl_->lu.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "sparse LU factorization failed: singular or ill-posed system of size " << system.size();
    throw SolverError(msg.str());
  }
}

StokesSolver::~StokesSolver() = default;
StokesSolver::StokesSolver(StokesSolver&&) noexcept = default;
StokesSolver& StokesSolver::operator=(StokesSolver&&) noexcept = default;

Eigen::VectorXd StokesSolver::solve_raw(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != system_->size()) throw std::invalid_argument("solve_raw: right-hand side size mismatch");
  Eigen::VectorXd x = impl_->eliminate(rhs);
  const double bnorm = rhs.lpNorm<Eigen::Infinity>();
  auto relative_residual = [&] {
    const double res = (rhs - system_->matrix * x).lpNorm<Eigen::Infinity>();
    return bnorm > 0.0 ? res / bnorm : res;
  };
  double rel = relative_residual();
  // Up to two steps of iterative refinement.
  for (int it = 0; it < 2 && rel > 1e-14; ++it) {
    x += impl_->eliminate(rhs - system_->matrix * x);
    rel = relative_residual();
  }
  if (!std::isfinite(rel) || rel > tolerance_) {
    std::ostringstream msg;
    msg << "linear solve residual " << rel << " exceeds tolerance " << tolerance_;
    throw SolverError(msg.str());
  }
  return x;
}

StokesSolution StokesSolver::solve(const Eigen::VectorXd& load, double nu) const {
  if (!(nu > 0.0)) throw std::invalid_argument("solve: viscosity must be positive");
  const GlobalSystem& sys = *system_;
  if (load.size() != sys.num_u) throw std::invalid_argument("solve: load size does not match the velocity space");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(sys.size());
  rhs.head(sys.num_u) = load / nu;
  const Eigen::VectorXd x = solve_raw(rhs);
  const Eigen::VectorXd r = rhs - sys.matrix * x;
  StokesSolution sol;
  sol.u = x.head(sys.num_u);
  sol.ubar = x.segment(sys.offset_ubar(), sys.num_ubar);
  sol.p = nu * x.segment(sys.offset_p(), sys.num_p);
  sol.pbar = nu * x.segment(sys.offset_pbar(), sys.num_pbar);
  const double bnorm = rhs.lpNorm<Eigen::Infinity>();
  sol.residual = bnorm > 0.0 ? r.lpNorm<Eigen::Infinity>() / bnorm : r.lpNorm<Eigen::Infinity>();
  sol.nu = nu;
  sol.k = sys.k;
  sol.m = sys.m;
  sol.alpha = sys.alpha;
  // Nodal bases reproduce constants with unit coefficients.
  const double shift = -sys.cell_pressure_integrals.dot(sol.p) / sys.domain_area;
  sol.p.array() += shift;
  sol.pbar.array() += shift;
  return sol;
}

StokesSolution solve_stokes(const GlobalSystem& system, const Eigen::VectorXd& load, double nu) {
  return StokesSolver(system).solve(load, nu);
}

}  // namespace edg
