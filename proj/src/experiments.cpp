#include "edg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "edg/basis.hpp"
#include "edg/fe_values.hpp"

namespace edg {

void ExperimentConfig::validate() const {
  validate_degrees(k, m);
  if (!(nu > 0.0)) throw std::invalid_argument("viscosity must be positive");
  if (n0 < 1) throw std::invalid_argument("n0 must be at least 1");
  if (levels < 0) throw std::invalid_argument("levels must be nonnegative");
}

Mesh initial_mesh(const ExperimentConfig& cfg) {
  return cfg.mesh_path.empty() ? generate_structured(cfg.n0) : read_mesh(cfg.mesh_path);
}

Mesh level_mesh(const ExperimentConfig& cfg, int level) {
  if (cfg.mesh_path.empty()) return generate_structured(cfg.n0 << level);
  Mesh mesh = read_mesh(cfg.mesh_path);
  for (int i = 0; i < level; ++i) mesh = uniform_refine(mesh);
  return mesh;
}

Discretization::Discretization(Mesh mesh, int k, int m, double alpha, DomainBoundaryFlux boundary)
    : mesh_(std::move(mesh)),
      spaces_(build_edg_spaces(mesh_, k, m)),
      alpha_(alpha),
      boundary_(boundary),
      system_(std::make_unique<GlobalSystem>(assemble_system(mesh_, spaces_, alpha))),
      solver_(std::make_unique<StokesSolver>(*system_)) {}

const ReconstructionOperator& Discretization::reconstruction() {
  if (!reconstruction_) {
    ReconstructionOptions options;
    options.boundary = boundary_;
    reconstruction_.emplace(build_reconstruction_operator(mesh_, spaces_, options));
  }
  return *reconstruction_;
}

Eigen::VectorXd Discretization::load(const VectorField& f, bool reconstruct, int quad_degree) {
  const Eigen::VectorXd l = assemble_load(mesh_, spaces_.velocity, f, quad_degree);
  return reconstruct ? modified_load(reconstruction(), l) : l;
}

StokesSolution Discretization::solve(const VectorField& f, double nu, bool reconstruct, int quad_degree) {
  StokesSolution sol = solver_->solve(load(f, reconstruct, quad_degree), nu);
  sol.reconstructed = reconstruct;
  return sol;
}

double integrate_dot(const Mesh& mesh, const DofMap& velocity, const VectorField& g, const Eigen::VectorXd& v,
                     int quad_degree) {
  const int k = velocity.degree();
  const int nk = triangle_dim(k);
  const int deg = quad_degree < 0 ? 2 * k + 4 : quad_degree;
  double total = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellValues cv = cell_values(mesh, c, k, deg);
    const Eigen::VectorXd loc = gather(v, velocity.dofs(c));
    const Eigen::VectorXd vx = cv.phi.transpose() * loc.head(nk);
    const Eigen::VectorXd vy = cv.phi.transpose() * loc.tail(nk);
    for (int p = 0; p < cv.weights.size(); ++p) {
      const Eigen::Vector2d gp = g(cv.points.col(p));
      total += cv.weights(p) * (gp(0) * vx(p) + gp(1) * vy(p));
    }
  }
  return total;
}

std::vector<double> observed_orders(const std::vector<double>& errors) {
  std::vector<double> orders;
  for (std::size_t i = 1; i < errors.size(); ++i) orders.push_back(std::log2(errors[i - 1] / errors[i]));
  return orders;
}

Table ConvergenceResult::table() const {
  Table t;
  t.kind = TableKind::Convergence;
  for (const auto& l : levels) t.rows.push_back({double(l.level), l.nelems, l.errors.h1_semi, l.errors.l2});
  return t;
}

std::vector<double> ConvergenceResult::h1_orders() const {
  std::vector<double> e;
  for (const auto& l : levels) e.push_back(l.errors.h1_semi);
  return observed_orders(e);
}

std::vector<double> ConvergenceResult::l2_orders() const {
  std::vector<double> e;
  for (const auto& l : levels) e.push_back(l.errors.l2);
  return observed_orders(e);
}

ConvergenceResult run_convergence(const ExperimentConfig& cfg, bool reconstruct) {
  cfg.validate();
  const ManufacturedCase mc = manufactured_case_2d(cfg.nu);
  ConvergenceResult result;
  result.reconstructed = reconstruct;
  for (int level = 0; level <= cfg.levels; ++level) {
    try {
      Discretization disc(level_mesh(cfg, level), cfg.k, cfg.m, cfg.penalty());
      const StokesSolution sol = disc.solve(mc.f, cfg.nu, reconstruct);
      ConvergenceLevel l;
      l.level = level;
      l.nelems = disc.mesh().num_cells();
      l.h = disc.mesh().h();
      l.errors = velocity_errors(disc.mesh(), disc.spaces().velocity, sol.u, mc.u, mc.grad_u);
      l.velocity_norm = velocity_pair_norm(disc.mesh(), disc.spaces(), sol.u, sol.ubar, disc.alpha());
      l.divergence = cell_divergence_norm(disc.mesh(), disc.spaces().velocity, sol.u);
      l.residual = sol.residual;
      if (!(l.divergence <= 1e-8 * l.velocity_norm)) {
        std::ostringstream msg;
        msg << "cellwise divergence " << l.divergence << " exceeds 1e-8 |||u_h|||_1 = " << l.velocity_norm;
        throw SolverError(msg.str());
      }
      result.levels.push_back(l);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "convergence level " << level << ": " << e.what();
      throw std::runtime_error(msg.str());
    }
  }
  return result;
}

std::vector<double> default_viscosities() {
  std::vector<double> nu;
  for (int e = 0; e <= 9; ++e) nu.push_back(std::pow(10.0, -e));
  return nu;
}

Table SweepResult::table() const {
  Table t;
  t.kind = TableKind::Sweep;
  for (std::size_t i = 0; i < nu.size(); ++i) t.rows.push_back({nu[i], nelems, errors[i].h1_semi, errors[i].l2});
  return t;
}

std::vector<SweepResult> run_nu_sweep(const ExperimentConfig& cfg, const std::vector<double>& viscosities,
                                      const std::vector<bool>& variants) {
  cfg.validate();
  if (viscosities.empty()) throw std::invalid_argument("empty viscosity list");
  Discretization disc(initial_mesh(cfg), cfg.k, cfg.m, cfg.penalty());
  std::vector<SweepResult> out;
  for (bool reconstruct : variants) {
    SweepResult s;
    s.reconstructed = reconstruct;
    s.nelems = disc.mesh().num_cells();
    for (double nu : viscosities) {
      const ManufacturedCase mc = manufactured_case_2d(nu);
      const StokesSolution sol = disc.solve(mc.f, nu, reconstruct);
      s.nu.push_back(nu);
      s.errors.push_back(velocity_errors(disc.mesh(), disc.spaces().velocity, sol.u, mc.u, mc.grad_u));
    }
    out.push_back(std::move(s));
  }
  return out;
}

double sweep_slope(const SweepResult& sweep, double nu_max, bool h1) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < sweep.nu.size(); ++i) {
    if (sweep.nu[i] > nu_max * (1 + 1e-12)) continue;
    x.push_back(std::log10(1.0 / sweep.nu[i]));
    y.push_back(std::log10(h1 ? sweep.errors[i].h1_semi : sweep.errors[i].l2));
  }
  if (x.size() < 2) throw std::invalid_argument("sweep_slope: fewer than two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

InvarianceReport run_invariance(const ExperimentConfig& cfg, const VectorField& grad_psi) {
  cfg.validate();
  const ManufacturedCase mc = manufactured_case_2d(cfg.nu);
  const VectorField f = mc.f;
  const VectorField shifted = [f, grad_psi](const Eigen::Vector2d& x) -> Eigen::Vector2d {
    return f(x) + grad_psi(x);
  };
  Discretization disc(initial_mesh(cfg), cfg.k, cfg.m, cfg.penalty());
  InvarianceReport r;
  r.nelems = disc.mesh().num_cells();
  auto change = [&](bool reconstruct) {
    const int deg = 2 * cfg.k + 12;
    const Eigen::VectorXd u0 = disc.solve(f, cfg.nu, reconstruct, deg).u;
    const Eigen::VectorXd u1 = disc.solve(shifted, cfg.nu, reconstruct, deg).u;
    return (u1 - u0).norm() / u0.norm();
  };
  r.plain = change(false);
  r.reconstructed = change(true);
  return r;
}

double bubble_identity_defect(unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const Mesh mesh = generate_structured(1);
  const Facet& f = mesh.facet(0);
  double defect = 0.0;
  for (int m = 0; m <= kMaxDegree; ++m) {
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd c(m + 1);
      for (int i = 0; i <= m; ++i) c(i) = dist(rng);
      const Eigen::VectorXd sum =
          bubble_project(mesh, 0, f.vertices[0], c) + bubble_project(mesh, 0, f.vertices[1], c);
      defect = std::max(defect, (sum - c).lpNorm<Eigen::Infinity>());
    }
  }
  for (int k = 1; k <= kMaxDegree; ++k) {
    for (int m = std::max(k - 1, 1); m <= k; ++m) {
      if (m == k - 1 && k < 2) continue;
      const Eigen::MatrixXd b0 = bubble_matrix(k, m, true), b1 = bubble_matrix(k, m, false);
      defect = std::max(defect, (b0 + b1 - Eigen::MatrixXd::Identity(k + 1, k + 1)).lpNorm<Eigen::Infinity>());
      // Each bubble vanishes at the opposite vertex.
      defect = std::max(defect, b0.row(k).lpNorm<Eigen::Infinity>());
      defect = std::max(defect, b1.row(0).lpNorm<Eigen::Infinity>());
    }
  }
  return defect;
}

PatchCheckLevel patch_check(Discretization& disc, double nu, unsigned seed) {
  const Mesh& mesh = disc.mesh();
  const ManufacturedCase mc = manufactured_case_2d(nu);
  const StokesSolution sol = disc.solve(mc.f, nu, false);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd load(disc.spaces().velocity.size());
  for (double& v : load) v = normal(rng);
  const StokesSolution generic = disc.solver().solve(load, 1.0);
  PatchCheckLevel out;
  out.nelems = mesh.num_cells();
  double sigma2 = 0.0, jump2 = 0.0;
  for (const VertexPatch& patch : build_patches(mesh)) {
    PatchSpaces ps = build_patch_spaces(mesh, patch, disc.spaces().k);
    if (ps.flux_facets.empty()) continue;
    const PatchLocalSystem system(mesh, disc.spaces(), std::move(ps), disc.spaces().m);
    const PatchDiagnostics d = patch_diagnostics(mesh, system, sol.u);
    const PatchDiagnostics g = patch_diagnostics(mesh, system, generic.u);
    ++out.patches;
    out.max_residual = std::max({out.max_residual, d.residual, g.residual});
    out.max_constant_rhs = std::max({out.max_constant_rhs, d.constant_rhs, g.constant_rhs});
    out.max_orthogonality = std::max(out.max_orthogonality, g.orthogonality);
    out.max_orthogonality_smooth = std::max(out.max_orthogonality_smooth, d.orthogonality);
    out.max_patch_stability = std::max(out.max_patch_stability, d.stability_ratio);
    sigma2 += d.sigma_norm * d.sigma_norm;
    jump2 += d.jump_norm * d.jump_norm;
  }
  out.bubble_identity = bubble_identity_defect();
  out.stability_ratio = jump2 > 0.0 ? std::sqrt(sigma2 / (mesh.h() * jump2)) : 0.0;
  return out;
}

std::vector<PatchCheckLevel> run_patch_check(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<PatchCheckLevel> out;
  for (int level = 0; level <= cfg.levels; ++level) {
    Discretization disc(level_mesh(cfg, level), cfg.k, cfg.m, cfg.penalty());
    PatchCheckLevel l = patch_check(disc, cfg.nu);
    l.n = cfg.mesh_path.empty() ? (cfg.n0 << level) : level;
    out.push_back(l);
  }
  return out;
}

VectorField pairing_field() {
  return [](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(std::sin(2.0 * std::numbers::pi * x(0)) * std::cos(std::numbers::pi * x(1)), std::exp(x(0)) * x(1) * x(1));
  };
}

AssumptionLevel assumption_check(Discretization& disc, double nu, int samples, unsigned seed) {
  const Mesh& mesh = disc.mesh();
  const DofMap& vel = disc.spaces().velocity;
  const ReconstructionOperator& r = disc.reconstruction();
  const ManufacturedCase mc = manufactured_case_2d(nu);
  const StokesSolution sol = disc.solve(mc.f, nu, true);
  AssumptionLevel out;
  out.nelems = mesh.num_cells();
  out.h = mesh.h();
  out.velocity_norm = velocity_pair_norm(mesh, disc.spaces(), sol.u, sol.ubar, disc.alpha());
  const Eigen::VectorXd ru = r.apply(sol.u);
  out.divergence = cell_divergence_norm(mesh, vel, ru);
  out.normal_jump = interior_normal_jump_norm(mesh, vel, ru);
  out.proximity = l2_norm(mesh, vel, Eigen::VectorXd(ru - sol.u)) / (out.h * out.velocity_norm);

  const VectorField g = pairing_field();
  const double gcon = con_norm(g, mesh, disc.spaces().k);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd load(vel.size());
    for (int i = 0; i < load.size(); ++i) load(i) = dist(rng);
    const StokesSolution rs = disc.solver().solve(load, 1.0);
    const double norm = velocity_pair_norm(mesh, disc.spaces(), rs.u, rs.ubar, disc.alpha());
    const double pairing = integrate_dot(mesh, vel, g, Eigen::VectorXd(-r.correction(rs.u)));
    out.pairing_constant = std::max(out.pairing_constant, std::abs(pairing) / (gcon * norm));
  }
  return out;
}

}  // namespace edg
