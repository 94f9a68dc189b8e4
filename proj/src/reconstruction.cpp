#include "edg/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "edg/basis.hpp"
#include "edg/fe_values.hpp"
#include "edg/quadrature.hpp"

namespace edg {

namespace {

bool toward_first(const Mesh& mesh, int facet, int vertex) {
  const Facet& f = mesh.facet(facet);
  if (f.vertices[0] == vertex) return true;
  if (f.vertices[1] == vertex) return false;
  std::ostringstream msg;
  msg << "vertex " << vertex << " is not an endpoint of facet " << facet;
  throw std::invalid_argument(msg.str());
}

double hat(bool first, double t) { return first ? 1.0 - t : t; }

// Shifted, scaled monomial basis of [P_d]^2 on a patch, component-major.
struct PatchMonomials {
  Eigen::Vector2d center;
  double scale;
  std::vector<std::array<int, 2>> exponents;

  int size() const { return 2 * static_cast<int>(exponents.size()); }
  Eigen::VectorXd scalar(const Eigen::Vector2d& x) const {
    const Eigen::Vector2d s = (x - center) / scale;
    Eigen::VectorXd v(exponents.size());
    for (std::size_t i = 0; i < exponents.size(); ++i)
      v(i) = std::pow(s(0), exponents[i][0]) * std::pow(s(1), exponents[i][1]);
    return v;
  }
};

}  // namespace

Eigen::VectorXd bubble_project(const Mesh& mesh, int facet, int vertex, const Eigen::VectorXd& coeffs) {
  const bool first = toward_first(mesh, facet, vertex);
  const int m = static_cast<int>(coeffs.size()) - 1;
  if (m < 0 || m > kMaxDegree) throw std::invalid_argument("bubble_project: unsupported degree");
  Eigen::VectorXd out(coeffs.size());
  for (int i = 0; i <= m; ++i) out(i) = coeffs(i) * hat(first, facet_node(m, i));
  return out;
}

Eigen::MatrixXd bubble_matrix(int k, int m, bool toward_first_vertex) {
  validate_degrees(k, m);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m + 1, m + 1);
  for (int i = 0; i <= m; ++i) w(i, i) = hat(toward_first_vertex, facet_node(m, i));
  if (m == k) return w;
  Eigen::MatrixXd embed(k + 1, m + 1), interp(m + 1, k + 1);
  for (int l = 0; l <= k; ++l) embed.row(l) = eval_facet_lagrange(m, facet_node(k, l)).transpose();
  for (int i = 0; i <= m; ++i) interp.row(i) = eval_facet_lagrange(k, facet_node(m, i)).transpose();
  const Eigen::MatrixXd ei = embed * interp;
  return embed * w * interp + 0.5 * (Eigen::MatrixXd::Identity(k + 1, k + 1) - ei);
}

PatchMean pi0_patch(const Mesh& mesh, const PatchSpaces& spaces, const std::vector<Eigen::VectorXd>& facet_coeffs) {
  if (facet_coeffs.size() != spaces.flux_facets.size())
    throw std::invalid_argument("pi0_patch: one coefficient vector per flux facet expected");
  PatchMean mean;
  if (spaces.flux_facets.empty() || spaces.flux_measure <= 0.0) {
    mean.degenerate = true;
    return mean;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < facet_coeffs.size(); ++i) {
    const int deg = static_cast<int>(facet_coeffs[i].size()) - 1;
    total += mesh.facet(spaces.flux_facets[i]).length * facet_lagrange_integrals(deg).dot(facet_coeffs[i]);
  }
  mean.value = total / spaces.flux_measure;
  return mean;
}

PatchLocalSystem::PatchLocalSystem(const Mesh& mesh, const EdgSpaces& global, PatchSpaces spaces, int m)
    : spaces_(std::move(spaces)), m_(m) {
  const int k = spaces_.k;
  validate_degrees(k, m);
  if (global.k != k) throw std::invalid_argument("PatchLocalSystem: degree mismatch");
  const int nk = triangle_dim(k);
  const int np = triangle_dim(k - 1);
  const int cs = spaces_.cell_sigma_size();
  const int ncells = static_cast<int>(spaces_.cells.size());
  const int n = offset_quotient() + 1;
  const int n_sigma = spaces_.sigma_size();

  auto patch_cell = [&](int c) {
    const auto it = std::find(spaces_.cells.begin(), spaces_.cells.end(), c);
    return it == spaces_.cells.end() ? -1 : static_cast<int>(it - spaces_.cells.begin());
  };

  matrix_ = Eigen::MatrixXd::Zero(n, n);
  velocity_dofs_.reserve(n_sigma);
  const int vdeg = 2 * k;
  for (int a = 0; a < ncells; ++a) {
    const int c = spaces_.cells[a];
    const auto& dofs = global.velocity.dofs(c);
    velocity_dofs_.insert(velocity_dofs_.end(), dofs.begin(), dofs.end());
    const CellValues cv = cell_values(mesh, c, k, vdeg);
    const CellValues cp = cell_values(mesh, c, k - 1, vdeg);
    const Eigen::MatrixXd wphi = cv.phi * cv.weights.asDiagonal();
    const Eigen::MatrixXd mass = wphi * cv.phi.transpose();
    const int s0 = a * cs;
    for (int comp = 0; comp < 2; ++comp) matrix_.block(s0 + comp * nk, s0 + comp * nk, nk, nk) = mass;
    // -int div(tau) q
    const Eigen::MatrixXd wq = cp.phi * cv.weights.asDiagonal();
    const int q0 = offset_pressure() + a * np;
    matrix_.block(q0, s0, np, nk) = -wq * cv.dphi_dx.transpose();
    matrix_.block(q0, s0 + nk, np, nk) = -wq * cv.dphi_dy.transpose();
    matrix_.block(q0, n - 1, np, 1) = cp.phi * cv.weights;
    for (int j = 0; j < spaces_.lambda_size(); ++j) {
      Eigen::VectorXd mx(cv.weights.size()), my(cv.weights.size());
      for (int p = 0; p < cv.weights.size(); ++p) {
        const Eigen::Vector2d mu = spaces_.lambda(j, cv.points.col(p));
        mx(p) = mu(0) * cv.weights(p);
        my(p) = mu(1) * cv.weights(p);
      }
      const int row = offset_lambda() + j;
      matrix_.block(row, s0, 1, nk) = (cv.phi * mx).transpose();
      matrix_.block(row, s0 + nk, 1, nk) = (cv.phi * my).transpose();
    }
  }

  // Facet moments int_F (tau_K . n_K) psi_l for the degree-k facet basis.
  const int fdeg = 2 * k + 1;
  auto facet_moments = [&](int c, int f) {
    const FacetValues fv = facet_values(mesh, c, f, k, fdeg);
    const Eigen::MatrixXd psi = facet_lagrange_table(k, fv.t);
    const Eigen::MatrixXd wpsi = psi * fv.weights.asDiagonal();
    Eigen::MatrixXd out(k + 1, cs);
    out.leftCols(nk) = fv.normal(0) * wpsi * fv.phi.transpose();
    out.rightCols(nk) = fv.normal(1) * wpsi * fv.phi.transpose();
    return out;
  };

  for (std::size_t i = 0; i < spaces_.constrained_facets.size(); ++i) {
    const int f = spaces_.constrained_facets[i];
    const Facet& facet = mesh.facet(f);
    int a = patch_cell(facet.cells[0]);
    int c = facet.cells[0];
    if (a < 0) {
      a = patch_cell(facet.cells[1]);
      c = facet.cells[1];
    }
    if (a < 0) throw std::logic_error("PatchLocalSystem: constrained facet outside the patch");
    matrix_.block(offset_normal() + static_cast<int>(i) * (k + 1), a * cs, k + 1, cs) = facet_moments(c, f);
  }

  const int ntr = spaces_.trace_pressure_size();
  jump_moments_ = Eigen::MatrixXd::Zero(ntr, n_sigma);
  const Eigen::VectorXd psi_integrals = facet_lagrange_integrals(k);
  for (std::size_t i = 0; i < spaces_.flux_facets.size(); ++i) {
    const int f = spaces_.flux_facets[i];
    const Facet& facet = mesh.facet(f);
    const int r0 = static_cast<int>(i) * (k + 1);
    for (int c : facet.cells) {
      if (c < 0) continue;
      const int a = patch_cell(c);
      if (a < 0) throw std::logic_error("PatchLocalSystem: flux facet with a cell outside the patch");
      jump_moments_.block(r0, a * cs, k + 1, cs) += facet_moments(c, f);
    }
    matrix_.block(offset_trace() + r0, n - 1, k + 1, 1) = facet.length * psi_integrals;
  }
  matrix_.block(offset_trace(), 0, ntr, n_sigma) = jump_moments_;

  // Symmetric completion of the constraint rows.
  const int nc = n - n_sigma;
  matrix_.block(0, n_sigma, n_sigma, nc) = matrix_.block(n_sigma, 0, nc, n_sigma).transpose();
  matrix_.block(n - 1, n_sigma, 1, nc - 1) = matrix_.block(n_sigma, n - 1, nc - 1, 1).transpose();
  mass_ = matrix_.topLeftCorner(n_sigma, n_sigma);

  // G^V = T J with J the jump moments: bubble transfer minus the weighted mean correction.
  transfer_ = Eigen::MatrixXd::Zero(ntr, ntr);
  Eigen::RowVectorXd hat_weights(ntr);
  Eigen::VectorXd means(ntr);
  for (std::size_t i = 0; i < spaces_.flux_facets.size(); ++i) {
    const int f = spaces_.flux_facets[i];
    const bool first = toward_first(mesh, f, spaces_.vertex);
    const int r0 = static_cast<int>(i) * (k + 1);
    transfer_.block(r0, r0, k + 1, k + 1) = bubble_matrix(k, m, first).transpose();
    for (int l = 0; l <= k; ++l) hat_weights(r0 + l) = hat(first, facet_node(k, l));
    means.segment(r0, k + 1) = mesh.facet(f).length * psi_integrals;
  }
  if (ntr > 0) transfer_ -= means * hat_weights / spaces_.flux_measure;

  if (ncells == 0) throw std::invalid_argument("PatchLocalSystem: empty patch");
  lu_.compute(matrix_);
  rcond_ = lu_.rcond();
  if (!(rcond_ > 1e-14)) {
    std::ostringstream msg;
    msg << "singular patch system at vertex " << spaces_.vertex << " (rcond " << rcond_ << ")";
    throw SolverError(msg.str());
  }
}

Eigen::VectorXd assemble_GV(const PatchLocalSystem& system, const Eigen::VectorXd& u) {
  const Eigen::VectorXd local = gather(u, system.velocity_dofs());
  const int nq = system.spaces().cell_pressure_size();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(nq + system.spaces().trace_pressure_size());
  g.tail(system.spaces().trace_pressure_size()) = system.rhs_transfer() * (system.jump_moments() * local);
  return g;
}

PatchSolution solve_patch(const PatchLocalSystem& system, const Eigen::VectorXd& gv, double tolerance) {
  const PatchSpaces& s = system.spaces();
  const int nq = s.cell_pressure_size() + s.trace_pressure_size();
  if (gv.size() != nq) throw std::invalid_argument("solve_patch: right-hand side size mismatch");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(system.size());
  rhs.segment(system.offset_pressure(), nq) = gv;
  Eigen::VectorXd x = system.solve(rhs);
  Eigen::VectorXd r = rhs - system.matrix() * x;
  x += system.solve(r);
  r = rhs - system.matrix() * x;
  PatchSolution sol;
  const double scale = rhs.norm();
  sol.residual = scale > 0.0 ? r.norm() / scale : r.norm();
  if (!(sol.residual <= tolerance)) {
    std::ostringstream msg;
    msg << "patch solve at vertex " << s.vertex << ": relative residual " << sol.residual << " exceeds "
        << tolerance;
    throw SolverError(msg.str());
  }
  sol.sigma = x.head(s.sigma_size());
  sol.normal_multipliers = x.segment(system.offset_normal(), s.normal_constraint_size());
  sol.pressure = x.segment(system.offset_pressure(), s.cell_pressure_size());
  sol.pressure_trace = x.segment(system.offset_trace(), s.trace_pressure_size());
  sol.lambda = x.segment(system.offset_lambda(), s.lambda_size());
  sol.quotient_multiplier = x(system.offset_quotient());
  return sol;
}

PatchDiagnostics patch_diagnostics(const Mesh& mesh, const PatchLocalSystem& system, const Eigen::VectorXd& u) {
  const PatchSpaces& s = system.spaces();
  const int k = s.k;
  const int nk = triangle_dim(k);
  const int cs = s.cell_sigma_size();
  const double h = mesh.h();
  PatchDiagnostics d;
  d.vertex = s.vertex;
  const Eigen::VectorXd gv = assemble_GV(system, u);
  const double gnorm = gv.norm();
  d.constant_rhs = gnorm > 0.0 ? std::abs(gv.sum()) / gnorm : std::abs(gv.sum());
  const PatchSolution sol = solve_patch(system, gv);
  d.residual = sol.residual;
  const Eigen::VectorXd& sigma = sol.sigma;

  double l2 = sigma.dot(system.mass() * sigma);
  double div2 = 0.0;
  PatchMonomials eta{s.center, s.scale, k >= 2 ? monomial_exponents(k - 2) : std::vector<std::array<int, 2>>{}};
  Eigen::VectorXd pairing = Eigen::VectorXd::Zero(eta.size());
  Eigen::VectorXd eta_norm2 = Eigen::VectorXd::Zero(eta.size());
  const int ne = static_cast<int>(eta.exponents.size());
  for (std::size_t a = 0; a < s.cells.size(); ++a) {
    const CellValues cv = cell_values(mesh, s.cells[a], k, 2 * k + 2);
    const Eigen::VectorXd sx = sigma.segment(a * cs, nk), sy = sigma.segment(a * cs + nk, nk);
    const Eigen::VectorXd div = cv.dphi_dx.transpose() * sx + cv.dphi_dy.transpose() * sy;
    div2 += div.dot(cv.weights.asDiagonal() * div);
    const Eigen::VectorXd vx = cv.phi.transpose() * sx, vy = cv.phi.transpose() * sy;
    for (int p = 0; p < cv.weights.size(); ++p) {
      const Eigen::VectorXd e = eta.scalar(cv.points.col(p));
      for (int j = 0; j < ne; ++j) {
        pairing(j) += cv.weights(p) * vx(p) * e(j);
        pairing(ne + j) += cv.weights(p) * vy(p) * e(j);
        eta_norm2(j) += cv.weights(p) * e(j) * e(j);
        eta_norm2(ne + j) += cv.weights(p) * e(j) * e(j);
      }
    }
  }
  const Eigen::VectorXd sigma_jumps = system.jump_moments() * sigma;
  const Eigen::VectorXd u_jumps = system.jump_moments() * gather(u, system.velocity_dofs());
  // Jump moments against the facet Lagrange basis -> L2 norms via the facet mass matrix.
  double sj2 = 0.0, uj2 = 0.0;
  {
    const QuadratureRule rule = segment_quadrature(2 * k);
    Eigen::MatrixXd ref_mass = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (int p = 0; p < rule.size(); ++p) {
      const Eigen::VectorXd psi = eval_facet_lagrange(k, rule.points(0, p));
      ref_mass += rule.weights(p) * psi * psi.transpose();
    }
    const Eigen::MatrixXd ref_inv = ref_mass.inverse();
    for (std::size_t i = 0; i < s.flux_facets.size(); ++i) {
      const double len = mesh.facet(s.flux_facets[i]).length;
      const auto js = sigma_jumps.segment(i * (k + 1), k + 1);
      const auto ju = u_jumps.segment(i * (k + 1), k + 1);
      sj2 += js.dot(ref_inv * js) / len;
      uj2 += ju.dot(ref_inv * ju) / len;
    }
  }
  d.sigma_norm = std::sqrt(std::max(l2, 0.0) + h * h * div2 + h * sj2);
  d.jump_norm = std::sqrt(uj2);
  d.stability_ratio = d.jump_norm > 0.0 ? d.sigma_norm / (std::sqrt(h) * d.jump_norm) : 0.0;
  const double sl2 = std::sqrt(std::max(l2, 0.0));
  for (int j = 0; j < eta.size(); ++j) {
    const double denom = sl2 * std::sqrt(eta_norm2(j));
    if (denom > 0.0) d.orthogonality = std::max(d.orthogonality, std::abs(pairing(j)) / denom);
  }
  return d;
}

ReconstructionOperator::ReconstructionOperator(Eigen::SparseMatrix<double> solution_map,
                                               Eigen::SparseMatrix<double> jump_map)
    : solution_map_(std::move(solution_map)), jump_map_(std::move(jump_map)) {
  if (solution_map_.cols() != jump_map_.rows() || solution_map_.rows() != jump_map_.cols())
    throw std::invalid_argument("ReconstructionOperator: incompatible factors");
}

Eigen::VectorXd ReconstructionOperator::correction(const Eigen::VectorXd& u) const {
  if (u.size() != size()) throw std::invalid_argument("ReconstructionOperator: dimension mismatch");
  return solution_map_ * (jump_map_ * u);
}

Eigen::VectorXd ReconstructionOperator::apply(const Eigen::VectorXd& u) const { return u - correction(u); }

Eigen::VectorXd ReconstructionOperator::apply_transpose(const Eigen::VectorXd& load) const {
  if (load.size() != size()) throw std::invalid_argument("ReconstructionOperator: dimension mismatch");
  return load - jump_map_.transpose() * (solution_map_.transpose() * load);
}

Eigen::SparseMatrix<double> ReconstructionOperator::matrix() const {
  Eigen::SparseMatrix<double> id(size(), size());
  id.setIdentity();
  Eigen::SparseMatrix<double> sj = solution_map_ * jump_map_;
  return id - sj;
}

ReconstructionOperator build_reconstruction_operator(const Mesh& mesh, const EdgSpaces& spaces,
                                                     const ReconstructionOptions& options) {
  const auto patches = build_patches(mesh);
  const int nv = spaces.velocity.size();
  std::vector<Eigen::Triplet<double>> s_entries, j_entries;
  int offset = 0;
  for (const VertexPatch& patch : patches) {
    PatchSpaces ps = build_patch_spaces(mesh, patch, spaces.k, options.boundary);
    if (ps.flux_facets.empty()) continue;
    const PatchLocalSystem system(mesh, spaces, std::move(ps), spaces.m);
    const PatchSpaces& s = system.spaces();
    const int ntr = s.trace_pressure_size();
    // Columns of the patch solution operator for unit facet-pressure data, composed with the transfer.
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(system.size(), ntr);
    rhs.block(system.offset_trace(), 0, ntr, ntr) = system.rhs_transfer();
    Eigen::MatrixXd x = system.solve(rhs);
    Eigen::MatrixXd r = rhs - system.matrix() * x;
    x += system.solve(r);
    r = rhs - system.matrix() * x;
    const double rn = rhs.norm();
    const double residual = rn > 0.0 ? r.norm() / rn : r.norm();
    if (!(residual <= options.patch_tolerance)) {
      std::ostringstream msg;
      msg << "patch solve at vertex " << s.vertex << ": relative residual " << residual << " exceeds "
          << options.patch_tolerance;
      throw SolverError(msg.str());
    }
    const auto& dofs = system.velocity_dofs();
    const Eigen::MatrixXd& jm = system.jump_moments();
    for (int col = 0; col < ntr; ++col) {
      for (int i = 0; i < s.sigma_size(); ++i) {
        const double v = x(i, col);
        if (v != 0.0 && dofs[i] >= 0) s_entries.emplace_back(dofs[i], offset + col, v);
      }
      for (int i = 0; i < s.sigma_size(); ++i) {
        const double v = jm(col, i);
        if (v != 0.0 && dofs[i] >= 0) j_entries.emplace_back(offset + col, dofs[i], v);
      }
    }
    offset += ntr;
  }
  Eigen::SparseMatrix<double> smap(nv, offset), jmap(offset, nv);
  smap.setFromTriplets(s_entries.begin(), s_entries.end());
  jmap.setFromTriplets(j_entries.begin(), j_entries.end());
  return ReconstructionOperator(std::move(smap), std::move(jmap));
}

Eigen::VectorXd modified_load(const ReconstructionOperator& r, const Eigen::VectorXd& load) {
  return r.apply_transpose(load);
}

double con_norm(const VectorField& g, const Mesh& mesh, int k) {
  if (k < 2) throw std::invalid_argument("con_norm: k must be at least 2");
  const double h = mesh.h();
  const int qdeg = 2 * k + 4;
  double total = 0.0;
  for (const VertexPatch& patch : build_patches(mesh)) {
    double scale = 0.0;
    for (int c : patch.cells) scale = std::max(scale, mesh.diameter(c));
    const PatchMonomials mono{mesh.vertex(patch.vertex), scale, monomial_exponents(k - 2)};
    const int nb = static_cast<int>(mono.exponents.size());
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::MatrixXd moments = Eigen::MatrixXd::Zero(nb, 2);
    std::vector<CellValues> values;
    for (int c : patch.cells) {
      values.push_back(cell_values(mesh, c, 0, qdeg));
      const CellValues& cv = values.back();
      for (int p = 0; p < cv.weights.size(); ++p) {
        const Eigen::Vector2d x = cv.points.col(p);
        const Eigen::VectorXd e = mono.scalar(x);
        gram += cv.weights(p) * e * e.transpose();
        moments += cv.weights(p) * e * g(x).transpose();
      }
    }
    const Eigen::MatrixXd coef = gram.ldlt().solve(moments);
    double err2 = 0.0;
    for (const CellValues& cv : values) {
      for (int p = 0; p < cv.weights.size(); ++p) {
        const Eigen::Vector2d x = cv.points.col(p);
        const Eigen::Vector2d r = g(x) - coef.transpose() * mono.scalar(x);
        err2 += cv.weights(p) * r.squaredNorm();
      }
    }
    total += h * h * err2;
  }
  return std::sqrt(total);
}

}  // namespace edg
