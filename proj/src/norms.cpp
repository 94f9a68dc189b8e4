#include "edg/norms.hpp"

#include <cmath>

#include "edg/basis.hpp"
#include "edg/fe_values.hpp"
#include "edg/quadrature.hpp"

namespace edg {

VelocityErrors velocity_errors(const Mesh& mesh, const DofMap& velocity, const Eigen::VectorXd& u,
                               const VectorField& exact, const TensorField& exact_gradient, int quad_degree) {
  const int k = velocity.degree();
  const int nk = triangle_dim(k);
  if (quad_degree < 0) quad_degree = 2 * k + 4;
  double l2 = 0.0, h1 = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellValues cv = cell_values(mesh, c, k, quad_degree);
    const Eigen::VectorXd loc = gather(u, velocity.dofs(c));
    const auto ux = loc.head(nk), uy = loc.tail(nk);
    for (int q = 0; q < cv.weights.size(); ++q) {
      const Eigen::Vector2d x = cv.points.col(q);
      const Eigen::Vector2d uh(cv.phi.col(q).dot(ux), cv.phi.col(q).dot(uy));
      l2 += cv.weights(q) * (exact(x) - uh).squaredNorm();
      if (exact_gradient) {
        Eigen::Matrix2d gh;
        gh << cv.dphi_dx.col(q).dot(ux), cv.dphi_dy.col(q).dot(ux), cv.dphi_dx.col(q).dot(uy),
            cv.dphi_dy.col(q).dot(uy);
        h1 += cv.weights(q) * (exact_gradient(x) - gh).squaredNorm();
      }
    }
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

double l2_norm(const Mesh& mesh, const VectorField& g, int quad_degree) {
  double s = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellValues cv = cell_values(mesh, c, 0, quad_degree);
    for (int q = 0; q < cv.weights.size(); ++q) s += cv.weights(q) * g(cv.points.col(q)).squaredNorm();
  }
  return std::sqrt(s);
}

double l2_norm(const Mesh& mesh, const DofMap& velocity, const Eigen::VectorXd& u) {
  const int k = velocity.degree();
  const int nk = triangle_dim(k);
  double s = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellValues cv = cell_values(mesh, c, k, 2 * k);
    const Eigen::VectorXd loc = gather(u, velocity.dofs(c));
    const Eigen::VectorXd vx = cv.phi.transpose() * loc.head(nk);
    const Eigen::VectorXd vy = cv.phi.transpose() * loc.tail(nk);
    s += (cv.weights.array() * (vx.array().square() + vy.array().square())).sum();
  }
  return std::sqrt(s);
}

double velocity_pair_norm(const Mesh& mesh, const EdgSpaces& spaces, const Eigen::VectorXd& u,
                          const Eigen::VectorXd& ubar, double alpha) {
  const int k = spaces.k;
  const int nk = triangle_dim(k);
  double grad = 0.0, pen = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellValues cv = cell_values(mesh, c, k, 2 * k);
    const Eigen::VectorXd loc = gather(u, spaces.velocity.dofs(c));
    for (int comp = 0; comp < 2; ++comp) {
      const auto coef = loc.segment(comp * nk, nk);
      const Eigen::VectorXd gx = cv.dphi_dx.transpose() * coef;
      const Eigen::VectorXd gy = cv.dphi_dy.transpose() * coef;
      grad += (cv.weights.array() * (gx.array().square() + gy.array().square())).sum();
    }
    for (int i = 0; i < 3; ++i) {
      const int f = mesh.cell_facet(c, i);
      const FacetValues fv = facet_values(mesh, c, f, k, 2 * k);
      const Eigen::MatrixXd psi = facet_lagrange_table(k, fv.t);
      const Eigen::VectorXd tr = gather(ubar, spaces.velocity_trace.dofs(f));
      for (int comp = 0; comp < 2; ++comp) {
        const Eigen::VectorXd diff =
            psi.transpose() * tr.segment(comp * (k + 1), k + 1) - fv.phi.transpose() * loc.segment(comp * nk, nk);
        pen += alpha / mesh.diameter(c) * (fv.weights.array() * diff.array().square()).sum();
      }
    }
  }
  return std::sqrt(grad + pen);
}

double pressure_pair_norm(const Mesh& mesh, const EdgSpaces& spaces, const Eigen::VectorXd& p,
                          const Eigen::VectorXd& pbar) {
  const int k = spaces.k;
  const int m = spaces.m;
  double s = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellValues pv = cell_values(mesh, c, k - 1, 2 * k);
    const Eigen::VectorXd vals = pv.phi.transpose() * gather(p, spaces.pressure.dofs(c));
    s += (pv.weights.array() * vals.array().square()).sum();
    for (int i = 0; i < 3; ++i) {
      const int f = mesh.cell_facet(c, i);
      const FacetValues fv = facet_values(mesh, c, f, 0, 2 * m);
      const Eigen::VectorXd tv = facet_lagrange_table(m, fv.t).transpose() * gather(pbar, spaces.pressure_trace.dofs(f));
      s += mesh.diameter(c) * (fv.weights.array() * tv.array().square()).sum();
    }
  }
  return std::sqrt(s);
}

double cell_divergence_norm(const Mesh& mesh, const DofMap& velocity, const Eigen::VectorXd& u) {
  const int k = velocity.degree();
  const int nk = triangle_dim(k);
  double s = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellValues cv = cell_values(mesh, c, k, 2 * k);
    const Eigen::VectorXd loc = gather(u, velocity.dofs(c));
    const Eigen::VectorXd div = cv.dphi_dx.transpose() * loc.head(nk) + cv.dphi_dy.transpose() * loc.tail(nk);
    s += (cv.weights.array() * div.array().square()).sum();
  }
  return std::sqrt(s);
}

Eigen::VectorXd normal_jump(const Mesh& mesh, const DofMap& velocity, const Eigen::VectorXd& u, int facet,
                            const Eigen::VectorXd& t) {
  const int k = velocity.degree();
  const int nk = triangle_dim(k);
  const CellBasis& basis = cell_basis(k);
  const Facet& f = mesh.facet(facet);
  Eigen::VectorXd jump = Eigen::VectorXd::Zero(t.size());
  for (int side = 0; side < 2; ++side) {
    const int c = f.cells[side];
    if (c < 0) continue;
    const Eigen::Vector2d n = mesh.normal_sign(c, facet) * f.normal;
    const Eigen::VectorXd loc = gather(u, velocity.dofs(c));
    for (Eigen::Index q = 0; q < t.size(); ++q) {
      const Eigen::VectorXd phi = basis.values(mesh.map_to_reference(c, f.point(mesh.vertices(), t(q))));
      jump(q) += n(0) * phi.dot(loc.head(nk)) + n(1) * phi.dot(loc.tail(nk));
    }
  }
  return jump;
}

namespace {

double facet_jump_norm(const Mesh& mesh, const DofMap& velocity, const Eigen::VectorXd& u, bool boundary) {
  const QuadratureRule rule = segment_quadrature(2 * velocity.degree());
  const Eigen::VectorXd t = rule.points.row(0).transpose();
  double s = 0.0;
  for (int f = 0; f < mesh.num_facets(); ++f) {
    if (mesh.facet(f).on_boundary() != boundary) continue;
    const Eigen::VectorXd j = normal_jump(mesh, velocity, u, f, t);
    s += mesh.facet(f).length * (rule.weights.array() * j.array().square()).sum();
  }
  return std::sqrt(s);
}

}  // namespace

double interior_normal_jump_norm(const Mesh& mesh, const DofMap& velocity, const Eigen::VectorXd& u) {
  return facet_jump_norm(mesh, velocity, u, false);
}

double boundary_normal_trace_norm(const Mesh& mesh, const DofMap& velocity, const Eigen::VectorXd& u) {
  return facet_jump_norm(mesh, velocity, u, true);
}

NormReport compute_norms(const Mesh& mesh, const EdgSpaces& spaces, const StokesSolution& solution,
                         const VectorField& exact, const TensorField& exact_gradient) {
  NormReport r;
  if (exact) {
    const VelocityErrors e = velocity_errors(mesh, spaces.velocity, solution.u, exact, exact_gradient);
    r.l2_error = e.l2;
    r.h1_semi_error = e.h1_semi;
  }
  r.velocity_norm = velocity_pair_norm(mesh, spaces, solution.u, solution.ubar, solution.alpha);
  r.pressure_norm = pressure_pair_norm(mesh, spaces, solution.p, solution.pbar);
  r.divergence = cell_divergence_norm(mesh, spaces.velocity, solution.u);
  r.normal_jump = interior_normal_jump_norm(mesh, spaces.velocity, solution.u);
  r.boundary_normal = boundary_normal_trace_norm(mesh, spaces.velocity, solution.u);
  return r;
}

}  // namespace edg
