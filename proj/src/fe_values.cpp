#include "edg/fe_values.hpp"

#include <map>
#include <mutex>
#include <utility>

#include "edg/basis.hpp"
#include "edg/quadrature.hpp"

namespace edg {

namespace {

struct ReferenceTable {
  QuadratureRule rule;
  ShapeTable shape;
};

const ReferenceTable& reference_table(int k, int quad_degree) {
  static std::map<std::pair<int, int>, ReferenceTable> cache;
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  auto it = cache.find({k, quad_degree});
  if (it == cache.end()) {
    QuadratureRule rule = triangle_quadrature(quad_degree);
    ShapeTable shape = eval_cell_basis(k, rule.points);
    it = cache.emplace(std::make_pair(k, quad_degree), ReferenceTable{std::move(rule), std::move(shape)}).first;
  }
  return it->second;
}

}  // namespace

CellValues cell_values(const Mesh& mesh, int cell, int k, int quad_degree) {
  const ReferenceTable& ref = reference_table(k, quad_degree);
  const Eigen::Matrix2d jac = mesh.jacobian(cell);
  const Eigen::Matrix2d jinv_t = jac.inverse().transpose();
  const double det = jac.determinant();
  CellValues cv;
  const Eigen::Vector2d v0 = mesh.vertex(mesh.cell(cell)[0]);
  cv.points = (jac * ref.rule.points).colwise() + v0;
  cv.weights = ref.rule.weights * det;
  cv.phi = ref.shape.values;
  cv.dphi_dx = jinv_t(0, 0) * ref.shape.dx + jinv_t(0, 1) * ref.shape.dy;
  cv.dphi_dy = jinv_t(1, 0) * ref.shape.dx + jinv_t(1, 1) * ref.shape.dy;
  return cv;
}

FacetValues facet_values(const Mesh& mesh, int cell, int facet, int k, int quad_degree) {
  const QuadratureRule rule = segment_quadrature(quad_degree);
  const Facet& f = mesh.facet(facet);
  const CellBasis& basis = cell_basis(k);
  const Eigen::Matrix2d jinv = mesh.jacobian(cell).inverse();
  const Eigen::Vector2d v0 = mesh.vertex(mesh.cell(cell)[0]);
  const int nq = rule.size();
  FacetValues fv;
  fv.t = rule.points.row(0).transpose();
  fv.points.resize(2, nq);
  fv.weights = rule.weights * f.length;
  fv.phi.resize(basis.size(), nq);
  fv.dphi_dx.resize(basis.size(), nq);
  fv.dphi_dy.resize(basis.size(), nq);
  for (int q = 0; q < nq; ++q) {
    const Eigen::Vector2d x = f.point(mesh.vertices(), fv.t(q));
    fv.points.col(q) = x;
    const Eigen::Vector2d xi = jinv * (x - v0);
    fv.phi.col(q) = basis.values(xi);
    const Eigen::MatrixX2d g = basis.gradients(xi) * jinv;  // rows: physical gradients
    fv.dphi_dx.col(q) = g.col(0);
    fv.dphi_dy.col(q) = g.col(1);
  }
  fv.normal = mesh.normal_sign(cell, facet) * f.normal;
  return fv;
}

Eigen::MatrixXd facet_lagrange_table(int m, const Eigen::VectorXd& t) {
  Eigen::MatrixXd table(m + 1, t.size());
  for (Eigen::Index q = 0; q < t.size(); ++q) table.col(q) = eval_facet_lagrange(m, t(q));
  return table;
}

}  // namespace edg
