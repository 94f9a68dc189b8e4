#include "edg/basis.hpp"

#include "edg/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace edg {

namespace {

int checked_degree(int k) {
  if (k < 0 || k > kMaxDegree) {
    throw std::invalid_argument("unsupported polynomial degree " + std::to_string(k));
  }
  return k;
}

Eigen::Matrix2Xd lagrange_nodes(int k) {
  Eigen::Matrix2Xd nodes(2, triangle_dim(k));
  if (k == 0) {
    nodes.col(0) << 1.0 / 3.0, 1.0 / 3.0;
    return nodes;
  }
  nodes.col(0) << 0.0, 0.0;
  nodes.col(1) << 1.0, 0.0;
  nodes.col(2) << 0.0, 1.0;
  int c = 3;
  for (int j = 0; j <= k; ++j) {
    for (int i = 0; i + j <= k; ++i) {
      const bool vertex = (i == 0 && j == 0) || (i == k && j == 0) || (i == 0 && j == k);
      if (vertex) continue;
      nodes.col(c++) << static_cast<double>(i) / k, static_cast<double>(j) / k;
    }
  }
  return nodes;
}

}  // namespace

std::vector<std::array<int, 2>> monomial_exponents(int degree) {
  std::vector<std::array<int, 2>> e;
  for (int d = 0; d <= degree; ++d) {
    for (int a = d; a >= 0; --a) e.push_back({a, d - a});
  }
  return e;
}

CellBasis::CellBasis(int degree) : degree_(checked_degree(degree)), nodes_(lagrange_nodes(degree)) {
  for (Eigen::Index i = 0; i < nodes_.cols(); ++i) {
    const int a = static_cast<int>(std::lround(nodes_(0, i) * degree_));
    const int b = static_cast<int>(std::lround(nodes_(1, i) * degree_));
    indices_.push_back({a, b, degree_ - a - b});
  }
}

namespace {

// prod_{s<n} (k l - s) / (s + 1) and its derivative in l.
std::pair<double, double> lagrange_factor(int k, int n, double l) {
  double v = 1.0, dv = 0.0;
  for (int s = 0; s < n; ++s) {
    const double f = (k * l - s) / (s + 1);
    dv = dv * f + v * k / (s + 1);
    v *= f;
  }
  return {v, dv};
}

}  // namespace

Eigen::VectorXd CellBasis::values(const Eigen::Vector2d& xi) const {
  Eigen::VectorXd v(size());
  if (degree_ == 0) {
    v(0) = 1.0;
    return v;
  }
  const double l[3] = {xi(0), xi(1), 1.0 - xi(0) - xi(1)};
  for (int i = 0; i < size(); ++i) {
    v(i) = lagrange_factor(degree_, indices_[i][0], l[0]).first * lagrange_factor(degree_, indices_[i][1], l[1]).first *
           lagrange_factor(degree_, indices_[i][2], l[2]).first;
  }
  return v;
}

Eigen::MatrixX2d CellBasis::gradients(const Eigen::Vector2d& xi) const {
  Eigen::MatrixX2d g = Eigen::MatrixX2d::Zero(size(), 2);
  if (degree_ == 0) return g;
  const double l[3] = {xi(0), xi(1), 1.0 - xi(0) - xi(1)};
  for (int i = 0; i < size(); ++i) {
    const auto [p1, d1] = lagrange_factor(degree_, indices_[i][0], l[0]);
    const auto [p2, d2] = lagrange_factor(degree_, indices_[i][1], l[1]);
    const auto [p0, d0] = lagrange_factor(degree_, indices_[i][2], l[2]);
    g(i, 0) = d1 * p2 * p0 - p1 * p2 * d0;
    g(i, 1) = p1 * d2 * p0 - p1 * p2 * d0;
  }
  return g;
}

const CellBasis& cell_basis(int k) {
  checked_degree(k);
  static const std::array<CellBasis, kMaxDegree + 1> bases = {
      CellBasis(0), CellBasis(1), CellBasis(2), CellBasis(3), CellBasis(4)};
  return bases[k];
}

ShapeTable eval_cell_basis(int k, const Eigen::Matrix2Xd& points) {
  const CellBasis& basis = cell_basis(k);
  ShapeTable table;
  table.values.resize(basis.size(), points.cols());
  table.dx.resize(basis.size(), points.cols());
  table.dy.resize(basis.size(), points.cols());
  for (Eigen::Index q = 0; q < points.cols(); ++q) {
    table.values.col(q) = basis.values(points.col(q));
    const Eigen::MatrixX2d g = basis.gradients(points.col(q));
    table.dx.col(q) = g.col(0);
    table.dy.col(q) = g.col(1);
  }
  return table;
}

double facet_node(int m, int i) {
  return m == 0 ? 0.5 : static_cast<double>(i) / m;
}

Eigen::VectorXd eval_facet_lagrange(int m, double t) {
  checked_degree(m);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double ti = facet_node(m, i);
    for (int j = 0; j <= m; ++j) {
      if (j == i) continue;
      const double tj = facet_node(m, j);
      v(i) *= (t - tj) / (ti - tj);
    }
  }
  return v;
}

Eigen::VectorXd facet_lagrange_integrals(int m) {
  const QuadratureRule rule = segment_quadrature(m);
  Eigen::VectorXd integrals = Eigen::VectorXd::Zero(m + 1);
  for (int q = 0; q < rule.size(); ++q) integrals += rule.weights(q) * eval_facet_lagrange(m, rule.points(0, q));
  return integrals;
}

}  // namespace edg
